"""From enhanced absorption to amplification under blue/red pumping.

With the optical pump on the blue sideband and the microwave pump on the
red sideband, raising the optical power first pushes the resonant probe
transmission below the bare-cavity floor (enhanced absorption), then lifts
it above unity (parametric amplification).  The insets zoom into the narrow
mechanical feature at resonance.

Writes demos/output/absorption_to_amplification.png.
"""

from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import hybridoem as h

OUT = Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)

device = h.example_device()
powers = [0.0, 10e-6, 40e-6]

fig, axes = plt.subplots(1, 3, figsize=(12, 4), sharey=False)
for ax, P_o in zip(axes, powers):
    drive = h.blue_red_drive(device, P_o, 1e-6, P_p=1e-9)
    spec = h.spectrum_sweep(device, drive)
    ax.plot(spec.axis / device.kappa_o, spec.t_sq)
    ax.set_title(f"$P_o$ = {P_o*1e6:g} $\\mu$W")
    ax.set_xlabel(r"$\Delta_p/\kappa_o$")

    verdict = h.classify_regime(spec)
    print(f"P_o = {P_o*1e6:5g} uW: regime {verdict.label}, "
          f"|t(0)|^2 = {verdict.center_t_sq:.4f}, max |t|^2 = {verdict.max_t_sq:.4f}")

    if P_o > 0:
        # zoomed view of the pump-broadened mechanical feature
        zoom = h.spectrum_sweep(device, drive,
                                h.mechanical_window_axis(device, spec.steady))
        inset = ax.inset_axes([0.55, 0.55, 0.4, 0.4])
        inset.plot(zoom.axis, zoom.t_sq)
        inset.axhline(1.0, color="gray", lw=0.5)
        inset.tick_params(labelsize=6)

axes[0].set_ylabel(r"$|t|^2$")
fig.tight_layout()
fig.savefig(OUT / "absorption_to_amplification.png", dpi=150)
print(f"wrote {OUT / 'absorption_to_amplification.png'}")
