# %% [markdown]
# # Sideband algebra of a switched delay path
#
# A tone is gated by a 50 % clock, filtered by an ideal band-pass that keeps
# the carrier and the first pair of products, then gated again a quarter
# period later.  The output is a comb at f_rf + n f_m.

# %%
import math

import numpy as np

from circsim import filters, spectra, timedomain

fm = 12.5e6
clock = spectra.ClockSpec(fm)
path = spectra.PathConfig(900e6, clock, 1 / (4 * fm), 20e6)

branch = spectra.branch_output_coeffs(path, 6)
for n in range(0, 7):
    print(f"n={n}  |b_n| = {abs(branch[n]):.5f}")

# %% [markdown]
# The same numbers from a sampled simulation of the cascade.  The record is
# coherent, so the FFT bins sit exactly on the sidebands.

# %%
grid = timedomain.SimGrid.canonical()
bw = filters.BrickWall(900e6, 40e6, 20e-9)
y = timedomain.simulate_path(grid, clock, clock.shifted(math.pi / 2), bw)
fft = timedomain.spectrum_at_sidebands(y, grid, 6)
rel = [abs(fft[n] - branch[n]) / abs(branch[n]) for n in range(-6, 7) if branch[n] != 0]
print("worst relative difference, FFT vs closed form:", f"{max(rel):.1e}")

# %% [markdown]
# Two branches at 0/180 degrees cancel the odd products; four at
# 0/90/180/270 degrees also cancel n = 2, leaving n = 4 as the first survivor.

# %%
diff = spectra.differential_spectrum(path, 6)
quad = spectra.quad_spectrum(path, 6)
print("differential IL:", f"{spectra.theoretical_insertion_loss(diff):.3f} dB")
for name, spec in (("differential", diff), ("quad", quad)):
    levels = spectra.imp_levels_dbc(spec)
    print(name, {n: round(v, 1) for n, v in levels.items() if n > 0})
