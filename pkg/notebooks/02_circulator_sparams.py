# %% [markdown]
# # Four-port S-parameters of the differential circulator
#
# Canonical scenario: brick-wall filter (900 MHz, 40 MHz, 20 ns, 0.9 dB),
# f_m = 12.5 MHz, switches 5 ohm / 1 Mohm, 50 ohm ports.

# %%
import numpy as np

from circsim import filters, metrics, network

bw = filters.BrickWall(900e6, 40e6, 20e-9, il_db=0.9)
top = network.differential(bw)
res = network.solve(top, 900e6)
s = res.fundamental
with np.printoptions(precision=2, suppress=True):
    print("|S| in dB at 900 MHz (row = out port, column = in port)")
    print(20 * np.log10(np.abs(s)))

# %% [markdown]
# Power goes 1 -> 2 -> 3 -> 4 -> 1.  A sweep gives the isolation band.

# %%
grid = np.linspace(860e6, 940e6, 161)
sweep = network.sweep(top, grid)
bw_hz, frac = metrics.isolation_bandwidth(sweep, 20, 3, 1, 900e6)
print(f"20-dB |S31| bandwidth: {bw_hz / 1e6:.2f} MHz ({100 * frac:.2f} %)")
for f, r in zip(grid[::20], sweep[::20]):
    print(f"{f / 1e6:6.1f} MHz  S21 {20 * np.log10(abs(r.s(2, 1))):7.2f} dB"
          f"  S31 {20 * np.log10(abs(r.s(3, 1))):7.2f} dB")

# %% [markdown]
# The nodal conversion-matrix solver converges slowly for hard switching;
# the switched-state solver is exact for any n_max that covers the passband.

# %%
exact = abs(res.s(2, 1))
for n in (8, 16, 32, 64):
    nodal = abs(network.solve(top, 900e6, n, method="nodal").s(2, 1))
    print(f"n_max={n:3d}  nodal |S21| = {nodal:.6f}  (switched {exact:.6f})")

# %% [markdown]
# Quad: two boards combined at each port.  With a matched combiner the n = 2
# products of the two boards are absorbed; with a plain tee they are
# reflected back into the filters and partly reconverted to the carrier.

# %%
ideal = filters.BrickWall(900e6, 40e6, 20e-9)
for comb in ("ideal", "tee"):
    q = network.quad(ideal, ron_ohm=1e-6, roff_ohm=1e12, combiner=comb)
    spec = network.solve(q, 900e6, 8).spectrum(1, 2)
    print(f"{comb:5s}  |S21| = {abs(spec[0]):.5f}  n=4: "
          f"{20 * np.log10(abs(spec[4]) / abs(spec[0])):.2f} dBc")
