"""Sampled gate -> filter -> gate cascade, used as an independent oracle.

The record holds an integer number of RF and modulation periods, so the
periodic steady state is obtained by applying the filter in the DFT domain
(circular convolution) and no warmup needs to be discarded.  The input tone
is analytic, ``exp(i w_rf t)``: a real cosine would also carry a tone at
``-f_rf`` whose gate harmonics land inside the passband.

The filter acts on positive frequencies only by default, matching the
single-sided sideband algebra of the closed forms and the harmonic solver.
With ``one_sided=False`` its Hermitian image also passes the gate products
that reach ``-f_rf`` (harmonics near ``-2 f_rf / f_m``); they return at a
relative level of order ``(f_m / (2 pi f_rf))**2``.

Gate samples that fall exactly on a clock edge take the value 1/2, which
makes the sampled square wave converge to the continuous one at second
order in the sample spacing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GridError, MismatchError
from .filters import BrickWall, FilterModel, evaluate
from .spectra import ClockSpec, HarmonicSpectrum

LEAKAGE_TOL = 1e-9


def _is_int(x: float, rtol: float = 1e-9) -> bool:
    return abs(x - round(x)) <= rtol * max(1.0, abs(x))


@dataclass(frozen=True)
class SimGrid:
    fs_hz: float
    n_samples: int
    f_rf_hz: float
    f_m_hz: float

    def __post_init__(self):
        if self.fs_hz <= 0 or self.n_samples < 2:
            raise GridError("need fs_hz > 0 and n_samples >= 2")
        span = self.n_samples / self.fs_hz
        for name, f in (("f_rf_hz", self.f_rf_hz), ("f_m_hz", self.f_m_hz)):
            if not _is_int(f * span):
                raise GridError(f"{name}={f:g} is not coherent: {f * span:.6g} periods in the record")
        self.check_nyquist(0)

    @classmethod
    def canonical(cls, f_rf_hz: float = 900e6, f_m_hz: float = 12.5e6,
                  samples_per_period: int = 2048, n_samples: int = 2**18) -> "SimGrid":
        """Grid with ``samples_per_period`` samples per modulation period."""
        return cls(samples_per_period * f_m_hz, n_samples, f_rf_hz, f_m_hz)

    @property
    def dt(self) -> float:
        return 1.0 / self.fs_hz

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_samples) / self.fs_hz

    @property
    def bin_hz(self) -> float:
        return self.fs_hz / self.n_samples

    def bin_of(self, f_hz: float) -> int:
        k = f_hz / self.bin_hz
        if not _is_int(k):
            raise GridError(f"{f_hz:g} Hz does not fall on an FFT bin")
        return int(round(k)) % self.n_samples

    def check_nyquist(self, n_max: int):
        top = self.f_rf_hz + n_max * self.f_m_hz
        if not self.fs_hz > 2.0 * top:
            raise GridError(f"fs={self.fs_hz:g} Hz does not exceed twice the highest "
                            f"analyzed sideband {top:g} Hz")

    def delay_samples(self, delay_s: float) -> int:
        d = delay_s * self.fs_hz
        if not _is_int(d):
            raise GridError(f"delay {delay_s:g} s is {d:.6g} samples, not an integer")
        return int(round(d))


def gate(grid: SimGrid, clock: ClockSpec | None) -> np.ndarray:
    """Sampled 0/1 switching waveform (1/2 on edges); ``None`` means always ON."""
    if clock is None:
        return np.ones(grid.n_samples)
    spp = grid.fs_hz / clock.frequency_hz
    pos = np.mod(np.arange(grid.n_samples) - clock.phase_rad / (2 * math.pi) * spp, spp)
    tol = 1e-9 * spp
    g = np.where(pos < clock.duty * spp, 1.0, 0.0)
    edge = (pos < tol) | (spp - pos < tol) | (np.abs(pos - clock.duty * spp) < tol)
    g[edge] = 0.5
    return g


def tone(grid: SimGrid, amplitude: complex = 1.0, analytic: bool = True) -> np.ndarray:
    phase = 2 * math.pi * grid.f_rf_hz * grid.times
    if analytic:
        return amplitude * np.exp(1j * phase)
    return amplitude * np.cos(phase)


def filter_response(grid: SimGrid, model: FilterModel, one_sided: bool = True) -> np.ndarray:
    """Transmission at every DFT bin; zero at ``f <= 0`` unless ``one_sided`` is False.

    The two-sided response is the Hermitian extension of a real filter.
    """
    f = np.fft.fftfreq(grid.n_samples, grid.dt)
    pos = np.abs(f)
    pos[pos == 0] = grid.bin_hz * 1e-3  # DC: any point far below the passband
    h = evaluate(model, pos)[..., 1, 0]
    if one_sided:
        return np.where(f > 0, h, 0.0)
    return np.where(f < 0, np.conj(h), h)


def apply_filter(grid: SimGrid, x: np.ndarray, model: FilterModel | None,
                 one_sided: bool = True) -> np.ndarray:
    if model is None:
        return x
    if isinstance(model, BrickWall):
        grid.delay_samples(model.delay_s)
    return np.fft.ifft(np.fft.fft(x) * filter_response(grid, model, one_sided))


def simulate_path(grid: SimGrid, clock_in: ClockSpec | None, clock_out: ClockSpec | None,
                  model: FilterModel | None, x: np.ndarray | None = None,
                  one_sided: bool = True) -> np.ndarray:
    """Steady-state samples of ``gate(clock_out) . filter . gate(clock_in)`` applied to ``x``.

    ``x`` defaults to the unit analytic tone at ``grid.f_rf_hz``.
    """
    for ck in (clock_in, clock_out):
        if ck is not None and not _is_int(ck.frequency_hz * grid.n_samples / grid.fs_hz):
            raise GridError(f"clock at {ck.frequency_hz:g} Hz is not coherent with the record")
    if x is None:
        x = tone(grid)
    x = np.asarray(x)
    if x.shape != (grid.n_samples,):
        raise MismatchError(f"input has shape {x.shape}, grid needs ({grid.n_samples},)")
    y = apply_filter(grid, gate(grid, clock_in) * x, model, one_sided)
    return gate(grid, clock_out) * y


def spectrum_at_sidebands(samples: np.ndarray, grid: SimGrid, n_max: int,
                          leakage_tol: float = LEAKAGE_TOL, analytic: bool = True) -> HarmonicSpectrum:
    """Complex amplitudes at ``f_rf + n f_m``, ``|n| <= n_max``.

    A unit analytic tone (or a unit cosine with ``analytic=False``) maps to
    amplitude 1 at ``n = 0``.  Bins strictly between sidebands inside the
    analyzed span must stay below ``leakage_tol`` of the largest sideband.
    """
    samples = np.asarray(samples)
    if samples.shape != (grid.n_samples,):
        raise GridError(f"sample count {samples.shape} does not match the grid")
    grid.check_nyquist(n_max)
    spec = np.fft.fft(samples) / grid.n_samples
    if not analytic:
        spec = 2.0 * spec
    k0 = grid.bin_of(grid.f_rf_hz)
    step = grid.bin_of(grid.f_m_hz)
    bins = [(k0 + n * step) % grid.n_samples for n in range(-n_max, n_max + 1)]
    coeffs = {n: complex(spec[b]) for n, b in zip(range(-n_max, n_max + 1), bins)}
    peak = max(abs(c) for c in coeffs.values())
    if peak > 0 and step > 1:
        span = (k0 + np.arange(-n_max * step, n_max * step + 1)) % grid.n_samples
        between = np.setdiff1d(span, bins)
        leak = np.abs(spec[between]).max() if len(between) else 0.0
        if leak > leakage_tol * peak:
            raise GridError(f"off-sideband leakage {leak / peak:.3g} of the peak; "
                            "input is not coherent with the grid")
    return HarmonicSpectrum(grid.f_rf_hz, grid.f_m_hz, coeffs)


def superpose_paths(paths, normalization: float = 1.0) -> np.ndarray:
    """Weighted elementwise sum of equally long sample sequences."""
    paths = [np.asarray(p) for p in paths]
    if not paths:
        raise ValueError("need at least one path")
    if any(p.shape != paths[0].shape for p in paths):
        raise MismatchError("paths differ in length")
    return normalization * np.sum(paths, axis=0)
