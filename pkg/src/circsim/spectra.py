"""Closed-form sideband spectra of switched delay-filter paths.

A unit tone at ``f_rf`` is gated by a 50 % square wave, passed through an
ideal brick-wall filter that keeps only the carrier and the two first-order
intermodulation products (IMPs), and gated again by a clock lagging the first
one by a quarter period.  The output is a comb of sidebands at
``f_rf + n * f_m`` whose complex amplitudes are available in closed form.
Summing branches clocked at 0/180 degrees cancels the odd-order IMPs, and
summing four branches at 0/90/180/270 degrees also cancels the second-order
ones.

All sideband amplitudes here use the convention ``x(t) = sum_n c_n
exp(+i n w_m t)``, so a clock delayed by ``phi / w_m`` contributes a factor
``exp(-i n phi)`` to harmonic ``n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

import numpy as np

from .errors import DegenerateError, MismatchError, RegimeError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ClockSpec:
    """Square-wave switch control signal, ON for ``duty`` of each period.

    ``phase_rad`` delays the waveform by ``phase_rad / (2 pi f_m)`` seconds;
    phase 0 is ON over ``[0, duty * T_m)``.
    """

    frequency_hz: float
    duty: float = 0.5
    phase_rad: float = 0.0

    def __post_init__(self):
        if not self.frequency_hz > 0:
            raise ValueError(f"clock frequency must be > 0, got {self.frequency_hz}")
        if not 0.0 < self.duty < 1.0:
            raise ValueError(f"duty must lie in (0, 1), got {self.duty}")
        object.__setattr__(self, "phase_rad", float(self.phase_rad) % TWO_PI)

    @property
    def period_s(self) -> float:
        return 1.0 / self.frequency_hz

    def shifted(self, dphi: float) -> "ClockSpec":
        return replace(self, phase_rad=self.phase_rad + dphi)

    def complement(self) -> "ClockSpec":
        """Clock shifted by half a period (ON exactly when ``self`` is OFF for duty 0.5)."""
        return self.shifted(math.pi)

    def is_on(self, t):
        """Boolean ON state at time(s) ``t`` (seconds)."""
        frac = np.mod(np.asarray(t) * self.frequency_hz - self.phase_rad / TWO_PI, 1.0)
        return frac < self.duty


def square_wave_coefficient(clock: ClockSpec, n: int) -> complex:
    """Fourier coefficient of the 0/1 switching waveform at harmonic ``n``.

    For duty 0.5 this is 1/2 at ``n = 0``, ``-i/(n pi)`` for odd ``n`` and 0
    for even ``n != 0``, each multiplied by ``exp(-i n phi)``.
    """
    n = int(n)
    d = clock.duty
    if n == 0:
        return complex(d)
    if d == 0.5:
        base = 0j if n % 2 == 0 else -1j / (n * math.pi)
    else:
        base = (1.0 - np.exp(-1j * TWO_PI * n * d)) / (1j * TWO_PI * n)
    return complex(base * np.exp(-1j * n * clock.phase_rad))


@dataclass(frozen=True)
class HarmonicSpectrum:
    """Complex sideband amplitudes ``coeffs[n]`` at ``carrier_hz + n * mod_hz``.

    Indices absent from ``coeffs`` have exactly zero amplitude.
    """

    carrier_hz: float
    mod_hz: float
    coeffs: Mapping[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        coeffs = {int(k): complex(v) for k, v in dict(self.coeffs).items()}
        coeffs.setdefault(0, 0j)
        object.__setattr__(self, "coeffs", coeffs)

    def __getitem__(self, n: int) -> complex:
        return self.coeffs.get(int(n), 0j)

    @property
    def indices(self) -> list[int]:
        return sorted(self.coeffs)

    @property
    def n_max(self) -> int:
        return max(abs(n) for n in self.coeffs)

    def frequency(self, n: int) -> float:
        return self.carrier_hz + n * self.mod_hz

    def as_array(self, n_max: int | None = None) -> np.ndarray:
        """Dense coefficient vector for ``n = -n_max .. n_max``."""
        n_max = self.n_max if n_max is None else n_max
        return np.array([self[n] for n in range(-n_max, n_max + 1)], dtype=complex)

    def scaled(self, factor: complex) -> "HarmonicSpectrum":
        return HarmonicSpectrum(
            self.carrier_hz, self.mod_hz, {n: factor * c for n, c in self.coeffs.items()}
        )


@dataclass(frozen=True)
class PathConfig:
    """One gate -> brick-wall filter -> gate branch.

    ``clock_out`` defaults to ``clock_in`` delayed by a quarter period.  The
    closed forms assume the filter delay equals that quarter period.
    """

    carrier_hz: float
    clock_in: ClockSpec
    filter_delay_s: float
    filter_halfbw_hz: float
    filter_il_db: float = 0.0
    clock_out: ClockSpec | None = None

    def __post_init__(self):
        if self.clock_out is None:
            object.__setattr__(self, "clock_out", self.clock_in.shifted(math.pi / 2))
        if self.clock_out.frequency_hz != self.clock_in.frequency_hz:
            raise MismatchError("input and output clocks must share one modulation frequency")
        if self.filter_il_db < 0:
            raise ValueError("filter_il_db must be >= 0")

    @property
    def mod_hz(self) -> float:
        return self.clock_in.frequency_hz

    @property
    def regime_ok(self) -> bool:
        """True when the filter passes the first-order IMPs."""
        return self.filter_halfbw_hz >= self.mod_hz

    @property
    def filter_gain(self) -> float:
        return 10.0 ** (-self.filter_il_db / 20.0)

    def with_phase(self, phase_rad: float) -> "PathConfig":
        """Same branch with the input clock at ``phase_rad`` (output follows)."""
        return replace(self, clock_in=replace(self.clock_in, phase_rad=phase_rad), clock_out=None)


def _check_regime(cfg: PathConfig):
    if not cfg.regime_ok:
        raise RegimeError(
            f"filter half-bandwidth {cfg.filter_halfbw_hz:g} Hz blocks the first-order "
            f"IMPs at +/-{cfg.mod_hz:g} Hz"
        )
    if cfg.clock_in.duty != 0.5 or cfg.clock_out.duty != 0.5:
        raise RegimeError("closed-form path spectra require 50% duty clocks")
    lag = (cfg.clock_out.phase_rad - cfg.clock_in.phase_rad) % TWO_PI
    if not math.isclose(lag, math.pi / 2, abs_tol=1e-12):
        raise RegimeError("closed-form path spectra require the output clock to lag by 90 degrees")


def path_sidebands(cfg: PathConfig) -> tuple[complex, complex, complex]:
    """Amplitudes at ``f_rf + f_m``, ``f_rf`` and ``f_rf - f_m`` after the first gate and filter."""
    _check_regime(cfg)
    wtd = TWO_PI * cfg.carrier_hz * cfg.filter_delay_s
    phi = cfg.clock_in.phase_rad
    g = cfg.filter_gain
    a1 = -g * np.exp(-1j * (wtd + phi)) / math.pi
    a2 = 0.5 * g * np.exp(-1j * wtd)
    a3 = -g * np.exp(-1j * (wtd - phi)) / math.pi
    return complex(a1), complex(a2), complex(a3)


def _b_coefficient(n: int) -> float:
    # output sideband amplitude at phi = 0, without the delay factor
    if n == 0:
        return 0.25 + 2.0 / math.pi**2
    if abs(n) == 1:
        return -1.0 / math.pi
    if n % 2 == 0:
        return (-1.0) ** (n // 2) / math.pi**2 * (1.0 / (n + 1) - 1.0 / (n - 1))
    return -math.sin(n * math.pi / 2) / (2.0 * n * math.pi)


def branch_output_coeffs(cfg: PathConfig, n_max: int) -> HarmonicSpectrum:
    """Output sidebands ``b_n`` of one branch for ``|n| <= n_max`` (two-sided)."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    _check_regime(cfg)
    phi = cfg.clock_in.phase_rad
    common = cfg.filter_gain * np.exp(-1j * TWO_PI * cfg.carrier_hz * cfg.filter_delay_s)
    coeffs = {}
    for n in range(-n_max, n_max + 1):
        b = _b_coefficient(n)
        coeffs[n] = complex(common * b * np.exp(-1j * n * phi)) if b != 0 else 0j
    return HarmonicSpectrum(cfg.carrier_hz, cfg.mod_hz, coeffs)


def superpose_branches(branches: Iterable[HarmonicSpectrum], normalization: float = 1.0) -> HarmonicSpectrum:
    """Coefficient-wise sum of branch spectra, scaled by ``normalization``."""
    branches = list(branches)
    if not branches:
        raise ValueError("need at least one branch")
    ref = branches[0]
    total: dict[int, complex] = {}
    for br in branches:
        if br.carrier_hz != ref.carrier_hz or br.mod_hz != ref.mod_hz:
            raise MismatchError("branches differ in carrier or modulation frequency")
        for n, c in br.coeffs.items():
            total[n] = total.get(n, 0j) + c
    out = {}
    for n, c in total.items():
        c = normalization * c
        # symmetric cancellations leave rounding residue; store those as exact zeros
        scale = max(abs(br[n]) for br in branches)
        out[n] = 0j if abs(c) <= 1e-13 * scale else c
    return HarmonicSpectrum(ref.carrier_hz, ref.mod_hz, out)


def differential_spectrum(cfg: PathConfig, n_max: int) -> HarmonicSpectrum:
    """Two branches with input clocks at ``phi`` and ``phi + pi``."""
    phi = cfg.clock_in.phase_rad
    branches = [branch_output_coeffs(cfg.with_phase(phi + k * math.pi), n_max) for k in range(2)]
    return superpose_branches(branches, 1.0)


def quad_spectrum(cfg: PathConfig, n_max: int, board_phase_error_rad: float = 0.0) -> HarmonicSpectrum:
    """Four branches at ``phi + k pi/2``; the 90/270 degree pair carries an extra phase error."""
    phi = cfg.clock_in.phase_rad
    branches = []
    for k in range(4):
        err = board_phase_error_rad if k % 2 else 0.0
        branches.append(branch_output_coeffs(cfg.with_phase(phi + k * math.pi / 2 + err), n_max))
    return superpose_branches(branches, 0.5)


def theoretical_insertion_loss(spectrum: HarmonicSpectrum) -> float:
    """Insertion loss in dB of the fundamental, ``-20 log10 |coeff(0)|``."""
    c0 = abs(spectrum[0])
    if c0 == 0:
        raise DegenerateError("fundamental amplitude is zero")
    return -20.0 * math.log10(c0)


def imp_levels_dbc(spectrum: HarmonicSpectrum) -> dict[int, float]:
    """IMP levels relative to the fundamental; exact zeros map to ``-inf``."""
    c0 = abs(spectrum[0])
    if c0 == 0:
        raise DegenerateError("fundamental amplitude is zero")
    levels = {}
    for n in spectrum.indices:
        if n == 0:
            continue
        mag = abs(spectrum[n])
        levels[n] = -math.inf if mag == 0 else 20.0 * math.log10(mag / c0)
    return levels
