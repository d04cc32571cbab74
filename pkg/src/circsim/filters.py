"""Two-port bandpass filter models and S/Y conversions.

Three variants are provided, all reciprocal and symmetric:

* :class:`BrickWall` - flat passband with constant group delay, total
  reflection outside the band.
* :class:`Parametric` - raised-cosine skirts and a group delay that varies
  linearly across the passband, a stand-in for a measured SAW filter.
* :class:`Tabulated` - measured data from a Touchstone file, linearly
  interpolated in real/imaginary coordinates.

``evaluate`` accepts scalar or array frequencies and returns S-matrices with
shape ``f.shape + (2, 2)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import RangeError, SingularError
from .touchstone import NetworkData

EXTRAPOLATION_POLICIES = ("strict", "reflective")


def _db_to_lin(db):
    return 10.0 ** (-db / 20.0)


def _assemble(s11, s21):
    s = np.empty(np.shape(s11) + (2, 2), dtype=complex)
    s[..., 0, 0] = s11
    s[..., 1, 1] = s11
    s[..., 1, 0] = s21
    s[..., 0, 1] = s21
    return s


@dataclass(frozen=True)
class BrickWall:
    center_hz: float
    bw_hz: float
    delay_s: float
    il_db: float = 0.0
    reflection_phase_rad: float = 0.0

    def __post_init__(self):
        if not (self.center_hz > 0 and self.bw_hz > 0):
            raise ValueError("center_hz and bw_hz must be > 0")
        if self.il_db < 0 or self.delay_s < 0:
            raise ValueError("il_db and delay_s must be >= 0")

    @property
    def band(self) -> tuple[float, float]:
        return self.center_hz - self.bw_hz / 2, self.center_hz + self.bw_hz / 2

    @property
    def ref_ohm(self) -> float:
        return 50.0

    def in_band(self, f):
        lo, hi = self.band
        f = np.asarray(f, dtype=float)
        return (f >= lo) & (f <= hi)

    def transmission(self, f):
        f = np.asarray(f, dtype=float)
        h = _db_to_lin(self.il_db) * np.exp(-2j * math.pi * f * self.delay_s)
        return np.where(self.in_band(f), h, 0.0)

    def group_delay(self, f):
        return np.where(self.in_band(f), self.delay_s, np.nan)

    def sparams(self, f):
        inside = self.in_band(f)
        s11 = np.where(inside, 0.0, np.exp(1j * self.reflection_phase_rad))
        return _assemble(s11, self.transmission(f))


@dataclass(frozen=True)
class Parametric:
    """Linear-phase-dispersion bandpass surrogate.

    The group delay runs linearly from ``delay_s - D`` to ``delay_s + D``
    across the passband (``D = delay_slope_s_per_hz * bw_hz / 2``) and is held
    at the edge values outside.  ``|S21|`` falls to zero over a raised-cosine
    skirt of width ``edge_hz`` beyond each band edge while ``S11`` (real)
    rises from the in-band return loss to total reflection.
    """

    center_hz: float
    bw_hz: float
    edge_hz: float = 0.0
    delay_s: float = 0.0
    delay_slope_s_per_hz: float = 0.0
    il_db: float = 0.0
    rl_db: float = math.inf

    def __post_init__(self):
        if not (self.center_hz > 0 and self.bw_hz > 0):
            raise ValueError("center_hz and bw_hz must be > 0")
        if self.edge_hz < 0 or self.il_db < 0 or self.rl_db < 0:
            raise ValueError("edge_hz, il_db and rl_db must be >= 0")
        if _db_to_lin(self.il_db) + _db_to_lin(self.rl_db) > 1 + 1e-12:
            raise ValueError(
                f"il_db={self.il_db} with rl_db={self.rl_db} is not passive; "
                "need 10^(-il/20) + 10^(-rl/20) <= 1"
            )

    @classmethod
    def from_delay_span(cls, center_hz, bw_hz, delay_min_s, delay_max_s, **kw):
        """Build a model whose in-band group delay spans ``[delay_min_s, delay_max_s]``."""
        mid = 0.5 * (delay_min_s + delay_max_s)
        slope = (delay_max_s - delay_min_s) / bw_hz
        return cls(center_hz, bw_hz, delay_s=mid, delay_slope_s_per_hz=slope, **kw)

    @property
    def ref_ohm(self) -> float:
        return 50.0

    @property
    def band(self) -> tuple[float, float]:
        return self.center_hz - self.bw_hz / 2, self.center_hz + self.bw_hz / 2

    def _window(self, f):
        half = self.bw_hz / 2
        dx = np.abs(np.asarray(f, dtype=float) - self.center_hz) - half
        if self.edge_hz == 0:
            return np.where(dx <= 0, 1.0, 0.0)
        w = 0.5 * (1.0 + np.cos(math.pi * np.clip(dx, 0.0, self.edge_hz) / self.edge_hz))
        return np.where(dx <= 0, 1.0, w)

    def group_delay(self, f):
        """Closed-form group delay in seconds."""
        half = self.bw_hz / 2
        x = np.clip(np.asarray(f, dtype=float) - self.center_hz, -half, half)
        return self.delay_s + self.delay_slope_s_per_hz * x

    def _phase(self, f):
        half = self.bw_hz / 2
        x = np.asarray(f, dtype=float) - self.center_hz
        ax = np.abs(x)
        # integral of the clipped linear delay term
        integral = np.where(ax <= half, 0.5 * x * x, half * ax - 0.5 * half * half)
        return -2.0 * math.pi * (self.delay_s * np.asarray(f, dtype=float)
                                 + self.delay_slope_s_per_hz * integral)

    def transmission(self, f):
        return _db_to_lin(self.il_db) * self._window(f) * np.exp(1j * self._phase(f))

    def sparams(self, f):
        w = self._window(f)
        r = _db_to_lin(self.rl_db)
        s11 = 1.0 - (1.0 - r) * w
        return _assemble(s11, self.transmission(f))


@dataclass(frozen=True, eq=False)
class Tabulated:
    net: NetworkData
    extrapolation: str = "reflective"

    def __post_init__(self):
        if self.extrapolation not in EXTRAPOLATION_POLICIES:
            raise ValueError(f"extrapolation must be one of {EXTRAPOLATION_POLICIES}")
        if len(self.net) < 2:
            raise ValueError("tabulated filter needs at least 2 frequency points")
        if not self.net.is_reciprocal:
            warnings.warn("tabulated filter data is not reciprocal", stacklevel=3)

    @property
    def ref_ohm(self) -> float:
        return self.net.ref_ohm

    @property
    def band(self) -> tuple[float, float]:
        return float(self.net.freqs_hz[0]), float(self.net.freqs_hz[-1])

    def sparams(self, f):
        return interpolate(self.net, f, self.extrapolation)

    def transmission(self, f):
        return self.sparams(f)[..., 1, 0]


FilterModel = BrickWall | Parametric | Tabulated


def evaluate(model: FilterModel, f_hz):
    """S-matrix of ``model`` at ``f_hz`` (scalar or array, all > 0)."""
    f = np.asarray(f_hz, dtype=float)
    if np.any(f <= 0):
        raise ValueError("filter frequencies must be > 0")
    return model.sparams(f)


def far_sparams(model: FilterModel) -> np.ndarray:
    """Constant S-matrix the model settles to far outside its band (total reflection)."""
    phase = getattr(model, "reflection_phase_rad", 0.0)
    return np.exp(1j * phase) * np.eye(2, dtype=complex)


def interpolate(net: NetworkData, f_hz, policy: str = "strict"):
    """Linear interpolation of the S-matrix in rectangular coordinates.

    ``policy="reflective"`` returns total reflection (``S11 = S22 = 1``,
    ``S21 = S12 = 0``) outside the grid; ``"strict"`` raises ``RangeError``.
    """
    f = np.asarray(f_hz, dtype=float)
    grid = net.freqs_hz
    outside = (f < grid[0]) | (f > grid[-1])
    if np.any(outside) and policy == "strict":
        bad = f[outside].flat[0]
        raise RangeError(f"{bad:g} Hz outside data range [{grid[0]:g}, {grid[-1]:g}] Hz")
    flat = f.reshape(-1)
    out = np.empty((flat.size, 2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            col = net.smatrix[:, i, j]
            out[:, i, j] = np.interp(flat, grid, col.real) + 1j * np.interp(flat, grid, col.imag)
    out = out.reshape(f.shape + (2, 2))
    if np.any(outside):
        out[outside] = np.eye(2)
    return out


def s_to_y(smatrix, ref_ohm: float = 50.0, tol: float = 1e-12):
    """Admittance matrix ``Y = (I - S)(I + S)^-1 / Z0`` of a 2-port."""
    s = np.asarray(smatrix, dtype=complex)
    eye = np.eye(s.shape[-1])
    a = eye + s
    if np.any(1.0 / np.linalg.cond(a) < tol):
        raise SingularError("I + S is singular; the admittance matrix does not exist",
                            condition=float(np.max(np.linalg.cond(a))))
    return (eye - s) @ np.linalg.inv(a) / ref_ohm


def y_to_s(ymatrix, ref_ohm: float = 50.0):
    """Inverse of :func:`s_to_y`: ``S = (I - Z0 Y)(I + Z0 Y)^-1``."""
    zy = ref_ohm * np.asarray(ymatrix, dtype=complex)
    eye = np.eye(zy.shape[-1])
    return (eye - zy) @ np.linalg.inv(eye + zy)
