"""Figures of merit reduced from sweep results.

Sweep-based functions accept a list of :class:`~circsim.network.HarmonicSMatrix`,
a :class:`~circsim.touchstone.NetworkData`, or a ``(freqs_hz, S)`` pair with
``S`` shaped ``(F, P, P)``.  Port numbers are 1-based.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from .errors import DegenerateError, NotFoundError, RangeError
from .spectra import HarmonicSpectrum
from .touchstone import NetworkData, group_delay_curve


def _as_arrays(results) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(results, NetworkData):
        return results.freqs_hz, results.smatrix
    if isinstance(results, tuple) and len(results) == 2:
        f, s = results
        return np.asarray(f, dtype=float), np.asarray(s, dtype=complex)
    results = list(results)
    if not results:
        raise ValueError("no sweep results")
    return (np.array([r.f_rf_hz for r in results]),
            np.stack([r.fundamental for r in results]))


def _trace(results, out_port, in_port):
    f, s = _as_arrays(results)
    return f, s[:, out_port - 1, in_port - 1]


def _db(mag):
    mag = np.asarray(mag, dtype=float)
    with np.errstate(divide="ignore"):
        return 20.0 * np.log10(mag)


def isolation_bandwidth(results, threshold_db: float = 20.0, out_port: int = 3,
                        in_port: int = 1, center_hz: float | None = None) -> tuple[float, float]:
    """Width of the contiguous interval around ``center_hz`` where ``|S| <= -threshold_db``.

    Edges are placed where the dB curve, interpolated linearly between grid
    points, crosses the threshold.  ``center_hz`` defaults to the middle of
    the sweep.  Returns ``(bw_hz, bw_hz / interval_midpoint)``.
    """
    f, s = _trace(results, out_port, in_port)
    level = _db(np.abs(s))
    limit = -threshold_db
    ok = level <= limit
    if not ok.any():
        raise NotFoundError(f"|S{out_port}{in_port}| never reaches {limit:g} dB on the sweep")
    center = 0.5 * (f[0] + f[-1]) if center_hz is None else center_hz
    k = int(np.argmin(np.abs(f - center)))
    if not ok[k]:
        raise NotFoundError(
            f"|S{out_port}{in_port}| is above {limit:g} dB at {f[k]:g} Hz, the grid point "
            "nearest the center")
    lo = k
    while lo > 0 and ok[lo - 1]:
        lo -= 1
    hi = k
    while hi < len(f) - 1 and ok[hi + 1]:
        hi += 1

    def crossing(i, j):
        # i inside, j outside; -inf levels sit at the inside point
        if not np.isfinite(level[j]):
            return f[i]
        if not np.isfinite(level[i]):
            return f[i]
        t = (limit - level[i]) / (level[j] - level[i])
        return f[i] + t * (f[j] - f[i])

    f_lo = crossing(lo, lo - 1) if lo > 0 else f[0]
    f_hi = crossing(hi, hi + 1) if hi < len(f) - 1 else f[-1]
    bw = float(f_hi - f_lo)
    mid = 0.5 * (f_lo + f_hi)
    return bw, bw / mid


def insertion_loss_at(results, f_hz: float, out_port: int = 2, in_port: int = 1) -> float:
    """``-20 log10 |S(out, in)|`` at ``f_hz``, interpolated linearly in dB."""
    f, s = _trace(results, out_port, in_port)
    if not f[0] <= f_hz <= f[-1]:
        raise RangeError(f"{f_hz:g} Hz outside the sweep [{f[0]:g}, {f[-1]:g}] Hz")
    loss = -_db(np.abs(s))
    if len(f) == 1:
        return float(loss[0])
    return float(np.interp(f_hz, f, loss))


def worst_imp_dbc(spectrum: HarmonicSpectrum, n_range=None) -> tuple[int, float]:
    """Least-suppressed sideband in ``n_range`` (default all ``n != 0``) and its dBc level.

    Ties go to the negative index.  Fully cancelled ranges give ``-inf``.
    """
    c0 = abs(spectrum[0])
    if c0 == 0:
        raise DegenerateError("fundamental amplitude is zero")
    if n_range is None:
        n_range = spectrum.indices
    elif isinstance(n_range, int):
        n_range = range(-n_range, n_range + 1)
    candidates = sorted(n for n in n_range if n != 0)
    if not candidates:
        raise ValueError("n_range holds no sideband other than the fundamental")
    best_n, best = candidates[0], -math.inf
    for n in candidates:
        mag = abs(spectrum[n])
        level = -math.inf if mag == 0 else 20.0 * math.log10(mag / c0)
        if level > best:
            best_n, best = n, level
    return best_n, best


def delay_dispersion(results, band: tuple[float, float], out_port: int = 2,
                     in_port: int = 1) -> float:
    """Spread (max - min) of the group delay over grid points inside ``band``."""
    f, s = _trace(results, out_port, in_port)
    inside = (f >= band[0]) & (f <= band[1])
    if inside.sum() < 3:
        raise RangeError(f"need >= 3 sweep points in [{band[0]:g}, {band[1]:g}] Hz")
    fi, si = f[inside], s[inside]
    if np.any(np.abs(si) < 1e-12):
        raise DegenerateError("|S| vanishes inside the band; phase undefined")
    tau = group_delay_curve(fi, si)
    return float(tau.max() - tau.min())


def return_loss_min(results, band: tuple[float, float] | None = None) -> float:
    """Worst (smallest) return loss over all ports and the in-band grid points."""
    f, s = _as_arrays(results)
    sel = np.ones(len(f), bool) if band is None else (f >= band[0]) & (f <= band[1])
    if not sel.any():
        raise RangeError("no sweep points inside the band")
    diag = np.abs(np.diagonal(s[sel], axis1=1, axis2=2))
    return float(-_db(diag.max()))


@dataclass(frozen=True)
class MetricsReport:
    il_db: float
    ix_db: float
    rl_db_min: float
    ix_bw_hz: float
    ix_bw_frac: float
    center_hz: float
    imp_worst_dbc: float
    delay_dispersion_s: float

    @classmethod
    def header(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def row(self) -> list[float]:
        return [getattr(self, name) for name in self.header()]

    def table(self) -> str:
        units = {"il_db": "dB", "ix_db": "dB", "rl_db_min": "dB", "ix_bw_hz": "Hz",
                 "ix_bw_frac": "", "center_hz": "Hz", "imp_worst_dbc": "dBc",
                 "delay_dispersion_s": "s"}
        width = max(len(n) for n in units)
        lines = []
        for name, value in asdict(self).items():
            lines.append(f"{name:<{width}}  {value:.6g} {units[name]}".rstrip())
        return "\n".join(lines)


def build_report(results, center_hz: float, band: tuple[float, float],
                 spectrum: HarmonicSpectrum | None = None, imp_range=None,
                 threshold_db: float = 20.0) -> MetricsReport:
    """Collect every figure of merit; missing quantities are reported as NaN."""
    il = insertion_loss_at(results, center_hz, 2, 1)
    ix = insertion_loss_at(results, center_hz, 3, 1)
    rl = return_loss_min(results, band)
    try:
        bw, frac = isolation_bandwidth(results, threshold_db, 3, 1, center_hz)
    except NotFoundError:
        bw, frac = math.nan, math.nan
    imp = math.nan
    if spectrum is not None:
        imp = worst_imp_dbc(spectrum, imp_range)[1]
    try:
        disp = delay_dispersion(results, band)
    except (RangeError, DegenerateError):
        disp = math.nan
    return MetricsReport(il, ix, rl, bw, frac, center_hz, imp, disp)
