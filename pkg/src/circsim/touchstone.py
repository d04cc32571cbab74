"""Touchstone v1 two-port (.s2p) reading, writing and group delay."""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DegenerateError, ParseError, RangeError

UNITS = {"HZ": 1.0, "KHZ": 1e3, "MHZ": 1e6, "GHZ": 1e9}
FORMATS = ("RI", "MA", "DB")

# column order of a two-port data row: S11 S21 S12 S22
_ORDER = ((0, 0), (1, 0), (0, 1), (1, 1))


@dataclass(frozen=True, eq=False)
class NetworkData:
    """Two-port S-parameters on a strictly increasing frequency grid."""

    freqs_hz: np.ndarray
    smatrix: np.ndarray  # (F, 2, 2) complex
    ref_ohm: float = 50.0

    def __post_init__(self):
        f = np.asarray(self.freqs_hz, dtype=float).reshape(-1)
        s = np.asarray(self.smatrix, dtype=complex)
        if s.shape != (len(f), 2, 2):
            raise ValueError(f"smatrix must have shape ({len(f)}, 2, 2), got {s.shape}")
        if np.any(f <= 0) or np.any(np.diff(f) <= 0):
            raise ValueError("frequencies must be positive and strictly increasing")
        if not self.ref_ohm > 0:
            raise ValueError("reference impedance must be > 0")
        object.__setattr__(self, "freqs_hz", f)
        object.__setattr__(self, "smatrix", s)
        if len(f):
            smax = np.linalg.svd(s, compute_uv=False)[:, 0].max()
            if smax > 1 + 1e-6:
                warnings.warn(f"network data is not passive (max singular value {smax:.6g})",
                              stacklevel=3)

    def __len__(self):
        return len(self.freqs_hz)

    def s(self, out_port: int, in_port: int) -> np.ndarray:
        """Trace of one S-parameter using 1-based port numbers."""
        return self.smatrix[:, out_port - 1, in_port - 1]

    @property
    def is_reciprocal(self) -> bool:
        s21, s12 = self.s(2, 1), self.s(1, 2)
        scale = max(np.abs(self.smatrix).max(), 1e-300)
        return bool(np.all(np.abs(s21 - s12) <= 1e-6 * scale))


def _to_complex(fmt, x, y):
    if fmt == "RI":
        return x + 1j * y
    mag = x if fmt == "MA" else 10.0 ** (x / 20.0)
    return mag * np.exp(1j * np.deg2rad(y))


def _parse_options(tokens, lineno):
    unit, fmt, ref = "GHZ", "MA", 50.0
    i = 0
    while i < len(tokens):
        tok = tokens[i].upper()
        if tok in UNITS:
            unit = tok
        elif tok in FORMATS:
            fmt = tok
        elif tok == "S":
            pass
        elif tok in ("Y", "Z", "H", "G"):
            raise ParseError(f"only S-parameters are supported, got {tokens[i]!r}", lineno)
        elif tok == "R":
            if i + 1 >= len(tokens):
                raise ParseError("option 'R' needs a reference impedance", lineno)
            try:
                ref = float(tokens[i + 1])
            except ValueError:
                raise ParseError(f"bad reference impedance {tokens[i + 1]!r}", lineno) from None
            if not ref > 0:
                raise ParseError("reference impedance must be > 0", lineno)
            i += 1
        else:
            raise ParseError(f"unrecognized option {tokens[i]!r}", lineno)
        i += 1
    return unit, fmt, ref


def parse(text: str) -> NetworkData:
    """Parse Touchstone v1 two-port text into :class:`NetworkData`."""
    options = None
    freqs, rows = [], []
    first_content = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("!", 1)[0].strip()
        if not line:
            continue
        if first_content is None:
            first_content = lineno
        if line.startswith("["):
            raise ParseError("Touchstone v2 keywords are not supported", lineno)
        if line.startswith("#"):
            if options is not None:
                raise ParseError("duplicate option line", lineno)
            options = _parse_options(line[1:].split(), lineno)
            continue
        if options is None:
            raise ParseError("missing option line before data", first_content)
        fields = line.split()
        if len(fields) != 9:
            if len(fields) == 3:
                raise ParseError("one-port data is not supported (two-port only)", lineno)
            raise ParseError(f"expected 9 columns, got {len(fields)}", lineno)
        try:
            vals = [float(v) for v in fields]
        except ValueError as exc:
            raise ParseError(f"non-numeric field: {exc}", lineno) from None
        f = vals[0] * UNITS[options[0]]
        if f <= 0:
            raise ParseError("frequency must be > 0", lineno)
        if freqs and f <= freqs[-1]:
            raise ParseError("frequencies must be strictly increasing", lineno)
        freqs.append(f)
        rows.append(vals[1:])
    if options is None:
        raise ParseError("missing option line", first_content or 1)
    unit, fmt, ref = options
    data = np.array(rows, dtype=float).reshape(-1, 8)
    s = np.empty((len(freqs), 2, 2), dtype=complex)
    for k, (i, j) in enumerate(_ORDER):
        s[:, i, j] = _to_complex(fmt, data[:, 2 * k], data[:, 2 * k + 1])
    return NetworkData(np.array(freqs), s, ref)


def read(path) -> NetworkData:
    path = Path(path)
    m = re.search(r"\.s(\d+)p$", path.name, re.IGNORECASE)
    if m and m.group(1) != "2":
        raise ParseError(f"{path.name}: only two-port files are supported", 1)
    return parse(path.read_text())


def _fmt(x: float) -> str:
    # repr gives the shortest string that round-trips exactly
    return repr(float(x))


def write(net: NetworkData, format: str = "RI", unit: str = "GHZ") -> str:
    """Serialize ``net`` as Touchstone v1 text that parses back exactly."""
    fmt, unit = format.upper(), unit.upper()
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    if unit not in UNITS:
        raise ValueError(f"unit must be one of {tuple(UNITS)}")
    lines = ["! written by circsim", f"# {unit} S {fmt} R {_fmt(net.ref_ohm)}"]
    scale = UNITS[unit]
    for f, s in zip(net.freqs_hz, net.smatrix):
        cols = [_fmt(f / scale)]
        for i, j in _ORDER:
            z = s[i, j]
            if fmt == "RI":
                x, y = z.real, z.imag
            else:
                mag = abs(z)
                x = mag if fmt == "MA" else (20.0 * math.log10(mag) if mag > 0 else -math.inf)
                y = math.degrees(math.atan2(z.imag, z.real))
            cols += [_fmt(x), _fmt(y)]
        lines.append(" ".join(cols))
    return "\n".join(lines) + "\n"


def save(net: NetworkData, path, format: str = "RI", unit: str = "GHZ"):
    Path(path).write_text(write(net, format, unit))


def unwrap_phase(z: np.ndarray) -> np.ndarray:
    """Continuous phase of ``z`` (radians), removing jumps larger than pi."""
    return np.unwrap(np.angle(z), discont=math.pi)


def group_delay_curve(freqs_hz, s) -> np.ndarray:
    """Group delay ``-d(phase)/d(omega)`` at every grid point."""
    phase = unwrap_phase(np.asarray(s))
    return -np.gradient(phase, 2.0 * math.pi * np.asarray(freqs_hz, dtype=float))


def group_delay(net: NetworkData, path=(2, 1), f_hz: float | None = None):
    """Group delay in seconds of S[out, in] at ``f_hz`` (central differences).

    With ``f_hz=None`` the whole per-point delay curve is returned.
    """
    if len(net) < 3:
        raise RangeError("group delay needs at least 3 frequency points")
    s = net.s(*path)
    f = net.freqs_hz
    if f_hz is None:
        if np.any(np.abs(s) < 1e-12):
            raise DegenerateError("|S| vanishes on the grid; phase undefined")
        return group_delay_curve(f, s)
    if not f[0] < f_hz < f[-1]:
        raise RangeError(f"{f_hz:g} Hz outside the open grid interval ({f[0]:g}, {f[-1]:g})")
    k = int(np.searchsorted(f, f_hz))
    lo, hi = max(k - 2, 0), min(k + 2, len(f))
    if np.any(np.abs(s[lo:hi]) < 1e-12):
        raise DegenerateError(f"|S| vanishes near {f_hz:g} Hz; phase undefined")
    tau = group_delay_curve(f, s)
    return float(np.interp(f_hz, f, tau))
