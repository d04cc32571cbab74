"""Circulator topologies and linear periodically time-varying solvers.

Everything is expressed on the sideband set ``f_rf + n f_m``.  Ports are
Norton sources ``2 a / sqrt(Z0)`` in parallel with ``1 / Z0`` and the
outgoing power wave is ``b = V / sqrt(Z0) - a``.  Filters always enter
through their scattering relation ``(I - S) V - Z0 (I + S) I = 0``, which stays
well posed where the admittance matrix does not exist (a lossless thru whose
phase is a multiple of pi, an open out-of-band port).

Two solvers share the topology:

``method="switched"`` (default)
    Switches and terminations are memoryless, so between clock edges the
    resistive network is fixed and its wave response can be solved exactly.
    Each filter is split into its constant far-out-of-band reflection, which
    is folded into those memoryless states, and a remainder that is nonzero
    only over a finite band.  The piecewise-constant state responses have
    closed-form Fourier coefficients, and only the in-band sidebands of the
    remainder are unknowns.  Ideal (zero transition time) switching is
    therefore represented without Gibbs truncation error.

``method="nodal"``
    Classic conversion-matrix nodal analysis: node voltages and filter
    currents at every ``|n| <= n_max``, with each switch stamped as the
    Toeplitz block ``G[n - m]`` of its conductance harmonics.  The error
    decays only algebraically in ``n_max`` for hard switching; it is kept as
    an independent cross-check.

Port numbering in the public API is 1-based.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.linalg import lapack

from .errors import ConvergenceError, SingularError
from .filters import BrickWall, FilterModel, Parametric, evaluate, far_sparams
from .spectra import ClockSpec, HarmonicSpectrum, square_wave_coefficient
from .touchstone import group_delay_curve

DEFAULT_N_MAX = 16
RCOND_LIMIT = 1e-15

SINGLE, DIFFERENTIAL, QUAD = "single", "differential", "quad"

# (port index, filter side, phase in quarter periods) for the upper and lower
# filter of one differential board; side 0 = left, 1 = right
_BOARD_WIRING = {
    "upper": ((0, 0, 0), (1, 1, 1), (2, 0, 2), (3, 1, 3)),
    "lower": ((0, 0, 2), (1, 1, 3), (2, 0, 0), (3, 1, 1)),
}


@dataclass(frozen=True)
class SwitchModel:
    """Resistive switch, ``ron_ohm`` when its clock is ON and ``roff_ohm`` otherwise."""

    ron_ohm: float
    roff_ohm: float
    clock: ClockSpec

    def __post_init__(self):
        if not self.ron_ohm > 0:
            raise ValueError("ron_ohm must be > 0")
        if not self.roff_ohm >= self.ron_ohm:
            raise ValueError("roff_ohm must be >= ron_ohm")


@dataclass(frozen=True)
class SwitchBranch:
    node_a: int
    node_b: int
    switch: SwitchModel
    label: str = ""


@dataclass(frozen=True, eq=False)
class FilterBranch:
    node_left: int
    node_right: int
    model: FilterModel
    label: str = ""


@dataclass(frozen=True, eq=False)
class Junction:
    """Memoryless N-port with a constant S-matrix, one reference impedance per port."""

    nodes: tuple[int, ...]
    ref_ohm: tuple[float, ...]
    smatrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        s = np.asarray(self.smatrix, dtype=complex)
        n = len(self.nodes)
        if s.shape != (n, n) or len(self.ref_ohm) != n:
            raise ValueError("junction S-matrix and impedances must match its node count")
        object.__setattr__(self, "smatrix", s)


def ideal_combiner(common: int, branches: tuple[int, int], common_ohm: float,
                   branch_ohm: float = 50.0, label: str = "") -> Junction:
    """Matched in-phase power combiner; the odd mode of the branches is absorbed."""
    h = 1.0 / math.sqrt(2.0)
    s = np.array([[0, h, h], [h, 0, 0], [h, 0, 0]], dtype=complex)
    return Junction((common,) + tuple(branches), (common_ohm, branch_ohm, branch_ohm), s, label)


@dataclass(frozen=True, eq=False)
class Topology:
    """Wired circuit: ports, internal loads, switches and filters.

    ``port_nodes[k]`` is the node of external port ``k + 1`` and ``z0_ohm[k]``
    its reference impedance.  ``loads`` holds matched internal terminations
    as ``(node, ohm)`` pairs.
    """

    kind: str
    n_nodes: int
    port_nodes: tuple[int, ...]
    z0_ohm: tuple[float, ...]
    filters: tuple[FilterBranch, ...]
    switches: tuple[SwitchBranch, ...]
    mod_hz: float
    loads: tuple[tuple[int, float], ...] = ()
    junctions: tuple[Junction, ...] = ()

    @property
    def n_ports(self) -> int:
        return len(self.port_nodes)

    @property
    def junction_offset(self) -> int:
        """Index of the first junction current unknown."""
        return self.n_nodes + 2 * len(self.filters)

    @property
    def unknowns_per_harmonic(self) -> int:
        return self.junction_offset + sum(len(j.nodes) for j in self.junctions)

    def with_clocks(self, fn) -> "Topology":
        """Copy with every switch clock replaced by ``fn(branch)``."""
        switches = tuple(
            SwitchBranch(b.node_a, b.node_b,
                         SwitchModel(b.switch.ron_ohm, b.switch.roff_ohm, fn(b)), b.label)
            for b in self.switches
        )
        return _replace(self, switches=switches)

    def shifted(self, dphi: float) -> "Topology":
        """Copy with all clock phases advanced by ``dphi`` radians."""
        return self.with_clocks(lambda b: b.switch.clock.shifted(dphi))

    def with_switch_values(self, ron_ohm=None, roff_ohm=None) -> "Topology":
        switches = tuple(
            SwitchBranch(b.node_a, b.node_b,
                         SwitchModel(ron_ohm if ron_ohm is not None else b.switch.ron_ohm,
                                     roff_ohm if roff_ohm is not None else b.switch.roff_ohm,
                                     b.switch.clock), b.label)
            for b in self.switches
        )
        return _replace(self, switches=switches)


def _replace(top: Topology, **changes) -> Topology:
    kw = {k: getattr(top, k) for k in top.__dataclass_fields__}
    kw.update(changes)
    return Topology(**kw)


def filter_group_delay(model: FilterModel, f_hz: float) -> float:
    if isinstance(model, BrickWall):
        return model.delay_s
    if isinstance(model, Parametric):
        return float(model.group_delay(f_hz))
    net = model.net
    return float(np.interp(f_hz, net.freqs_hz, group_delay_curve(net.freqs_hz, net.s(2, 1))))


def check_timing(top: Topology, tolerance: float = 0.2) -> bool:
    """Warn unless the modulation period is four filter group delays (within ``tolerance``)."""
    target = 1.0 / (4.0 * top.mod_hz)
    ok = True
    for fb in top.filters:
        lo, hi = fb.model.band
        tg = filter_group_delay(fb.model, 0.5 * (lo + hi))
        if abs(target - tg) > tolerance * target:
            warnings.warn(
                f"filter {fb.label or '?'}: T_m/4 = {target * 1e9:.3g} ns but group delay "
                f"is {tg * 1e9:.3g} ns", stacklevel=2)
            ok = False
    return ok


def _board(filt_upper, filt_lower, first_node, ron, roff, clock, phase_error, lower_error, tag,
           ports=(0, 1, 2, 3)):
    """Filters and switches of one differential board attached to the nodes ``ports``."""
    filters, switches = [], []
    for k, (name, model) in enumerate((("upper", filt_upper), ("lower", filt_lower))):
        if model is None:
            continue
        left, right = first_node + 2 * k, first_node + 2 * k + 1
        filters.append(FilterBranch(left, right, model, f"{tag}{name}"))
        err = phase_error + (lower_error if name == "lower" else 0.0)
        for port, side, quarter in _BOARD_WIRING[name]:
            ck = clock.shifted(quarter * math.pi / 2 + err)
            node = right if side else left
            sw = SwitchModel(ron, roff, ck)
            switches.append(SwitchBranch(ports[port], node, sw, f"{tag}SW{port + 1}{k + 1}"))
    return filters, switches


def differential(filt: FilterModel, *, ron_ohm=5.0, roff_ohm=1e6, mod_hz=12.5e6, duty=0.5,
                 z0_ohm=50.0, phase_rad=0.0, lower_phase_error_rad=0.0,
                 lower_filter: FilterModel | None = None, check=True) -> Topology:
    """Four-port circulator of two filters and eight switches (1 -> 2 -> 3 -> 4 -> 1)."""
    clock = ClockSpec(mod_hz, duty, phase_rad)
    filters, switches = _board(filt, lower_filter or filt, 4, ron_ohm, roff_ohm, clock,
                               0.0, lower_phase_error_rad, "")
    top = Topology(DIFFERENTIAL, 8, (0, 1, 2, 3), _z0_tuple(z0_ohm, 4), tuple(filters),
                   tuple(switches), mod_hz)
    if check:
        check_timing(top)
    return top


COMBINERS = ("ideal", "tee")


def quad(filt: FilterModel, *, ron_ohm=5.0, roff_ohm=1e6, mod_hz=12.5e6, duty=0.5,
         z0_ohm=25.0, phase_rad=0.0, board_phase_error_rad=0.0, combiner="ideal",
         check=True) -> Topology:
    """Two differential boards sharing the four ports, the second clocked 90 degrees later.

    ``combiner="ideal"`` joins the boards at each port through a matched
    in-phase combiner (50 ohm board side), so each board sees the same
    terminations as on its own.  ``"tee"`` wires both boards straight to the
    port node; the odd-mode products of the two boards are then reflected
    back into the filters instead of being absorbed.
    """
    if combiner not in COMBINERS:
        raise ValueError(f"combiner must be one of {COMBINERS}")
    clock = ClockSpec(mod_hz, duty, phase_rad)
    z0 = _z0_tuple(z0_ohm, 4)
    if combiner == "tee":
        ports_a = ports_b = (0, 1, 2, 3)
        first, n_nodes, junctions = 4, 12, ()
    else:
        ports_a, ports_b = (4, 5, 6, 7), (8, 9, 10, 11)
        first, n_nodes = 12, 20
        junctions = tuple(ideal_combiner(k, (ports_a[k], ports_b[k]), z0[k], label=f"C{k + 1}")
                          for k in range(4))
    fa, sa = _board(filt, filt, first, ron_ohm, roff_ohm, clock, 0.0, 0.0, "A.", ports_a)
    fb, sb = _board(filt, filt, first + 4, ron_ohm, roff_ohm, clock,
                    math.pi / 2 + board_phase_error_rad, 0.0, "B.", ports_b)
    top = Topology(QUAD, n_nodes, (0, 1, 2, 3), z0, tuple(fa + fb), tuple(sa + sb), mod_hz,
                   junctions=junctions)
    if check:
        check_timing(top)
    return top


def single_path(filt: FilterModel, *, ron_ohm=5.0, roff_ohm=1e6, mod_hz=12.5e6, duty=0.5,
                z0_ohm=50.0, phase_rad=0.0, check=True) -> Topology:
    """One filter branch between port 1 and port 2.

    The complementary switches at each filter side go to matched internal
    loads, so both filter ports always see ``z0_ohm`` as in the full circulator.
    """
    clock = ClockSpec(mod_hz, duty, phase_rad)
    filters, switches = _board(filt, None, 4, ron_ohm, roff_ohm, clock, 0.0, 0.0, "")
    z0 = float(z0_ohm)
    top = Topology(SINGLE, 6, (0, 1), (z0, z0), tuple(filters), tuple(switches), mod_hz,
                   loads=((2, z0), (3, z0)))
    if check:
        check_timing(top)
    return top


def _z0_tuple(z0, n):
    if np.ndim(z0) == 0:
        return (float(z0),) * n
    z0 = tuple(float(z) for z in z0)
    if len(z0) != n:
        raise ValueError(f"need {n} port impedances, got {len(z0)}")
    return z0


def switch_conductance_harmonics(sw: SwitchModel, n_max: int) -> dict[int, complex]:
    """Fourier coefficients (siemens) of the switch conductance for ``|n| <= n_max``."""
    g_on, g_off = 1.0 / sw.ron_ohm, 1.0 / sw.roff_ohm
    out = {}
    for n in range(-n_max, n_max + 1):
        c = (g_on - g_off) * square_wave_coefficient(sw.clock, n)
        out[n] = c + (g_off if n == 0 else 0.0)
    return out


def conversion_matrix(sw: SwitchModel, n_max: int) -> np.ndarray:
    """Toeplitz block with entry ``(n, m) = G[n - m]``, rows/cols ordered ``-n_max..n_max``."""
    g = switch_conductance_harmonics(sw, 2 * n_max)
    col = np.array([g[k] for k in range(0, 2 * n_max + 1)])
    row = np.array([g[-k] for k in range(0, 2 * n_max + 1)])
    return scipy.linalg.toeplitz(col, row)


def _junction_stamp(top: Topology):
    """Yield ``(row, col, value)`` entries of all junction constraints for one harmonic."""
    base = top.junction_offset
    for jn in top.junctions:
        n = len(jn.nodes)
        root = np.sqrt(np.asarray(jn.ref_ohm, dtype=float))
        for q in range(n):
            row = base + q
            yield jn.nodes[q], row, 1.0
            # (V_q - z_q I_q)/sqrt(z_q) = sum_r S_qr (V_r + z_r I_r)/sqrt(z_r), scaled by 1/sqrt(z_q)
            for r in range(n):
                d = 1.0 if q == r else 0.0
                yield row, jn.nodes[r], (d - jn.smatrix[q, r]) / (root[r] * root[q])
                yield row, base + r, -(d + jn.smatrix[q, r]) * root[r] / root[q]
        base += n


def sideband_frequencies(f_rf: float, mod_hz: float, n_max: int) -> np.ndarray:
    f = f_rf + mod_hz * np.arange(-n_max, n_max + 1)
    if f[0] <= 0:
        raise ValueError(
            f"lowest sideband {f[0]:g} Hz is not positive; reduce n_max or raise f_rf")
    return f


@dataclass
class LinearSystem:
    """Block conversion-matrix system ``matrix @ x = rhs[:, k]`` for excitation at port ``k + 1``."""

    topology: Topology
    f_rf_hz: float
    n_max: int
    matrix: np.ndarray
    rhs: np.ndarray

    @property
    def n_harmonics(self) -> int:
        return 2 * self.n_max + 1

    @property
    def unknowns_per_harmonic(self) -> int:
        return self.topology.unknowns_per_harmonic

    def index(self, unknown: int, n: int) -> int:
        return (n + self.n_max) * self.unknowns_per_harmonic + unknown

    def indices(self, unknown: int) -> np.ndarray:
        return np.arange(self.n_harmonics) * self.unknowns_per_harmonic + unknown


def assemble_system(top: Topology, f_rf: float, n_max: int = DEFAULT_N_MAX) -> LinearSystem:
    """Build the nodal conversion-matrix system at input frequency ``f_rf``."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    freqs = sideband_frequencies(f_rf, top.mod_hz, n_max)
    nh = len(freqs)
    nu = top.unknowns_per_harmonic
    a = np.zeros((nh * nu, nh * nu), dtype=complex)
    rhs = np.zeros((nh * nu, top.n_ports), dtype=complex)
    sys = LinearSystem(top, f_rf, n_max, a, rhs)

    terms = [(node, z) for node, z in zip(top.port_nodes, top.z0_ohm)] + list(top.loads)
    for node, z in terms:
        idx = sys.indices(node)
        a[idx, idx] += 1.0 / z

    for br in top.switches:
        t = conversion_matrix(br.switch, n_max)
        ia, ib = sys.indices(br.node_a), sys.indices(br.node_b)
        a[np.ix_(ia, ia)] += t
        a[np.ix_(ib, ib)] += t
        a[np.ix_(ia, ib)] -= t
        a[np.ix_(ib, ia)] -= t

    eye = np.eye(2)
    for k, fb in enumerate(top.filters):
        s = evaluate(fb.model, freqs)  # (nh, 2, 2)
        z = fb.model.ref_ohm
        nodes = (fb.node_left, fb.node_right)
        currents = (top.n_nodes + 2 * k, top.n_nodes + 2 * k + 1)
        iv = [sys.indices(u) for u in nodes]
        ic = [sys.indices(u) for u in currents]
        for p in range(2):
            a[iv[p], ic[p]] += 1.0  # current into the filter leaves the node
            for q in range(2):
                # scaled by 1/Z0 so constraint rows are commensurate with the KCL rows
                a[ic[p], iv[q]] += (eye[p, q] - s[:, p, q]) / z
                a[ic[p], ic[q]] -= eye[p, q] + s[:, p, q]

    for row, col, val in _junction_stamp(top):
        a[sys.indices(row), sys.indices(col)] += val

    for k, (node, z) in enumerate(zip(top.port_nodes, top.z0_ohm)):
        rhs[sys.index(node, 0), k] = 2.0 / math.sqrt(z)
    return sys


@dataclass(eq=False)
class HarmonicSMatrix:
    """Multi-harmonic scattering response at one input frequency.

    ``blocks[j, h, k]`` is the outgoing wave at port ``j + 1`` and sideband
    ``n = h - n_max`` per unit incident wave at port ``k + 1``, sideband 0.
    """

    f_rf_hz: float
    mod_hz: float
    n_max: int
    blocks: np.ndarray
    z0_ohm: tuple[float, ...] = field(default=())

    @property
    def harmonics(self) -> np.ndarray:
        return np.arange(-self.n_max, self.n_max + 1)

    @property
    def n_ports(self) -> int:
        return self.blocks.shape[0]

    @property
    def fundamental(self) -> np.ndarray:
        """Ordinary ``(P, P)`` S-matrix between fundamental tones."""
        return self.blocks[:, self.n_max, :]

    def s(self, out_port: int, in_port: int, n: int = 0) -> complex:
        return complex(self.blocks[out_port - 1, n + self.n_max, in_port - 1])

    def spectrum(self, in_port: int, out_port: int) -> HarmonicSpectrum:
        col = self.blocks[out_port - 1, :, in_port - 1]
        return HarmonicSpectrum(self.f_rf_hz, self.mod_hz,
                                {int(n): complex(c) for n, c in zip(self.harmonics, col)})

    def power_sums(self) -> np.ndarray:
        """Total outgoing power over all ports and sidebands, per input port."""
        return np.sum(np.abs(self.blocks) ** 2, axis=(0, 1))


def _factor_and_solve(sys: LinearSystem) -> np.ndarray:
    a = sys.matrix
    lu, piv, info = lapack.zgetrf(a)
    if info > 0:
        raise SingularError(f"conversion matrix is exactly singular at {sys.f_rf_hz:g} Hz",
                            condition=math.inf)
    anorm = np.linalg.norm(a, 1)
    rcond, _ = lapack.zgecon(lu, anorm, norm="1")
    if rcond < RCOND_LIMIT:
        raise SingularError(
            f"conversion matrix is singular at {sys.f_rf_hz:g} Hz "
            f"(condition estimate {1.0 / max(rcond, 1e-300):.3g})",
            condition=1.0 / max(rcond, 1e-300))
    x, info = lapack.zgetrs(lu, piv, sys.rhs)
    return x


def _solve_nodal(top: Topology, f_rf: float, n_max: int) -> HarmonicSMatrix:
    sys = assemble_system(top, f_rf, n_max)
    x = _factor_and_solve(sys)
    nh, nu, p = sys.n_harmonics, sys.unknowns_per_harmonic, top.n_ports
    v = x.reshape(nh, nu, p)
    blocks = np.empty((p, nh, p), dtype=complex)
    for j, (node, z) in enumerate(zip(top.port_nodes, top.z0_ohm)):
        blocks[j] = v[:, node, :] / math.sqrt(z)
    for k in range(p):
        blocks[k, n_max, k] -= 1.0
    return HarmonicSMatrix(f_rf, top.mod_hz, n_max, blocks, tuple(top.z0_ohm))


@dataclass(frozen=True)
class SwitchingState:
    """Interval ``[start, stop)`` of the modulation period (as fractions) with fixed switch states.

    ``response`` maps sources ``[a_1..a_P, e_1..e_2F]`` to outputs
    ``[b_1..b_P, c_1..c_2F]``: ``a``/``b`` are port waves, ``c`` the waves
    launched into the filter ports and ``e`` the in-band remainder of the
    waves the filters send back.
    """

    start: float
    stop: float
    on: tuple[bool, ...]
    response: np.ndarray


def clock_edges(top: Topology) -> np.ndarray:
    """Sorted switching instants within one period, as fractions in ``[0, 1)``."""
    edges = [0.0]
    for br in top.switches:
        ck = br.switch.clock
        rise = (ck.phase_rad / (2 * math.pi)) % 1.0
        edges += [rise, (rise + ck.duty) % 1.0]
    edges = np.unique(np.round(np.array(edges) % 1.0, 13))
    return edges


def _state_response(top: Topology, conductances: np.ndarray, s_far: list[np.ndarray]) -> np.ndarray:
    nn, nf, p = top.n_nodes, len(top.filters), top.n_ports
    nu = top.unknowns_per_harmonic
    a = np.zeros((nu, nu), dtype=complex)
    src = np.zeros((nu, p + 2 * nf), dtype=complex)
    for node, z in zip(top.port_nodes, top.z0_ohm):
        a[node, node] += 1.0 / z
    for node, z in top.loads:
        a[node, node] += 1.0 / z
    for br, g in zip(top.switches, conductances):
        i, j = br.node_a, br.node_b
        a[i, i] += g
        a[j, j] += g
        a[i, j] -= g
        a[j, i] -= g
    eye = np.eye(2)
    for k, fb in enumerate(top.filters):
        z = fb.model.ref_ohm
        nodes = (fb.node_left, fb.node_right)
        cur = (nn + 2 * k, nn + 2 * k + 1)
        for q in range(2):
            a[nodes[q], cur[q]] += 1.0
            for r in range(2):
                a[cur[q], nodes[r]] += (eye[q, r] - s_far[k][q, r]) / z
                a[cur[q], cur[r]] -= eye[q, r] + s_far[k][q, r]
            src[cur[q], p + 2 * k + q] = 2.0 / math.sqrt(z)
    for row, col, val in _junction_stamp(top):
        a[row, col] += val
    for k, (node, z) in enumerate(zip(top.port_nodes, top.z0_ohm)):
        src[node, k] = 2.0 / math.sqrt(z)
    try:
        x = np.linalg.solve(a, src)
    except np.linalg.LinAlgError:
        raise SingularError("switch-state network is singular (floating node?)",
                            condition=math.inf) from None
    out = np.empty((p + 2 * nf, p + 2 * nf), dtype=complex)
    for j, (node, z) in enumerate(zip(top.port_nodes, top.z0_ohm)):
        out[j] = x[node] / math.sqrt(z)
        out[j, j] -= 1.0
    for k, fb in enumerate(top.filters):
        z = fb.model.ref_ohm
        for q, node in enumerate((fb.node_left, fb.node_right)):
            out[p + 2 * k + q] = (x[node] + z * x[nn + 2 * k + q]) / (2.0 * math.sqrt(z))
    return out


def switching_states(top: Topology) -> list[SwitchingState]:
    """Piecewise-constant memoryless states of the switch network over one period."""
    edges = np.append(clock_edges(top), 1.0)
    s_far = [far_sparams(fb.model) for fb in top.filters]
    states = []
    period = 1.0 / top.mod_hz
    for t0, t1 in zip(edges[:-1], edges[1:]):
        if t1 - t0 <= 0:
            continue
        mid = 0.5 * (t0 + t1) * period
        on = tuple(bool(br.switch.clock.is_on(mid)) for br in top.switches)
        g = np.array([1.0 / (br.switch.ron_ohm if o else br.switch.roff_ohm)
                      for br, o in zip(top.switches, on)])
        states.append(SwitchingState(float(t0), float(t1), on, _state_response(top, g, s_far)))
    return states


def state_harmonics(states: list[SwitchingState], k_max: int) -> np.ndarray:
    """Fourier coefficients ``X[k]`` of the piecewise-constant response, ``k = -k_max..k_max``."""
    k = np.arange(-k_max, k_max + 1)
    weights = np.empty((len(states), len(k)), dtype=complex)
    nz = k != 0
    for i, st in enumerate(states):
        weights[i, ~nz] = st.stop - st.start
        kk = k[nz]
        weights[i, nz] = (np.exp(-2j * math.pi * kk * st.start)
                          - np.exp(-2j * math.pi * kk * st.stop)) / (2j * math.pi * kk)
    resp = np.stack([st.response for st in states])
    return np.einsum("ik,iab->kab", weights, resp)


def _solve_switched(top: Topology, f_rf: float, n_max: int) -> HarmonicSMatrix:
    freqs = sideband_frequencies(f_rf, top.mod_hz, n_max)
    p, nf = top.n_ports, len(top.filters)
    nh = len(freqs)
    # in-band remainder of each filter around its far-out-of-band reflection
    delta = np.zeros((nh, 2 * nf, 2 * nf), dtype=complex)
    for k, fb in enumerate(top.filters):
        delta[:, 2 * k:2 * k + 2, 2 * k:2 * k + 2] = evaluate(fb.model, freqs) - far_sparams(fb.model)
    active = np.flatnonzero(np.any(np.abs(delta) > 0, axis=(1, 2)))
    harmonics = np.arange(-n_max, n_max + 1)
    x = state_harmonics(switching_states(top), 2 * n_max)
    xk = lambda k: x[k + 2 * n_max]  # noqa: E731
    blocks = np.empty((p, nh, p), dtype=complex)
    for h, n in enumerate(harmonics):
        blocks[:, h, :] = xk(n)[:p, :p]
    if len(active):
        nb, m = len(active), 2 * nf
        bn = harmonics[active]
        lmat = np.zeros((nb * m, nb * m), dtype=complex)
        kmat = np.zeros((nb * m, p), dtype=complex)
        dmat = np.zeros((nb * m, nb * m), dtype=complex)
        for i, n in enumerate(bn):
            rows = slice(i * m, (i + 1) * m)
            kmat[rows] = xk(n)[p:, :p]
            dmat[rows, rows] = delta[active[i]]
            for j, mm in enumerate(bn):
                lmat[rows, j * m:(j + 1) * m] = xk(n - mm)[p:, p:]
        sysmat = np.eye(nb * m) - dmat @ lmat
        try:
            e = np.linalg.solve(sysmat, dmat @ kmat)
        except np.linalg.LinAlgError:
            raise SingularError(f"sideband system is singular at {f_rf:g} Hz",
                                condition=math.inf) from None
        e = e.reshape(nb, m, p)
        for h, n in enumerate(harmonics):
            for j, mm in enumerate(bn):
                blocks[:, h, :] += xk(n - mm)[:p, p:] @ e[j]
    return HarmonicSMatrix(f_rf, top.mod_hz, n_max, blocks, tuple(top.z0_ohm))


METHODS = {"switched": _solve_switched, "nodal": _solve_nodal}


def solve(top: Topology, f_rf: float, n_max: int = DEFAULT_N_MAX, *, strict: bool = False,
          tol: float = 1e-4, method: str = "switched") -> HarmonicSMatrix:
    """Multi-harmonic S-matrix at input frequency ``f_rf``.

    ``n_max`` bounds the reported sidebands and the filter sidebands kept as
    unknowns.  With ``strict=True`` the solve is repeated at ``2 * n_max`` and
    a ``ConvergenceError`` is raised if any fundamental ``|S|`` moves by more
    than ``tol``.
    """
    try:
        impl = METHODS[method]
    except KeyError:
        raise ValueError(f"method must be one of {sorted(METHODS)}") from None
    result = impl(top, f_rf, n_max)
    if strict:
        finer = impl(top, f_rf, 2 * n_max)
        delta = np.max(np.abs(np.abs(finer.fundamental) - np.abs(result.fundamental)))
        if delta > tol:
            raise ConvergenceError(
                f"fundamental |S| changed by {delta:.3g} between n_max={n_max} and "
                f"{2 * n_max} at {f_rf:g} Hz (tolerance {tol:g})")
    return result


def default_workers() -> int:
    raw = os.environ.get("CIRCSIM_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"CIRCSIM_THREADS must be an integer, got {raw!r}") from None


def sweep(top: Topology, f_grid, n_max: int = DEFAULT_N_MAX, *, strict: bool = False,
          tol: float = 1e-4, method: str = "switched",
          workers: int | None = None) -> list[HarmonicSMatrix]:
    """Independent :func:`solve` at every grid frequency, results in grid order.

    A failing point re-raises its error with ``frequency_hz`` attached.
    """
    grid = [float(f) for f in np.atleast_1d(np.asarray(f_grid, dtype=float))]
    if not grid:
        raise ValueError("frequency grid is empty")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("frequency grid must be non-decreasing")
    workers = default_workers() if workers is None else workers

    def point(f):
        try:
            return solve(top, f, n_max, strict=strict, tol=tol, method=method)
        except Exception as exc:
            exc.frequency_hz = f
            raise

    if workers <= 1 or len(grid) == 1:
        return [point(f) for f in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(point, grid))


def output_spectrum(top: Topology, f_in: float, in_port: int, out_port: int,
                    n_max: int = DEFAULT_N_MAX, method: str = "switched") -> HarmonicSpectrum:
    """Sideband amplitudes leaving ``out_port`` for a unit tone into ``in_port``."""
    return solve(top, f_in, n_max, method=method).spectrum(in_port, out_port)


def fundamental_matrices(results) -> tuple[np.ndarray, np.ndarray]:
    """``(freqs, S)`` with ``S`` of shape ``(F, P, P)`` from a list of solver results."""
    freqs = np.array([r.f_rf_hz for r in results])
    s = np.stack([r.fundamental for r in results])
    return freqs, s
