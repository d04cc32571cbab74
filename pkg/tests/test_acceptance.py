"""Acceptance criteria 1-10, each reporting one PASS/FAIL line.

Run under pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""

import math
import sys
import time
import warnings
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from circsim import cli, filters as fl, network as nw, spectra as sp  # noqa: E402
from circsim import timedomain as td, touchstone as ts  # noqa: E402
from conftest import ACCEPTANCE_LINES  # noqa: E402
from oracles import lti_reference  # noqa: E402

F0, FM = 900e6, 12.5e6
IDEAL_SW = dict(ron_ohm=1e-6, roff_ohm=1e12)


def ideal_bw(il=0.0):
    return fl.BrickWall(F0, 40e6, 20e-9, il)


def path_cfg():
    return sp.PathConfig(F0, sp.ClockSpec(FM), 20e-9, 20e6)


def dbc(spec, n):
    c = abs(spec[n])
    return -math.inf if c == 0 else 20 * math.log10(c / abs(spec[0]))


def record(number, ok, detail, t0, budget_s):
    elapsed = time.perf_counter() - t0
    in_time = elapsed < budget_s
    status = "PASS" if ok and in_time else "FAIL"
    timing = f"{elapsed:.2f} s of {budget_s:g} s"
    if not in_time:
        timing += " (over budget)"
    line = f"AC {number}: {status} | {detail} | {timing}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, detail
    assert in_time, timing


def test_ac01_theoretical_il():
    t0 = time.perf_counter()
    closed = abs(sp.differential_spectrum(path_cfg(), 4)[0])
    solver = abs(nw.solve(nw.differential(ideal_bw(), **IDEAL_SW), F0).s(2, 1))
    il = [-20 * math.log10(x) for x in (closed, solver)]
    ok = all(abs(x - 0.864) <= 0.005 for x in il) and all(abs(x - 0.90528) < 5e-6
                                                          for x in (closed, solver))
    record(1, ok, f"|S21| closed {closed:.6f} solver {solver:.6f}; "
                  f"IL {il[0]:.4f} / {il[1]:.4f} dB (target 0.864 +/- 0.005)", t0, 1.0)


def test_ac02_coefficient_table():
    t0 = time.perf_counter()
    table = {0: 0.45264, 1: 0.31831, 2: 0.06755, 3: 0.05305, 4: 0.01351}
    closed = sp.branch_output_coeffs(path_cfg(), 4)
    grid = td.SimGrid.canonical()
    ck = sp.ClockSpec(FM)
    fft = td.spectrum_at_sidebands(td.simulate_path(grid, ck, ck.shifted(math.pi / 2), ideal_bw()),
                                   grid, 4)
    worst = 0.0
    ok = True
    for n, mag in table.items():
        ok &= abs(abs(closed[n]) - mag) <= 5e-6
        for m in (n, -n):
            rel = abs(abs(fft[m]) - mag) / mag
            worst = max(worst, rel)
    ok &= worst <= 1e-3
    record(2, ok, f"closed form matches table; oracle FFT worst relative error {worst:.2e} "
                  "(limit 1e-3)", t0, 10.0)


def test_ac03_cancellation():
    t0 = time.perf_counter()
    cfg = path_cfg()
    diff_cf = sp.differential_spectrum(cfg, 8)
    quad_cf = sp.quad_spectrum(cfg, 8)
    diff_sv = nw.solve(nw.differential(ideal_bw(), **IDEAL_SW), F0, 8).spectrum(1, 2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        quad_sv = nw.solve(nw.quad(ideal_bw(), **IDEAL_SW), F0, 8).spectrum(1, 2)
    odd = max(dbc(s, n) for s in (diff_cf, diff_sv) for n in (-7, -5, -3, -1, 1, 3, 5, 7))
    low = max(dbc(s, n) for s in (quad_cf, quad_sv) for n in (-3, -2, -1, 1, 2, 3))
    fourth = [dbc(s, n) for s in (quad_cf, quad_sv) for n in (-4, 4)]
    ok = odd <= -120 and low <= -120 and all(abs(x + 30.5) <= 0.2 for x in fourth)
    record(3, ok, f"differential odd <= {odd:.1f} dBc; quad |n|<=3 <= {low:.1f} dBc; "
                  f"quad n=+/-4 at {min(fourth):.3f}..{max(fourth):.3f} dBc "
                  "(target -30.5 +/- 0.2)", t0, 30.0)


def test_ac04_lti_limit():
    t0 = time.perf_counter()
    worst_recip = worst_ref = 0.0
    for f in (F0, 893e6, 915e6):
        top = nw.differential(ideal_bw(0.9), ron_ohm=5.0, roff_ohm=5.0)
        s = nw.solve(top, f).fundamental
        worst_recip = max(worst_recip, np.abs(s - s.T).max())
        worst_ref = max(worst_ref, np.abs(s - lti_reference(top, f)).max())
    ok = worst_recip <= 1e-9 and worst_ref <= 1e-9
    record(4, ok, f"max |Sij - Sji| {worst_recip:.1e}; max deviation from direct LTI "
                  f"solve {worst_ref:.1e} (limits 1e-9)", t0, 5.0)


def test_ac05_circulation():
    t0 = time.perf_counter()
    res = nw.solve(nw.differential(ideal_bw(0.9)), F0)
    fwd = [20 * math.log10(abs(res.s(j % 4 + 1, j))) for j in range(1, 5)]
    rev = [20 * math.log10(abs(res.s(j, j % 4 + 1))) for j in range(1, 5)]
    spread = max(fwd) - min(fwd)
    ok = spread <= 0.01 and max(rev) <= -20
    record(5, ok, f"forward {min(fwd):.3f} dB (spread {spread:.1e} dB); worst reverse "
                  f"{max(rev):.2f} dB (limit -20)", t0, 10.0)


def test_ac06_convergence():
    t0 = time.perf_counter()
    bw = ideal_bw(0.9)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        scenarios = {"single": nw.single_path(bw), "differential": nw.differential(bw),
                     "quad": nw.quad(bw), "quad-tee": nw.quad(bw, combiner="tee")}
    deltas = {}
    for name, top in scenarios.items():
        a = abs(nw.solve(top, F0, 16).s(2, 1))
        b = abs(nw.solve(top, F0, 32).s(2, 1))
        deltas[name] = abs(a - b)
    worst = max(deltas.values())
    record(6, worst < 1e-4, "max |S21| change n_max 16 -> 32 over "
                            f"{', '.join(deltas)}: {worst:.1e} (limit 1e-4)", t0, 60.0)


def test_ac07_clock_shift():
    t0 = time.perf_counter()
    dphi = math.radians(37)
    top = nw.differential(ideal_bw(0.9))
    a = nw.solve(top, 897e6, 8)
    b = nw.solve(top.shifted(dphi), 897e6, 8)
    d0 = np.abs(b.fundamental - a.fundamental).max()
    rot = np.exp(-1j * a.harmonics * dphi)[None, :, None]
    dn = np.abs(b.blocks - a.blocks * rot).max()
    record(7, d0 <= 1e-10 and dn <= 1e-10,
           f"n=0 change {d0:.1e}; sideband rotation error {dn:.1e} (limits 1e-10)", t0, 5.0)


def _column(text, name):
    lines = text.strip().splitlines()
    idx = lines[0].split(",").index(name)
    return [float(line.split(",")[idx]) for line in lines[1:]]


def test_ac08_sensitivity():
    t0 = time.perf_counter()
    quad = cli.ScenarioConfig(kind="quad")
    imp = _column(cli.cmd_sweep_param(quad, "phase_error_deg", [0, 1, 2, 5, 10],
                                      "imp_worst_dbc"), "imp_worst_dbc")
    canon = cli.ScenarioConfig()
    bw = _column(cli.cmd_sweep_param(canon, "roff_ohm", [1e3, 1e4, 1e6], "ix_bw_hz"),
                 "ix_bw_hz")
    ok_a = all(x < y for x, y in zip(imp, imp[1:]))
    ok_b = all(x <= y for x, y in zip(bw, bw[1:]))
    detail = (f"(a) {'ok' if ok_a else 'NOT monotone'}: worst IMP "
              + ", ".join(f"{x:.1f}" for x in imp) + " dBc; "
              f"(b) {'ok' if ok_b else 'NOT non-decreasing'}: 20-dB IX-BW "
              + ", ".join(f"{x / 1e6:.2f}" for x in bw) + " MHz for roff 1k/10k/1M")
    record(8, ok_a and ok_b, detail, t0, 120.0)


def test_ac09_touchstone():
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    f = np.sort(rng.uniform(0.5e9, 1.5e9, 25))
    smat = 0.45 * (rng.standard_normal((25, 2, 2)) + 1j * rng.standard_normal((25, 2, 2))) / 2
    net = ts.NetworkData(f, smat)
    worst = 0.0
    for fmt in ts.FORMATS:
        for unit in ts.UNITS:
            back = ts.parse(ts.write(net, fmt, unit))
            worst = max(worst, np.abs(back.smatrix - smat).max() / np.abs(smat).max(),
                        np.abs(back.freqs_hz - f).max() / f.max())
    fd = np.linspace(850e6, 950e6, 101)
    sd = np.zeros((len(fd), 2, 2), complex)
    sd[:, 1, 0] = sd[:, 0, 1] = np.exp(-2j * math.pi * fd * 20e-9)
    tau = ts.group_delay(ts.parse(ts.write(ts.NetworkData(fd, sd))), f_hz=900e6)
    ok = worst <= 1e-12 and abs(tau - 20e-9) <= 20e-12
    record(9, ok, f"round-trip worst relative error {worst:.1e} over 3 formats x 4 units; "
                  f"group delay {tau * 1e9:.6f} ns", t0, 1.0)


def test_ac10_lossy_composition():
    t0 = time.perf_counter()
    res = nw.solve(nw.differential(ideal_bw(0.9), ron_ohm=5.0, roff_ohm=1e6, z0_ohm=50.0), F0)
    il = -20 * math.log10(abs(res.s(2, 1)))
    record(10, 1.7 <= il <= 2.6, f"differential IL {il:.4f} dB (window [1.7, 2.6] dB)", t0, 10.0)


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_ac"):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
