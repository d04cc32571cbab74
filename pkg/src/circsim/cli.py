"""Command-line front end: ``circsim sparams | spectrum | metrics | sweep | touchstone``.

Scenarios are described by an INI file (see ``CONFIG_KEYS`` and the README);
every key is optional and the defaults give the canonical differential
circulator.  Quantities accept SI-prefixed unit suffixes (``900MHz``,
``20ns``, ``1Mohm``) or plain numbers in base units.

Exit codes: 0 success, 2 configuration error, 3 solver error, 4 I/O or
parse error.
"""

from __future__ import annotations

import argparse
import configparser
import io
import math
import re
import sys
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import filters, metrics, network, spectra, touchstone
from .errors import CircsimError, ConfigError, ParseError, RegimeError, UnknownParamError

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_IO = 0, 2, 3, 4

_PREFIX = {"": 1.0, "p": 1e-12, "n": 1e-9, "u": 1e-6, "µ": 1e-6, "m": 1e-3,
           "k": 1e3, "K": 1e3, "M": 1e6, "G": 1e9}
_NUMBER = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?|[-+]?inf)\s*(\S*)\s*$")

# section -> key -> kind; kinds: str, int, bool, float, hz, s, ohm, ohm_list
CONFIG_KEYS = {
    "topology": {"kind": "str", "combiner": "str"},
    "filter": {"type": "str", "center": "hz", "bw": "hz", "delay": "s", "il_db": "float",
               "reflection_phase_deg": "float", "edge": "hz", "delay_slope": "float",
               "rl_db": "float", "path": "str", "extrapolation": "str"},
    "clock": {"fm": "hz", "duty": "float", "phase_deg": "float", "phase_error_deg": "float"},
    "switch": {"ron": "ohm", "roff": "ohm"},
    "ports": {"z0": "ohm_list"},
    "solver": {"n_max": "int", "strict": "bool", "tol": "float", "method": "str"},
    "sweep": {"start": "hz", "stop": "hz", "points": "int", "list": "hz_list"},
    "metrics": {"center": "hz", "band_lo": "hz", "band_hi": "hz", "threshold_db": "float",
                "imp_n_max": "int"},
}

SWEEP_PARAMS = ("phase_error_deg", "duty", "ron_ohm", "roff_ohm", "fm_hz")
_PARAM_UNITS = {"phase_error_deg": "", "duty": "", "ron_ohm": "ohm", "roff_ohm": "ohm",
                "fm_hz": "hz"}


def parse_quantity(text: str, unit: str = "", key: str | None = None) -> float:
    """``'12.5MHz'`` -> 12.5e6 for ``unit='hz'``; unit names are case-insensitive."""
    m = _NUMBER.match(str(text))
    if not m:
        raise ConfigError(f"{key or 'value'}: cannot parse {text!r} as a number", key)
    value, suffix = float(m.group(1)), m.group(2)
    if not suffix:
        return value
    if unit and suffix.lower().endswith(unit):
        prefix = suffix[: len(suffix) - len(unit)]
    elif unit == "ohm" and suffix.endswith("Ω"):
        prefix = suffix[:-1]
    else:
        raise ConfigError(f"{key or 'value'}: unexpected unit {suffix!r} in {text!r}", key)
    if prefix not in _PREFIX or (unit == "hz" and _PREFIX[prefix] < 1):
        # sub-hertz prefixes are rejected so that 'mhz' cannot silently mean millihertz
        raise ConfigError(f"{key or 'value'}: unknown SI prefix {prefix!r} in {text!r}", key)
    return value * _PREFIX[prefix]


def _convert(kind: str, raw: str, key: str):
    if kind == "str":
        return raw.strip()
    if kind == "int":
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{key}: expected an integer, got {raw!r}", key) from None
    if kind == "bool":
        low = raw.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{key}: expected a boolean, got {raw!r}", key)
    if kind.endswith("_list"):
        unit = kind[:-5]
        items = [t for t in re.split(r"[,\s]+", raw.strip()) if t]
        if not items:
            raise ConfigError(f"{key}: empty list", key)
        return tuple(parse_quantity(t, unit, key) for t in items)
    return parse_quantity(raw, "" if kind == "float" else kind, key)


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario; defaults are the canonical differential circulator."""

    kind: str = network.DIFFERENTIAL
    combiner: str = "ideal"
    filter_type: str = "brickwall"
    center_hz: float = 900e6
    bw_hz: float = 40e6
    delay_s: float = 20e-9
    il_db: float = 0.9
    reflection_phase_deg: float = 0.0
    edge_hz: float = 0.0
    delay_slope: float = 0.0
    rl_db: float = math.inf
    filter_path: str | None = None
    extrapolation: str = "reflective"
    fm_hz: float = 12.5e6
    duty: float = 0.5
    phase_deg: float = 0.0
    phase_error_deg: float = 0.0
    ron_ohm: float = 5.0
    roff_ohm: float = 1e6
    z0_ohm: tuple[float, ...] | None = None
    n_max: int = network.DEFAULT_N_MAX
    strict: bool = False
    tol: float = 1e-4
    method: str = "switched"
    sweep_start_hz: float = 860e6
    sweep_stop_hz: float = 940e6
    sweep_points: int = 161
    sweep_list: tuple[float, ...] | None = None
    metrics_center_hz: float | None = None
    band: tuple[float, float] | None = None
    threshold_db: float = 20.0
    imp_n_max: int = 3
    base_dir: Path = field(default=Path("."), compare=False)

    def __post_init__(self):
        checks = [
            (self.kind in (network.SINGLE, network.DIFFERENTIAL, network.QUAD), "topology.kind",
             f"must be single, differential or quad, got {self.kind!r}"),
            (self.combiner in network.COMBINERS, "topology.combiner",
             f"must be one of {network.COMBINERS}"),
            (self.filter_type in ("brickwall", "parametric", "touchstone"), "filter.type",
             f"must be brickwall, parametric or touchstone, got {self.filter_type!r}"),
            (self.filter_type != "touchstone" or self.filter_path, "filter.path",
             "required when filter.type = touchstone"),
            (self.extrapolation in filters.EXTRAPOLATION_POLICIES, "filter.extrapolation",
             f"must be one of {filters.EXTRAPOLATION_POLICIES}"),
            (0 < self.duty < 1, "clock.duty", "must lie in (0, 1)"),
            (self.fm_hz > 0, "clock.fm", "must be > 0"),
            (self.ron_ohm > 0, "switch.ron", "must be > 0"),
            (self.roff_ohm >= self.ron_ohm, "switch.roff", "must be >= switch.ron"),
            (self.n_max >= 1, "solver.n_max", "must be >= 1"),
            (self.tol > 0, "solver.tol", "must be > 0"),
            (self.method in network.METHODS, "solver.method",
             f"must be one of {sorted(network.METHODS)}"),
            (self.sweep_points >= 1, "sweep.points", "must be >= 1"),
            (self.sweep_stop_hz >= self.sweep_start_hz, "sweep.stop", "must be >= sweep.start"),
            (self.threshold_db > 0, "metrics.threshold_db", "must be > 0"),
            (self.imp_n_max >= 1, "metrics.imp_n_max", "must be >= 1"),
        ]
        for ok, key, msg in checks:
            if not ok:
                raise ConfigError(f"{key}: {msg}", key)
        if self.z0_ohm is not None:
            if len(self.z0_ohm) not in (1, self.n_ports):
                raise ConfigError(f"ports.z0: need 1 or {self.n_ports} values", "ports.z0")
            if any(z <= 0 for z in self.z0_ohm):
                raise ConfigError("ports.z0: impedances must be > 0", "ports.z0")

    @property
    def n_ports(self) -> int:
        return 2 if self.kind == network.SINGLE else 4

    @property
    def port_impedances(self):
        if self.z0_ohm is None:
            return 25.0 if self.kind == network.QUAD else 50.0
        return self.z0_ohm[0] if len(self.z0_ohm) == 1 else self.z0_ohm

    def filter_model(self) -> filters.FilterModel:
        try:
            if self.filter_type == "brickwall":
                return filters.BrickWall(self.center_hz, self.bw_hz, self.delay_s, self.il_db,
                                         math.radians(self.reflection_phase_deg))
            if self.filter_type == "parametric":
                return filters.Parametric(self.center_hz, self.bw_hz, self.edge_hz, self.delay_s,
                                          self.delay_slope, self.il_db, self.rl_db)
        except ValueError as exc:
            raise ConfigError(f"filter: {exc}", "filter") from None
        path = Path(self.filter_path)
        if not path.is_absolute():
            path = self.base_dir / path
        return filters.Tabulated(touchstone.read(path), self.extrapolation)

    def topology(self) -> network.Topology:
        model = self.filter_model()
        common = dict(ron_ohm=self.ron_ohm, roff_ohm=self.roff_ohm, mod_hz=self.fm_hz,
                      duty=self.duty, z0_ohm=self.port_impedances,
                      phase_rad=math.radians(self.phase_deg))
        err = math.radians(self.phase_error_deg)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            if self.kind == network.QUAD:
                return network.quad(model, board_phase_error_rad=err, combiner=self.combiner,
                                    **common)
            if self.kind == network.DIFFERENTIAL:
                return network.differential(model, lower_phase_error_rad=err, **common)
            if err:
                raise ConfigError("clock.phase_error_deg: not defined for a single path",
                                  "clock.phase_error_deg")
            return network.single_path(model, **common)

    def grid(self) -> np.ndarray:
        if self.sweep_list is not None:
            return np.array(self.sweep_list)
        return np.linspace(self.sweep_start_hz, self.sweep_stop_hz, self.sweep_points)

    @property
    def center(self) -> float:
        return self.center_hz if self.metrics_center_hz is None else self.metrics_center_hz

    @property
    def metrics_band(self) -> tuple[float, float]:
        if self.band is not None:
            return self.band
        if self.filter_type == "touchstone":
            lo, hi = self.filter_model().band
            return lo, hi
        return self.center_hz - self.bw_hz / 2, self.center_hz + self.bw_hz / 2


_FIELD_OF = {
    ("topology", "kind"): "kind", ("topology", "combiner"): "combiner",
    ("filter", "type"): "filter_type", ("filter", "center"): "center_hz",
    ("filter", "bw"): "bw_hz", ("filter", "delay"): "delay_s", ("filter", "il_db"): "il_db",
    ("filter", "reflection_phase_deg"): "reflection_phase_deg", ("filter", "edge"): "edge_hz",
    ("filter", "delay_slope"): "delay_slope", ("filter", "rl_db"): "rl_db",
    ("filter", "path"): "filter_path", ("filter", "extrapolation"): "extrapolation",
    ("clock", "fm"): "fm_hz", ("clock", "duty"): "duty", ("clock", "phase_deg"): "phase_deg",
    ("clock", "phase_error_deg"): "phase_error_deg",
    ("switch", "ron"): "ron_ohm", ("switch", "roff"): "roff_ohm", ("ports", "z0"): "z0_ohm",
    ("solver", "n_max"): "n_max", ("solver", "strict"): "strict", ("solver", "tol"): "tol",
    ("solver", "method"): "method",
    ("sweep", "start"): "sweep_start_hz", ("sweep", "stop"): "sweep_stop_hz",
    ("sweep", "points"): "sweep_points", ("sweep", "list"): "sweep_list",
    ("metrics", "center"): "metrics_center_hz", ("metrics", "threshold_db"): "threshold_db",
    ("metrics", "imp_n_max"): "imp_n_max",
}


def parse_config(text: str, base_dir: Path = Path(".")) -> ScenarioConfig:
    parser = configparser.ConfigParser(interpolation=None, default_section="__none__")
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}".splitlines()[0]) from None
    values: dict = {"base_dir": base_dir}
    band = {}
    for section in parser.sections():
        if section not in CONFIG_KEYS:
            raise ConfigError(f"unknown section [{section}]", section)
        for key, raw in parser.items(section):
            name = f"{section}.{key}"
            if key not in CONFIG_KEYS[section]:
                raise ConfigError(f"{name}: unknown key", name)
            value = _convert(CONFIG_KEYS[section][key], raw, name)
            if section == "metrics" and key in ("band_lo", "band_hi"):
                band[key] = value
            else:
                values[_FIELD_OF[(section, key)]] = value
    if band:
        if len(band) != 2:
            raise ConfigError("metrics.band_lo and metrics.band_hi must be given together",
                              "metrics.band_lo")
        if band["band_hi"] <= band["band_lo"]:
            raise ConfigError("metrics.band_hi: must exceed metrics.band_lo", "metrics.band_hi")
        values["band"] = (band["band_lo"], band["band_hi"])
    return ScenarioConfig(**values)


def load_config(path: str | None) -> ScenarioConfig:
    if path is None:
        return ScenarioConfig()
    p = Path(path)
    return parse_config(p.read_text(), p.parent)


def _num(x: float) -> str:
    return f"{float(x) + 0.0:.12g}"


def _csv(header, rows) -> str:
    out = io.StringIO()
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(v if isinstance(v, str) else _num(v) for v in row) + "\n")
    return out.getvalue()


def _db(z) -> float:
    mag = abs(z)
    return -math.inf if mag == 0 else 20.0 * math.log10(mag)


def _sweep(cfg: ScenarioConfig, top=None, grid=None):
    top = cfg.topology() if top is None else top
    grid = cfg.grid() if grid is None else grid
    return network.sweep(top, grid, cfg.n_max, strict=cfg.strict, tol=cfg.tol, method=cfg.method)


def cmd_sparams(cfg: ScenarioConfig) -> str:
    results = _sweep(cfg)
    p = cfg.n_ports
    names = [f"S{i + 1}{j + 1}" for j in range(p) for i in range(p)]
    header = ["freq_hz"] + [f"{n}_db" for n in names] + [f"{n}_deg" for n in names]
    rows = []
    for r in results:
        s = r.fundamental
        vals = [s[i, j] for j in range(p) for i in range(p)]
        rows.append([r.f_rf_hz] + [_db(v) for v in vals]
                    + [math.degrees(math.atan2(v.imag, v.real)) for v in vals])
    return _csv(header, rows)


def closed_form_spectrum(cfg: ScenarioConfig, tone_hz: float, n_max: int):
    if cfg.filter_type != "brickwall":
        raise ConfigError("filter.type: the closed-form model needs a brickwall filter",
                          "filter.type")
    lo, hi = cfg.center_hz - cfg.bw_hz / 2, cfg.center_hz + cfg.bw_hz / 2
    if not lo <= tone_hz - cfg.fm_hz and tone_hz + cfg.fm_hz <= hi:
        raise RegimeError(f"closed form needs the tone and its first-order products "
                          f"({tone_hz - cfg.fm_hz:g}, {tone_hz + cfg.fm_hz:g} Hz) inside the "
                          f"passband [{lo:g}, {hi:g}] Hz")
    clock = spectra.ClockSpec(cfg.fm_hz, cfg.duty, math.radians(cfg.phase_deg))
    path = spectra.PathConfig(tone_hz, clock, cfg.delay_s, cfg.bw_hz / 2, cfg.il_db)
    err = math.radians(cfg.phase_error_deg)
    if cfg.kind == network.SINGLE:
        return spectra.branch_output_coeffs(path, n_max)
    if cfg.kind == network.DIFFERENTIAL:
        if err:
            lower = path.with_phase(clock.phase_rad + math.pi + err)
            return spectra.superpose_branches(
                [spectra.branch_output_coeffs(path, n_max),
                 spectra.branch_output_coeffs(lower, n_max)])
        return spectra.differential_spectrum(path, n_max)
    return spectra.quad_spectrum(path, n_max, err)


def cmd_spectrum(cfg: ScenarioConfig, tone_hz: float, in_port: int, out_port: int,
                 n_max: int, model: str = "solver") -> str:
    for name, port in (("--in-port", in_port), ("--out-port", out_port)):
        if not 1 <= port <= cfg.n_ports:
            raise ConfigError(f"{name}: port {port} outside 1..{cfg.n_ports}", name)
    if model == "closed-form":
        if (in_port, out_port) != (1, 2):
            raise ConfigError("--model closed-form: only the 1 -> 2 path is available", "--model")
        spec = closed_form_spectrum(cfg, tone_hz, n_max)
    else:
        spec = network.solve(cfg.topology(), tone_hz, n_max, strict=cfg.strict, tol=cfg.tol,
                             method=cfg.method).spectrum(in_port, out_port)
    c0 = abs(spec[0])
    rows = []
    for n in range(-n_max, n_max + 1):
        c = spec[n]
        dbc = -math.inf if (c == 0 or c0 == 0) else 20.0 * math.log10(abs(c) / c0)
        rows.append([str(n), spec.frequency(n), _db(c), dbc,
                     math.degrees(math.atan2(c.imag, c.real))])
    return _csv(["n", "freq_hz", "amplitude_db", "amplitude_dbc", "phase_deg"], rows)


def scenario_report(cfg: ScenarioConfig) -> metrics.MetricsReport:
    top = cfg.topology()
    grid = cfg.grid()
    center = cfg.center
    if not grid[0] <= center <= grid[-1]:
        grid = np.unique(np.append(grid, center))
    results = _sweep(cfg, top, grid)
    spec = network.solve(top, center, cfg.n_max, method=cfg.method).spectrum(1, 2)
    return metrics.build_report(results, center, cfg.metrics_band, spec, cfg.imp_n_max,
                                cfg.threshold_db)


def cmd_metrics(cfg: ScenarioConfig) -> tuple[str, str]:
    """``(table, csv)`` for the scenario's default sweep."""
    rep = scenario_report(cfg)
    return rep.table(), _csv(metrics.MetricsReport.header(), [rep.row()])


def apply_param(cfg: ScenarioConfig, name: str, value: float) -> ScenarioConfig:
    if name not in SWEEP_PARAMS:
        raise UnknownParamError(
            f"unknown sweep parameter {name!r}; valid names: {', '.join(SWEEP_PARAMS)}", name)
    attr = {"phase_error_deg": "phase_error_deg", "duty": "duty", "ron_ohm": "ron_ohm",
            "roff_ohm": "roff_ohm", "fm_hz": "fm_hz"}[name]
    return replace(cfg, **{attr: value})


def cmd_sweep_param(cfg: ScenarioConfig, name: str, values, metric: str | None = None) -> str:
    if name not in SWEEP_PARAMS:
        apply_param(cfg, name, 0.0)
    values = list(values)
    if not values:
        raise ConfigError("--values: need at least one value", "--values")
    columns = metrics.MetricsReport.header()
    if metric is not None:
        if metric not in columns:
            raise ConfigError(f"--metric: must be one of {', '.join(columns)}", "--metric")
        columns = [metric]
    rows = []
    for v in values:
        rep = scenario_report(apply_param(cfg, name, v))
        rows.append([v] + [getattr(rep, c) for c in columns])
    return _csv([name] + columns, rows)


def cmd_touchstone_info(path: str, band: tuple[float, float] | None = None) -> str:
    net = touchstone.read(path)
    f = net.freqs_hz
    lo, hi = band if band is not None else (f[0], f[-1])
    sel = (f >= lo) & (f <= hi)
    if not sel.any():
        raise ConfigError(f"--band: no data points in [{lo:g}, {hi:g}] Hz", "--band")
    il = -20.0 * np.log10(np.maximum(np.abs(net.s(2, 1)[sel]), 1e-300))
    rl = -20.0 * np.log10(np.maximum(np.abs(net.s(1, 1)[sel]), 1e-300))
    lines = [f"file            {path}",
             f"points          {len(net)}",
             f"frequency range {_num(f[0])} .. {_num(f[-1])} Hz",
             f"reference       {_num(net.ref_ohm)} ohm",
             f"band            {_num(lo)} .. {_num(hi)} Hz",
             f"min IL          {_num(il.min())} dB",
             f"max RL          {_num(rl.max())} dB"]
    if sel.sum() >= 3 and np.all(np.abs(net.s(2, 1)[sel]) > 1e-12):
        tau = touchstone.group_delay_curve(f[sel], net.s(2, 1)[sel])
        lines += [f"group delay min {_num(tau.min())} s",
                  f"group delay max {_num(tau.max())} s"]
    else:
        lines.append("group delay     n/a (needs >= 3 in-band points with nonzero S21)")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="circsim", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, with_sweep=True):
        p.add_argument("--config", help="scenario INI file (defaults: canonical scenario)")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--n-max", type=int, help="harmonic truncation")
        p.add_argument("--strict", action="store_true", help="check n_max convergence")
        if with_sweep:
            p.add_argument("--start", help="sweep start frequency")
            p.add_argument("--stop", help="sweep stop frequency")
            p.add_argument("--points", type=int, help="sweep points")

    p = sub.add_parser("sparams", help="fundamental S-parameters over a sweep")
    common(p)
    p = sub.add_parser("spectrum", help="output sidebands for a single tone")
    common(p, with_sweep=False)
    p.add_argument("--tone", default="892MHz", help="input tone frequency")
    p.add_argument("--in-port", type=int, default=1)
    p.add_argument("--out-port", type=int, default=2)
    p.add_argument("--model", choices=("solver", "closed-form"), default="solver")
    p = sub.add_parser("metrics", help="figures of merit of the scenario")
    common(p)
    p = sub.add_parser("sweep", help="figures of merit versus one parameter")
    common(p)
    p.add_argument("--param", required=True, help=f"one of {', '.join(SWEEP_PARAMS)}")
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("--metric", help="report only this metrics column")
    p = sub.add_parser("touchstone", help="summary of a two-port Touchstone file")
    p.add_argument("path")
    p.add_argument("--band", nargs=2, metavar=("LO", "HI"), help="analysis band")
    p.add_argument("--out", help="output file (default: stdout)")
    return ap


def _overrides(cfg: ScenarioConfig, args) -> ScenarioConfig:
    changes = {}
    if getattr(args, "n_max", None) is not None:
        changes["n_max"] = args.n_max
    if getattr(args, "strict", False):
        changes["strict"] = True
    for flag, attr in (("start", "sweep_start_hz"), ("stop", "sweep_stop_hz")):
        raw = getattr(args, flag, None)
        if raw is not None:
            changes[attr] = parse_quantity(raw, "hz", f"--{flag}")
            changes["sweep_list"] = None
    if getattr(args, "points", None) is not None:
        changes["sweep_points"] = args.points
        changes["sweep_list"] = None
    return replace(cfg, **changes) if changes else cfg


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, newline="\n")


def run(args) -> None:
    if args.command == "touchstone":
        band = None
        if args.band:
            band = tuple(parse_quantity(b, "hz", "--band") for b in args.band)
        _emit(cmd_touchstone_info(args.path, band), args.out)
        return
    cfg = _overrides(load_config(args.config), args)
    if args.command == "sparams":
        _emit(cmd_sparams(cfg), args.out)
    elif args.command == "spectrum":
        tone = parse_quantity(args.tone, "hz", "--tone")
        _emit(cmd_spectrum(cfg, tone, args.in_port, args.out_port, cfg.n_max, args.model),
              args.out)
    elif args.command == "metrics":
        table, csv = cmd_metrics(cfg)
        sys.stdout.write(table + "\n")
        if args.out:
            _emit(csv, args.out)
    elif args.command == "sweep":
        unit = _PARAM_UNITS.get(args.param, "")
        if args.param not in SWEEP_PARAMS:
            apply_param(cfg, args.param, 0.0)
        values = [parse_quantity(v, unit, "--values") for v in args.values.split(",") if v.strip()]
        _emit(cmd_sweep_param(cfg, args.param, values, args.metric), args.out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        run(args)
    except ConfigError as exc:
        print(f"circsim: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ParseError, OSError) as exc:
        print(f"circsim: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (CircsimError, ValueError, np.linalg.LinAlgError) as exc:
        where = getattr(exc, "frequency_hz", None)
        at = f" at {where:g} Hz" if where is not None else ""
        print(f"circsim: solver error{at}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
