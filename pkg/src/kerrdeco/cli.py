"""Command line: simulate scenarios, reproduce figure data, sweep parameters, verify.

All numeric CSV output carries 12 significant digits and is byte-for-byte
reproducible for a given scenario. Exit codes: 0 success, 1 usage or
configuration error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from dataclasses import dataclass
from typing import Optional, Sequence, TextIO

import numpy as np

from . import analytics, measures, verify
from .evolution import CavityParams, closed_form_reason, propagate, trajectory
from .states import (
    BellLike, BellPhi, BellPsi, InitialState, WernerLike, WernerPhi, WernerPsi,
    initial_density, initial_label, parse_initial,
)

__all__ = ["Scenario", "parse_scenario", "load_scenario", "run_simulate",
           "run_figure", "run_sweep", "run_verify", "main"]

_ENGINES = ("analytic", "oracle", "closed_form")
_MEASURE_OUTPUTS = ("concurrence", "negativity", "eof", "log_negativity")
_OUTPUTS = _MEASURE_OUTPUTS + ("matrix_elements",)
_FIGURES = ("fig1", "fig2", "fig3", "fig4")
_SWEEPABLE = ("gamma", "chi12", "p")
_DEFAULT_PANEL_WEIGHTS = (0.4, 0.6, 0.8, 1.0)

_BASIS = ("00", "01", "10", "11")
_MATRIX_COLUMNS = tuple(
    f"{part}_{a}_{b}" for a in _BASIS for b in _BASIS for part in ("re", "im")
)


@dataclass(frozen=True)
class Scenario:
    """One simulation request: initial state, cavity parameters, grid, engine, outputs."""

    initial: InitialState
    params: CavityParams = CavityParams()
    t_max: float = 1.0
    n_points: int = 401
    engine: str = "analytic"
    outputs: tuple = _MEASURE_OUTPUTS
    fock_dim: int = 2
    step: Optional[float] = None

    def __post_init__(self):
        if self.t_max <= 0:
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if self.n_points < 2:
            raise ValueError(f"n_points must be at least 2, got {self.n_points}")
        if self.engine not in _ENGINES:
            raise ValueError(f"unknown engine {self.engine!r}, expected one of {_ENGINES}")
        outs = tuple(self.outputs)
        if not outs:
            raise ValueError("outputs must name at least one column set")
        for o in outs:
            if o not in _OUTPUTS:
                raise ValueError(f"unknown output {o!r}, expected names from {_OUTPUTS}")
        object.__setattr__(self, "outputs", outs)
        if self.engine == "analytic" and not self.params.quiet:
            raise ValueError("thermal reservoirs (nbar > 0) need the oracle engine")
        if self.engine == "oracle" and not self.params.quiet and self.fock_dim < 4:
            raise ValueError("thermal oracle runs need fock_dim >= 4")
        if self.engine == "closed_form":
            reason = closed_form_reason(self.initial, self.params)
            if reason is not None:
                raise ValueError(reason)


def _parse_params(obj: dict) -> CavityParams:
    known = {"gamma1", "gamma2", "chi11", "chi22", "chi12", "nbar1", "nbar2"}
    unknown = set(obj) - known
    if unknown:
        raise ValueError(f"unknown parameter keys: {sorted(unknown)}")
    # a bare "gamma" would be ambiguous; both rates are always explicit
    return CavityParams(**{k: float(v) for k, v in obj.items()})


def parse_scenario(doc: dict) -> Scenario:
    """Build a validated Scenario from its JSON document form."""
    if not isinstance(doc, dict):
        raise ValueError(f"scenario must be a JSON object, got {type(doc).__name__}")
    known = {"initial", "params", "t_max", "n_points", "engine", "outputs", "fock_dim", "step"}
    unknown = set(doc) - known
    if unknown:
        raise ValueError(f"unknown scenario keys: {sorted(unknown)}")
    if "initial" not in doc:
        raise ValueError("scenario needs an 'initial' object")
    kwargs = {"initial": parse_initial(doc["initial"])}
    if "params" in doc:
        kwargs["params"] = _parse_params(doc["params"])
    if "t_max" in doc:
        kwargs["t_max"] = float(doc["t_max"])
    if "n_points" in doc:
        kwargs["n_points"] = int(doc["n_points"])
    if "engine" in doc:
        kwargs["engine"] = str(doc["engine"])
    if "outputs" in doc:
        outs = doc["outputs"]
        if not isinstance(outs, (list, tuple)):
            raise ValueError("outputs must be a list of column-set names")
        kwargs["outputs"] = tuple(str(o) for o in outs)
    if "fock_dim" in doc:
        kwargs["fock_dim"] = int(doc["fock_dim"])
    if doc.get("step") is not None:
        kwargs["step"] = float(doc["step"])
    return Scenario(**kwargs)


def load_scenario(path: str) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path} is not valid JSON: {exc}") from exc
    return parse_scenario(doc)


# ---------------------------------------------------------------------------
# CSV emission. 12 significant digits, RFC-4180 dialect.


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


def _writer(stream: TextIO) -> csv.writer:
    return csv.writer(stream)


def _measure_row(rho, wanted: Sequence[str]) -> list:
    cells = []
    c = n = None
    for name in wanted:
        if name == "concurrence":
            c = measures.concurrence(rho) if c is None else c
            cells.append(_fmt(c))
        elif name == "negativity":
            n = measures.negativity(rho) if n is None else n
            cells.append(_fmt(n))
        elif name == "eof":
            c = measures.concurrence(rho) if c is None else c
            cells.append(_fmt(measures.eof(c)))
        elif name == "log_negativity":
            n = measures.negativity(rho) if n is None else n
            cells.append(_fmt(measures.log_negativity(n)))
        elif name == "matrix_elements":
            m = rho.matrix
            for i in range(4):
                for j in range(4):
                    cells.append(_fmt(m[i, j].real))
                    cells.append(_fmt(m[i, j].imag))
    return cells


def _output_header(wanted: Sequence[str]) -> list:
    head = []
    for name in wanted:
        if name == "matrix_elements":
            head.extend(_MATRIX_COLUMNS)
        else:
            head.append(name)
    return head


def run_simulate(scenario: Scenario, stream: TextIO) -> None:
    """Evolve the scenario and stream one CSV row per grid time."""
    traj = trajectory(scenario.initial, scenario.params, scenario.t_max,
                      scenario.n_points, scenario.engine, scenario.fock_dim,
                      scenario.step)
    w = _writer(stream)
    w.writerow(["t"] + _output_header(scenario.outputs))
    for t, rho in zip(traj.times, traj.states):
        w.writerow([_fmt(t)] + _measure_row(rho, scenario.outputs))


# ---------------------------------------------------------------------------
# Figure reproduction.

_FIG_GRID = np.linspace(0.0, 1.0, 401)
_FIG_GAMMA = 4.0
_FIG_CHI12 = 20.0


def _measured_curve(initial, params: CavityParams, measure_fn) -> np.ndarray:
    rho0 = initial_density(initial)
    return np.array([measure_fn(propagate(rho0, params, float(t))) for t in _FIG_GRID])


def run_figure(fig_id: str, p_values: Optional[Sequence[float]] = None,
               stream: TextIO = sys.stdout) -> None:
    """Reproduce the data behind one of the four bundled figures as CSV.

    fig1/fig2: concurrence/negativity of the Bell and Bell-like families,
    columns (t, curve_a..curve_e). Curves a, b are the damped Bell pairs,
    c the coupled Bell-like state, d the uncoupled one, e the envelope.
    fig3/fig4: the Werner counterparts, one block per mixing weight p with
    a leading p column. The negativity envelope of the Werner family has
    no closed form here, so fig4's curve_e interpolates the numeric
    envelope of curve_c.
    """
    if fig_id not in _FIGURES:
        raise ValueError(f"unknown figure {fig_id!r}, expected one of {_FIGURES}")
    w = _writer(stream)
    gamma = _FIG_GAMMA
    coupled = CavityParams(gamma1=gamma, gamma2=gamma, chi11=0.0, chi22=0.0, chi12=_FIG_CHI12)
    uncoupled = dataclasses.replace(coupled, chi12=0.0)

    if fig_id in ("fig1", "fig2"):
        if p_values:
            raise ValueError(f"{fig_id} does not take mixing weights")
        want_c = fig_id == "fig1"
        measure_fn = measures.concurrence if want_c else measures.negativity
        curve_a = _measured_curve(BellPsi(+1), uncoupled, measure_fn)
        curve_b = _measured_curve(BellPhi(+1), uncoupled, measure_fn)
        curve_c = _measured_curve(BellLike(), coupled, measure_fn)
        curve_d = _measured_curve(BellLike(), uncoupled, measure_fn)
        if want_c:
            curve_e = analytics.concurrence_envelope(gamma, _FIG_GRID)
        else:
            curve_e = analytics.negativity_envelope(gamma, _FIG_GRID)
        w.writerow(["t", "curve_a", "curve_b", "curve_c", "curve_d", "curve_e"])
        for k, t in enumerate(_FIG_GRID):
            w.writerow([_fmt(t), _fmt(curve_a[k]), _fmt(curve_b[k]), _fmt(curve_c[k]),
                        _fmt(curve_d[k]), _fmt(curve_e[k])])
        return

    weights = tuple(p_values) if p_values else _DEFAULT_PANEL_WEIGHTS
    for p in weights:
        if not (0.0 <= p <= 1.0):
            raise ValueError(f"mixing weight p must lie in [0, 1], got {p}")
    want_c = fig_id == "fig3"
    measure_fn = measures.concurrence if want_c else measures.negativity
    w.writerow(["p", "t", "curve_a", "curve_b", "curve_c", "curve_d", "curve_e"])
    for p in weights:
        curve_a = _measured_curve(WernerPsi(p, +1), uncoupled, measure_fn)
        curve_b = _measured_curve(WernerPhi(p, +1), uncoupled, measure_fn)
        curve_c = _measured_curve(WernerLike(p), coupled, measure_fn)
        curve_d = _measured_curve(WernerLike(p), uncoupled, measure_fn)
        if want_c:
            curve_e = analytics.werner_concurrence_envelope(gamma, p, _FIG_GRID)
        else:
            peaks = analytics.numeric_envelope(list(zip(_FIG_GRID, curve_c)))
            curve_e = np.interp(_FIG_GRID, [q.t for q in peaks], [q.value for q in peaks])
        for k, t in enumerate(_FIG_GRID):
            w.writerow([_fmt(p), _fmt(t), _fmt(curve_a[k]), _fmt(curve_b[k]),
                        _fmt(curve_c[k]), _fmt(curve_d[k]), _fmt(curve_e[k])])


# ---------------------------------------------------------------------------
# Parameter sweeps.


def _override(base: Scenario, vary: str, value: float) -> Scenario:
    if vary == "gamma":
        params = dataclasses.replace(base.params, gamma1=value, gamma2=value)
        return dataclasses.replace(base, params=params)
    if vary == "chi12":
        params = dataclasses.replace(base.params, chi12=value)
        return dataclasses.replace(base, params=params)
    if vary == "p":
        if not isinstance(base.initial, (WernerPsi, WernerPhi, WernerLike)):
            raise ValueError(
                f"cannot sweep p: initial family {initial_label(base.initial)} has no mixing weight")
        return dataclasses.replace(base, initial=dataclasses.replace(base.initial, p=value))
    raise ValueError(f"unknown sweep parameter {vary!r}, expected one of {_SWEEPABLE}")


def run_sweep(base: Scenario, vary: str, values: Sequence[float], stream: TextIO) -> None:
    """Rerun the base scenario once per value, emitting long-format CSV.

    An empty value list yields just the header row. All overrides are
    validated before the first byte is written.
    """
    if vary not in _SWEEPABLE:
        raise ValueError(f"unknown sweep parameter {vary!r}, expected one of {_SWEEPABLE}")
    scenarios = [(float(v), _override(base, vary, float(v))) for v in values]
    w = _writer(stream)
    w.writerow([vary, "t"] + _output_header(base.outputs))
    for value, scenario in scenarios:
        traj = trajectory(scenario.initial, scenario.params, scenario.t_max,
                          scenario.n_points, scenario.engine, scenario.fock_dim,
                          scenario.step)
        for t, rho in zip(traj.times, traj.states):
            w.writerow([_fmt(value), _fmt(t)] + _measure_row(rho, scenario.outputs))


# ---------------------------------------------------------------------------
# Verification.


def run_verify(level: str, as_json: bool, stream: TextIO) -> int:
    """Run the self-check battery; return the process exit code."""
    results = verify.run_checks(level)
    ok = all(r.passed for r in results)
    if as_json:
        doc = {
            "level": level,
            "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
            "passed": sum(r.passed for r in results),
            "failed": sum(not r.passed for r in results),
            "ok": ok,
        }
        json.dump(doc, stream, indent=2)
        stream.write("\n")
    else:
        for r in results:
            stream.write(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}\n")
        stream.write(f"{'ok' if ok else 'FAILED'}: {sum(r.passed for r in results)}/{len(results)} checks passed\n")
    return 0 if ok else 2


# ---------------------------------------------------------------------------
# Argument handling.


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad usage; this tool reserves 2 for
    # verification failures, so remap usage errors to 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kerrdeco",
                     description="Two damped Kerr-coupled cavity qubits: simulate, reproduce figures, sweep, verify.")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="evolve a JSON scenario and emit CSV")
    sim.add_argument("--scenario", required=True, metavar="FILE", help="scenario JSON file")
    sim.add_argument("--out", metavar="FILE", help="output CSV path (default: stdout)")

    fig = sub.add_parser("figure", help="emit the data behind one bundled figure")
    fig.add_argument("figure_id", nargs="?", choices=_FIGURES, help="figure name")
    fig.add_argument("--figure", dest="figure_flag", choices=_FIGURES, help="figure name (flag form)")
    fig.add_argument("--p", metavar="LIST", help="comma-separated mixing weights for fig3/fig4")
    fig.add_argument("--out", metavar="FILE", help="output CSV path (default: stdout)")

    swp = sub.add_parser("sweep", help="rerun a scenario over a list of parameter values")
    swp.add_argument("--scenario", required=True, metavar="FILE", help="base scenario JSON file")
    swp.add_argument("--sweep", required=True, choices=_SWEEPABLE, metavar="PARAM",
                     help="which parameter to vary: gamma, chi12 or p")
    swp.add_argument("--values", required=True, metavar="LIST", help="comma-separated values")
    swp.add_argument("--out", metavar="FILE", help="output CSV path (default: stdout)")

    ver = sub.add_parser("verify", help="run the self-check battery")
    ver.add_argument("level", nargs="?", choices=("fast", "full"), help="check depth")
    ver.add_argument("--verify", dest="level_flag", choices=("fast", "full"),
                     help="check depth (flag form)")
    ver.add_argument("--json", action="store_true", help="emit a JSON verdict")
    ver.add_argument("--out", metavar="FILE", help="output path (default: stdout)")
    return parser


def _parse_values(text: str) -> list:
    items = [s.strip() for s in text.split(",") if s.strip()]
    try:
        return [float(s) for s in items]
    except ValueError as exc:
        raise ValueError(f"cannot parse values list {text!r}: {exc}") from exc


def _dispatch(args) -> int:
    if args.command == "simulate":
        scenario = load_scenario(args.scenario)
        with _open_out(args.out) as stream:
            run_simulate(scenario, stream)
        return 0
    if args.command == "figure":
        fig_id = args.figure_flag or args.figure_id
        if fig_id is None:
            raise ValueError("figure needs an id: positional or --figure")
        p_values = _parse_values(args.p) if args.p else None
        with _open_out(args.out) as stream:
            run_figure(fig_id, p_values, stream)
        return 0
    if args.command == "sweep":
        scenario = load_scenario(args.scenario)
        values = _parse_values(args.values)
        with _open_out(args.out) as stream:
            run_sweep(scenario, args.sweep, values, stream)
        return 0
    if args.command == "verify":
        level = args.level_flag or args.level or "fast"
        with _open_out(args.out) as stream:
            return run_verify(level, args.json, stream)
    raise ValueError(f"unknown command {args.command!r}")


class _open_out:
    """Context manager: open a path with CSV-safe newlines, or pass stdout through."""

    def __init__(self, path: Optional[str]):
        self.path = path
        self.fh = None

    def __enter__(self) -> TextIO:
        if self.path is None:
            return sys.stdout
        self.fh = open(self.path, "w", encoding="utf-8", newline="")
        return self.fh

    def __exit__(self, *exc):
        if self.fh is not None:
            self.fh.close()
        return False


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _dispatch(args)
    except _UsageError as exc:
        print(f"kerrdeco: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"kerrdeco: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
