"""Command-line surface: scenario files in, reports and tables out.

Scenario files are JSON.  Rationals are written as "p/q" strings end to end
(never floats), priors are row-major mass vectors over the state grid with
the last axis fastest, and every report echoes the state order it assumed.
Reports are JSON documents on stdout; tabular results (trajectories, sweep
summaries, tradeoff curves) also ship as tab-separated tables via --table.

Exit status: 0 on success, 1 on domain errors (including malformed scenario
content, reported with the offending field named), 2 on usage errors.

Environment overrides, mirroring the flags: BAYESPOL_SEED, BAYESPOL_TRIALS,
BAYESPOL_DENOMINATOR_BOUND, BAYESPOL_ORDER, BAYESPOL_MODE,
BAYESPOL_UPPER_SET_CAP.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import orders
from .actions import UtilityFamilyKind, tradeoff_curve
from .bayes import LikelihoodFn, Signal, identified_set, simulate, update
from .classifier import classify
from .construct import build_polarizing_priors
from .core import Belief, StateSpace, StateSubset, frac
from .orders import StrongCwVerdict, UpperFamilyKind, compare
from .polarization import Mode, PolarizationReport, limit, one_shot
from .verifier import SweepConfig, sweep

ENV_PREFIX = "BAYESPOL_"

_ORDER_BY_FLAG = {
    "st": UpperFamilyKind.UPPER_SET,
    "uo": UpperFamilyKind.UPPER_ORTHANT,
    "cw": UpperFamilyKind.UPPER_PROJECTION,
}
_MODE_BY_FLAG = {"oneshot": Mode.ONE_SHOT, "limit": Mode.LIMIT}


class ScenarioError(ValueError):
    """Malformed scenario content; the message names the offending field."""


# ---------------------------------------------------------------------------
# Scenario parsing and serialization
# ---------------------------------------------------------------------------


@dataclass
class Scenario:
    space: StateSpace
    name: Optional[str] = None
    seed: Optional[int] = None
    prior_low: Optional[Belief] = None
    prior_high: Optional[Belief] = None
    likelihood: Optional[LikelihoodFn] = None
    signal: Optional[Signal] = None
    identified: Optional[StateSubset] = None
    truth: Optional[tuple[int, ...]] = None
    utility: Optional[tuple[Fraction, ...]] = None
    utility_family: Optional[UtilityFamilyKind] = None


def _parse_fraction(raw, field: str) -> Fraction:
    if isinstance(raw, float):
        raise ScenarioError(f"field '{field}': floats are not accepted, write 'p/q'")
    try:
        return frac(raw)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ScenarioError(f"field '{field}': bad rational {raw!r}") from exc


def _parse_mass_vector(raw, field: str, space: StateSpace) -> list[Fraction]:
    if not isinstance(raw, list):
        raise ScenarioError(f"field '{field}': expected a list of 'p/q' strings")
    if len(raw) != space.size:
        raise ScenarioError(
            f"field '{field}': expected {space.size} entries (row-major, last axis fastest), got {len(raw)}"
        )
    return [_parse_fraction(v, f"{field}[{i}]") for i, v in enumerate(raw)]


def _parse_states(raw, field: str, space: StateSpace) -> StateSubset:
    if not isinstance(raw, list) or not raw:
        raise ScenarioError(f"field '{field}': expected a nonempty list of index vectors")
    states = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, list) or len(entry) != space.ndim:
            raise ScenarioError(
                f"field '{field}[{i}]': expected an index vector of length {space.ndim}"
            )
        states.append(tuple(int(v) for v in entry))
    try:
        return StateSubset.from_states(space, states)
    except ValueError as exc:
        raise ScenarioError(f"field '{field}': {exc}") from exc


def parse_scenario(doc: dict) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError("scenario root must be an object")
    if "dims" not in doc:
        raise ScenarioError("field 'dims' is required")
    dims = doc["dims"]
    if not isinstance(dims, list) or not dims:
        raise ScenarioError("field 'dims': expected a list of axes")
    axes = []
    for k, axis in enumerate(dims):
        if not isinstance(axis, list):
            raise ScenarioError(f"field 'dims[{k}]': expected a list of rationals")
        axes.append([_parse_fraction(v, f"dims[{k}]") for v in axis])
    try:
        space = StateSpace.make(axes)
    except ValueError as exc:
        raise ScenarioError(f"field 'dims': {exc}") from exc

    sc = Scenario(space=space, name=doc.get("name"), seed=doc.get("seed"))
    if sc.seed is not None and not isinstance(sc.seed, int):
        raise ScenarioError("field 'seed': expected an integer")

    for field, attr in (("prior_low", "prior_low"), ("prior_high", "prior_high")):
        if field in doc:
            masses = _parse_mass_vector(doc[field], field, space)
            try:
                setattr(sc, attr, Belief.from_fractions(space, masses))
            except ValueError as exc:
                raise ScenarioError(f"field '{field}': {exc}") from exc
    if "likelihood" in doc:
        values = _parse_mass_vector(doc["likelihood"], "likelihood", space)
        try:
            sc.likelihood = LikelihoodFn.from_fractions(space, values)
        except ValueError as exc:
            raise ScenarioError(f"field 'likelihood': {exc}") from exc
    if "signal" in doc:
        raw = doc["signal"]
        if (
            not isinstance(raw, dict)
            or not isinstance(raw.get("realizations"), list)
            or not isinstance(raw.get("table"), dict)
        ):
            raise ScenarioError(
                "field 'signal': expected {'realizations': [...], 'table': {label: [...]}}"
            )
        labels = [str(x) for x in raw["realizations"]]
        table = []
        for label in labels:
            if label not in raw["table"]:
                raise ScenarioError(f"field 'signal.table': missing realization '{label}'")
            values = _parse_mass_vector(
                raw["table"][label], f"signal.table['{label}']", space
            )
            try:
                table.append(LikelihoodFn.from_fractions(space, values))
            except ValueError as exc:
                raise ScenarioError(f"field 'signal.table['{label}']': {exc}") from exc
        try:
            sc.signal = Signal(space, tuple(labels), tuple(table))
        except ValueError as exc:
            raise ScenarioError(f"field 'signal': {exc}") from exc
    if "identified_set" in doc:
        sc.identified = _parse_states(doc["identified_set"], "identified_set", space)
    if "truth" in doc:
        raw = doc["truth"]
        if not isinstance(raw, list) or len(raw) != space.ndim:
            raise ScenarioError(f"field 'truth': expected an index vector of length {space.ndim}")
        sc.truth = tuple(int(v) for v in raw)
        space.flat(sc.truth)  # bounds check
    if "utility" in doc:
        values = _parse_mass_vector(doc["utility"], "utility", space)
        sc.utility = tuple(values)
        family = doc.get("utility_family", "increasing")
        try:
            sc.utility_family = UtilityFamilyKind(family)
        except ValueError as exc:
            raise ScenarioError(f"field 'utility_family': unknown family {family!r}") from exc
    return sc


def scenario_to_doc(sc: Scenario) -> dict:
    """Canonical JSON form; parse(serialize(parse(x))) == parse(x)."""
    doc: dict = {
        "dims": [[str(v) for v in axis] for axis in sc.space.axes],
    }
    if sc.name is not None:
        doc["name"] = sc.name
    if sc.seed is not None:
        doc["seed"] = sc.seed
    if sc.prior_low is not None:
        doc["prior_low"] = [str(m) for m in sc.prior_low.masses()]
    if sc.prior_high is not None:
        doc["prior_high"] = [str(m) for m in sc.prior_high.masses()]
    if sc.likelihood is not None:
        doc["likelihood"] = [str(v) for v in sc.likelihood.values()]
    if sc.signal is not None:
        doc["signal"] = {
            "realizations": list(sc.signal.realizations),
            "table": {
                label: [str(v) for v in ell.values()]
                for label, ell in zip(sc.signal.realizations, sc.signal.table)
            },
        }
    if sc.identified is not None:
        doc["identified_set"] = [list(s) for s in sc.identified.states()]
    if sc.truth is not None:
        doc["truth"] = list(sc.truth)
    if sc.utility is not None:
        doc["utility"] = [str(v) for v in sc.utility]
        doc["utility_family"] = sc.utility_family.value
    return doc


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario is not valid JSON: {exc}") from exc
    return parse_scenario(doc)


# ---------------------------------------------------------------------------
# Report assembly
# ---------------------------------------------------------------------------


def _states_echo(space: StateSpace) -> list[list[int]]:
    return [list(s) for s in space.states]


def _verdict_doc(v) -> dict:
    if isinstance(v, StrongCwVerdict):
        return {
            "strong_coordinatewise": v.holds,
            "failed_axis": v.axis,
            "failed_cut": v.cut,
        }
    doc = {"relation": v.relation.value}
    if v.witness is not None:
        doc["witness"] = [list(s) for s in v.witness.states()]
    if v.opposite_witness is not None:
        doc["opposite_witness"] = [list(s) for s in v.opposite_witness.states()]
    return doc


def _polarization_doc(report: PolarizationReport) -> dict:
    return {
        "order": report.kind.value,
        "mode": report.mode.value,
        "verdict": report.verdict,
        "strictness_convention": report.strictness.value,
        "strong_middle": report.strong_middle,
        "checks": report.checks,
        "low_drop": _verdict_doc(report.low_drop),
        "prior_gap": _verdict_doc(report.prior_gap),
        "high_rise": _verdict_doc(report.high_rise),
        "posterior_low": [str(m) for m in report.posterior_low.masses()],
        "posterior_high": [str(m) for m in report.posterior_high.masses()],
        "directions": [
            {"state": list(s), "low": dl, "high": dh}
            for s, dl, dh in report.directions.rows()
        ],
    }


def _require(sc: Scenario, attr: str, field: str, command: str):
    value = getattr(sc, attr)
    if value is None:
        raise ScenarioError(f"field '{field}' is required for '{command}'")
    return value


# ---------------------------------------------------------------------------
# Subcommand handlers; each returns (report dict, table rows or None)
# ---------------------------------------------------------------------------

Table = tuple[list[str], list[list[str]]]


def _cmd_update(sc: Scenario, args) -> tuple[dict, Optional[Table]]:
    ell = _require(sc, "likelihood", "likelihood", "update")
    report: dict = {}
    for field, prior in (("prior_low", sc.prior_low), ("prior_high", sc.prior_high)):
        if prior is not None:
            report[f"posterior_{field.removeprefix('prior_')}"] = [
                str(m) for m in update(prior, ell).masses()
            ]
    if not report:
        raise ScenarioError("field 'prior_low' is required for 'update'")
    return report, None


def _cmd_compare(sc: Scenario, args) -> tuple[dict, Optional[Table]]:
    low = _require(sc, "prior_low", "prior_low", "compare")
    high = _require(sc, "prior_high", "prior_high", "compare")
    kind = _ORDER_BY_FLAG[args.order]
    verdict = compare(low, high, kind, cap=args.upper_set_cap)
    return {"order": args.order, **_verdict_doc(verdict)}, None


def _cmd_classify(sc: Scenario, args) -> tuple[dict, Optional[Table]]:
    ident = _require(sc, "identified", "identified_set", "classify")
    rep = classify(sc.space, ident)
    return {
        "identified_set": [list(s) for s in ident.states()],
        "spanning": rep.spanning,
        "complement_spanning": rep.complement_spanning,
        "biased_down": rep.biased_down,
        "biased_up": rep.biased_up,
        "balanced": rep.balanced,
        "compensatory": rep.compensatory,
        "can_strongly_polarize": rep.can_strongly_polarize,
    }, None


def _cmd_construct(sc: Scenario, args) -> tuple[dict, Optional[Table]]:
    ident = _require(sc, "identified", "identified_set", "construct")
    result = build_polarizing_priors(sc.space, ident)
    return {
        "identified_set": [list(s) for s in ident.states()],
        "prior_low": [str(m) for m in result.prior_low.masses()],
        "prior_high": [str(m) for m in result.prior_high.masses()],
        "epsilon": str(result.epsilon),
        "delta": str(result.delta),
        "certificate": _polarization_doc(result.certificate),
    }, None


def _cmd_polarize(sc: Scenario, args) -> tuple[dict, Optional[Table]]:
    low = _require(sc, "prior_low", "prior_low", "polarize")
    high = _require(sc, "prior_high", "prior_high", "polarize")
    kind = _ORDER_BY_FLAG[args.order]
    if args.mode == "oneshot":
        ell = _require(sc, "likelihood", "likelihood", "polarize --mode oneshot")
        report = one_shot(kind, low, high, ell)
    else:
        ident = _require(sc, "identified", "identified_set", "polarize --mode limit")
        report = limit(kind, low, high, ident)
    return _polarization_doc(report), None


def _cmd_simulate(sc: Scenario, args) -> tuple[dict, Optional[Table]]:
    prior = _require(sc, "prior_low", "prior_low", "simulate")
    sig = sc.signal
    if sig is None:
        ident = _require(sc, "identified", "signal (or identified_set)", "simulate")
        sig = Signal.reveal_set(sc.space, ident)
    truth = _require(sc, "truth", "truth", "simulate")
    seed = args.seed if args.seed is not None else (sc.seed or 0)
    records = simulate(prior, sig, truth, args.horizon, seed)
    ident = identified_set(sig, truth)
    header = ["t", "realization", "tv_to_limit"] + [
        f"mass{list(s)}" for s in sc.space.states
    ]
    rows = [
        [str(r.t), r.realization or "", str(r.tv_to_limit)]
        + [str(m) for m in r.posterior.masses()]
        for r in records
    ]
    report = {
        "seed": seed,
        "horizon": args.horizon,
        "truth": list(truth),
        "identified_set": [list(s) for s in ident.states()],
        "final_tv_to_limit": str(records[-1].tv_to_limit),
        "table": rows,
    }
    return report, (header, rows)


def _cmd_sweep(sc_unused, args) -> tuple[dict, Optional[Table]]:
    dims = tuple(int(d) for d in args.dims.split("x"))
    config = SweepConfig(
        kind=_ORDER_BY_FLAG[args.order],
        mode=_MODE_BY_FLAG[args.mode],
        dims=dims,
        trials=args.trials,
        seed=args.seed if args.seed is not None else 0,
        denominator_bound=args.denominator_bound,
    )
    report = sweep(config)
    header = ["order", "mode", "dims", "trials", "counterexamples", "elapsed_s"]
    row = [
        args.order,
        args.mode,
        args.dims,
        str(report.trials_run),
        str(len(report.counterexamples)),
        f"{report.elapsed:.3f}",
    ]
    doc = {
        "order": args.order,
        "mode": args.mode,
        "dims": list(dims),
        "seed": config.seed,
        "trials_run": report.trials_run,
        "exhaustive": config.denominator_bound is not None,
        "counterexamples_found": len(report.counterexamples),
        "counterexamples": [
            {
                "prior_low": [str(m) for m in hit.prior_low.masses()],
                "prior_high": [str(m) for m in hit.prior_high.masses()],
                "likelihood": (
                    [str(v) for v in hit.likelihood.values()]
                    if hit.likelihood is not None
                    else None
                ),
                "identified_set": (
                    [list(s) for s in hit.identified_set.states()]
                    if hit.identified_set is not None
                    else None
                ),
            }
            for hit in report.counterexamples[:100]
        ],
        "elapsed_s": report.elapsed,
        "table": [row],
    }
    return doc, (header, [row])


def _cmd_tradeoff(sc_unused, args) -> tuple[dict, Optional[Table]]:
    if args.deltas:
        deltas = [frac(d) for d in args.deltas.split(",")]
    else:
        n = args.grid
        deltas = [Fraction(k, n + 1) for k in range(1, n + 1)]
    rows = tradeoff_curve(deltas)
    header = ["delta", "magnitude", "prob_identified"]
    table = [
        [str(r.delta), str(r.magnitude), str(r.prob_identified)] for r in rows
    ]
    doc = {
        "rows": [
            {
                "delta": str(r.delta),
                "magnitude": str(r.magnitude),
                "prob_identified": str(r.prob_identified),
                "posterior_low": [str(m) for m in r.posterior_low.masses()],
                "posterior_high": [str(m) for m in r.posterior_high.masses()],
            }
            for r in rows
        ],
        "table": table,
    }
    return doc, (header, table)


_HANDLERS = {
    "update": _cmd_update,
    "compare": _cmd_compare,
    "classify": _cmd_classify,
    "construct": _cmd_construct,
    "polarize": _cmd_polarize,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "tradeoff": _cmd_tradeoff,
}

_NEEDS_SCENARIO = {"update", "compare", "classify", "construct", "polarize", "simulate"}


def _env(name: str, cast, fallback):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None:
        return fallback
    try:
        return cast(raw)
    except ValueError:
        return fallback


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bayespol",
        description="Exact-arithmetic belief polarization toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scenario: bool):
        if scenario:
            p.add_argument("scenario", help="path to a JSON scenario file")
        p.add_argument(
            "--order",
            choices=("st", "uo", "cw"),
            default=_env("ORDER", str, "cw"),
            help="stochastic order: upper sets, upper orthants, or coordinatewise",
        )
        p.add_argument(
            "--mode",
            choices=("oneshot", "limit"),
            default=_env("MODE", str, "limit"),
        )
        p.add_argument("--seed", type=int, default=_env("SEED", int, None))
        p.add_argument(
            "--trials", type=int, default=_env("TRIALS", int, 10_000)
        )
        p.add_argument(
            "--denominator-bound",
            type=int,
            default=_env("DENOMINATOR_BOUND", int, None),
            help="exhaustive prior grid with this common denominator",
        )
        p.add_argument(
            "--upper-set-cap",
            type=int,
            default=_env("UPPER_SET_CAP", int, orders.DEFAULT_UPPER_SET_CAP),
        )
        p.add_argument("--table", help="also write the tabular output to this TSV file")
        p.add_argument("--out", help="write the JSON report here instead of stdout")

    for name in ("update", "compare", "classify", "construct", "polarize"):
        common(sub.add_parser(name), scenario=True)
    sim = sub.add_parser("simulate")
    common(sim, scenario=True)
    sim.add_argument("--horizon", type=int, default=100)
    sw = sub.add_parser("sweep")
    common(sw, scenario=False)
    sw.add_argument("--dims", default="2x2", help="state space shape, e.g. 3x3 or 2x2x2")
    tr = sub.add_parser("tradeoff")
    common(tr, scenario=False)
    tr.add_argument("--deltas", help="comma-separated rationals, e.g. 1/10,1/4")
    tr.add_argument("--grid", type=int, default=9, help="use deltas k/(grid+1)")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        scenario = None
        if args.command in _NEEDS_SCENARIO:
            scenario = load_scenario(args.scenario)
        report, table = _HANDLERS[args.command](scenario, args)
        doc = {"command": args.command}
        if scenario is not None:
            if scenario.name:
                doc["scenario"] = scenario.name
            doc["states"] = _states_echo(scenario.space)
        doc.update(report)
        rendered = json.dumps(doc, indent=2)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(rendered + "\n")
        else:
            print(rendered)
        if table is not None and args.table:
            header, rows = table
            with open(args.table, "w", encoding="utf-8") as fh:
                fh.write("\t".join(header) + "\n")
                for row in rows:
                    fh.write("\t".join(row) + "\n")
        return 0
    except (ValueError, RuntimeError) as exc:
        print(json.dumps({"command": args.command, "error": str(exc)}), file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
