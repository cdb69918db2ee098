"""Command-line experiment harness.

Subcommands: ``simpson3`` and ``healthcare10`` run the built-in experiments,
``run`` applies the same pipeline to a user model file, ``validate`` checks a
model file and cross-checks the engine against the enumeration oracle, and
``chart`` renders saved JSON reports as an SVG.

Exit codes: 0 success, 1 engine/oracle equivalence failure, 2 invalid
configuration or model, 3 conditioning on a zero-mass event.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import catalog
from .analysis import UndefinedConditionalError
from .chart import render_chart
from .circuit import compile_model, format_circuit
from .engine import NoiseSpec, run_exact, run_sampled
from .experiments import (
    DEFAULT_SEED,
    Report,
    RunConfig,
    causal_group,
    format_report_table,
    healthcare10_groups,
    observational_group,
    report_csv_text,
    report_json_text,
    run_experiment,
    simpson3_groups,
    stratified_group,
)
from .model import Intervention, ModelError, apply_do, load_model
from .oracle import enumerate_joint

EQUIVALENCE_TOLERANCE = 1e-10

EXIT_OK = 0
EXIT_EQUIVALENCE = 1
EXIT_USER_ERROR = 2
EXIT_UNDEFINED_CONDITIONAL = 3


def _add_backend_flags(p: argparse.ArgumentParser, default_trials: int) -> None:
    p.add_argument("--backend", choices=("exact", "sampled"), default="exact")
    p.add_argument("--shots", type=int, default=15000, help="shots per circuit per trial")
    p.add_argument("--trials", type=int, default=default_trials, help="independent trials")
    p.add_argument("--seed", type=int, default=None,
                   help=f"run seed (default: $QDO_SEED or {DEFAULT_SEED})")
    p.add_argument("--noise", type=float, default=None, metavar="P",
                   help="per-gate per-qubit depolarizing probability (sampled only)")
    p.add_argument("--json", dest="json_path", metavar="PATH", help="write the JSON report")
    p.add_argument("--csv", dest="csv_path", metavar="PATH", help="write the CSV report")
    p.add_argument("--svg", dest="svg_path", metavar="PATH", help="write the bar chart")
    p.add_argument("--print-circuit", action="store_true", help="print compiled circuits")
    p.add_argument("--expanded", action="store_true",
                   help="expand control-on-zero gates in circuit output")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qdo",
        description="Causal models as quantum circuits: interventions by circuit surgery.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s3 = sub.add_parser("simpson3", help="run the 3-qubit sign-reversal experiment")
    _add_backend_flags(s3, default_trials=30)

    h10 = sub.add_parser("healthcare10", help="run the 10-qubit confounding-bias experiment")
    _add_backend_flags(h10, default_trials=10)
    h10.add_argument("--stratify", action="append", default=None, metavar="VAR",
                     help="stratifier (repeatable; default: Age and Region)")

    run = sub.add_parser("run", help="run the analysis pipeline on a model file")
    run.add_argument("model_path", metavar="MODEL.json")
    _add_backend_flags(run, default_trials=10)
    run.add_argument("--treatment", metavar="VAR")
    run.add_argument("--outcome", metavar="VAR")
    run.add_argument("--stratify", action="append", default=None, metavar="VAR")
    run.add_argument("--do", action="append", default=None, metavar="VAR=BIT",
                     help="intervene before analysis (repeatable)")
    run.add_argument("--effect", action="store_true",
                     help="report effect sizes (requires --treatment and --outcome)")

    val = sub.add_parser("validate", help="validate a model file and cross-check the engine")
    val.add_argument("model_path", metavar="MODEL.json")

    ch = sub.add_parser("chart", help="render saved JSON reports as an SVG bar chart")
    ch.add_argument("reports", nargs="+", metavar="REPORT.json")
    ch.add_argument("--svg", dest="svg_path", required=True, metavar="PATH")
    ch.add_argument("--reference", type=float, default=None,
                    help="draw a dashed horizontal line at this effect value")
    ch.add_argument("--title", default="")

    return p


def _resolve_seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("QDO_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ModelError(f"QDO_SEED must be an integer, got {env!r}") from None
    return DEFAULT_SEED


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    noise = None
    if args.noise is not None:
        if args.backend != "sampled":
            raise ModelError("--noise requires --backend sampled")
        noise = NoiseSpec(args.noise)
    try:
        return RunConfig(
            backend=args.backend,
            shots=args.shots,
            trials=args.trials,
            seed=_resolve_seed(args),
            noise=noise,
        )
    except ValueError as exc:
        raise ModelError(str(exc)) from exc


def _emit_report(report: Report, args: argparse.Namespace, reference: float | None = None,
                 bias_against: str | None = None, title: str = "") -> None:
    if args.print_circuit:
        for circ in report.circuits:
            sys.stdout.write(format_circuit(circ, expanded=args.expanded))
            sys.stdout.write("\n")
    sys.stdout.write(format_report_table(report, bias_against=bias_against))
    if args.json_path:
        Path(args.json_path).write_text(report_json_text(report), encoding="utf-8")
    if args.csv_path:
        Path(args.csv_path).write_text(report_csv_text(report), encoding="utf-8")
    if args.svg_path:
        svg = render_chart(report.groups, title=title, reference=reference)
        Path(args.svg_path).write_text(svg, encoding="utf-8")


def _cmd_simpson3(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    entry = catalog.simpson3()
    report = run_experiment(
        entry.model, entry.roles.treatment, entry.roles.outcome,
        simpson3_groups(entry.roles.stratifiers[0]), cfg,
    )
    _emit_report(report, args, title="3-qubit treatment effects")
    return EXIT_OK


def _cmd_healthcare10(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    entry = catalog.healthcare10()
    stratifiers = tuple(args.stratify) if args.stratify else entry.roles.stratifiers
    causal_label = "Causal Intervention (do)"
    report = run_experiment(
        entry.model, entry.roles.treatment, entry.roles.outcome,
        healthcare10_groups(stratifiers), cfg,
    )
    _emit_report(
        report, args,
        reference=report.group(causal_label).effect,
        bias_against=causal_label,
        title="10-qubit treatment effects",
    )
    return EXIT_OK


def _parse_do(specs: list[str] | None) -> list[Intervention]:
    out = []
    for spec in specs or []:
        name, sep, bit = spec.partition("=")
        if not sep or bit not in ("0", "1") or not name:
            raise ModelError(f"--do expects VAR=0 or VAR=1, got {spec!r}")
        out.append(Intervention(name, int(bit)))
    return out


def _cmd_run(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    model = load_model(args.model_path)
    for iv in _parse_do(args.do):
        model = apply_do(model, iv)

    if args.effect:
        if not args.treatment or not args.outcome:
            raise ModelError("--effect requires --treatment and --outcome")
        model.variable(args.treatment)
        model.variable(args.outcome)
        groups = [observational_group()]
        groups += [stratified_group(s) for s in (args.stratify or [])]
        groups.append(causal_group())
        report = run_experiment(model, args.treatment, args.outcome, groups, cfg)
        _emit_report(report, args, title=f"effects: {model.name}")
        return EXIT_OK

    # Distribution mode: report the (possibly post-intervention) distribution.
    circ = compile_model(model)
    if args.print_circuit:
        sys.stdout.write(format_circuit(circ, expanded=args.expanded))
        sys.stdout.write("\n")
    if cfg.backend == "exact":
        dist = run_exact(circ)
    else:
        dist = run_sampled(circ, cfg.shots, cfg.seed, cfg.noise)
    probs = dist.probabilities()
    qubits = model.qubit_map()
    idx = np.arange(probs.size)
    p_one = {
        name: float(probs[((idx >> q) & 1) == 1].sum()) for name, q in sorted(qubits.items())
    }
    sys.stdout.write(f"model: {model.name}\n")
    for iv in model.interventions:
        sys.stdout.write(f"do: {iv.variable}={iv.value}\n")
    for name, p in p_one.items():
        sys.stdout.write(f"P({name}=1) = {p:.6f}\n")
    if args.json_path:
        payload: dict = {"model": model.name, "backend": cfg.backend}
        if cfg.backend == "sampled":
            payload["shots"] = cfg.shots
            payload["seed"] = cfg.seed
            if cfg.noise is not None:
                payload["noise"] = cfg.noise.p_depol
        payload["interventions"] = [
            {"variable": iv.variable, "value": iv.value} for iv in model.interventions
        ]
        payload["p_one"] = p_one
        payload["probabilities"] = [float(p) for p in probs]
        Path(args.json_path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    model = load_model(args.model_path)
    expected = enumerate_joint(model)  # raises for oracle-unsupported models
    actual = run_exact(compile_model(model))
    deviation = np.abs(actual.values - expected.values)
    worst = int(np.argmax(deviation))
    max_dev = float(deviation[worst])
    sys.stdout.write(f"max |P_engine - P_oracle| = {max_dev:.3e}\n")
    if max_dev >= EQUIVALENCE_TOLERANCE:
        bits = format(worst, f"0{model.n_qubits}b")
        sys.stdout.write(
            f"equivalence FAILED at bitstring {bits} "
            f"(engine {actual.values[worst]:.12f}, oracle {expected.values[worst]:.12f})\n"
        )
        return EXIT_EQUIVALENCE
    sys.stdout.write("ok\n")
    return EXIT_OK


def _cmd_chart(args: argparse.Namespace) -> int:
    from .analysis import EffectReport

    groups = []
    for path in args.reports:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ModelError(f"cannot read report {path}: {exc}") from exc
        if not isinstance(data, dict) or "groups" not in data:
            raise ModelError(f"{path}: not a report file (missing 'groups')")
        for g in data["groups"]:
            ci = g.get("ci")
            groups.append(
                EffectReport(
                    label=g["label"],
                    effect=float(g["effect"]),
                    ci_low=float(ci[0]) if ci else None,
                    ci_high=float(ci[1]) if ci else None,
                )
            )
    svg = render_chart(groups, title=args.title, reference=args.reference)
    Path(args.svg_path).write_text(svg, encoding="utf-8")
    return EXIT_OK


_COMMANDS = {
    "simpson3": _cmd_simpson3,
    "healthcare10": _cmd_healthcare10,
    "run": _cmd_run,
    "validate": _cmd_validate,
    "chart": _cmd_chart,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except UndefinedConditionalError as exc:
        print(f"qdo: error: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED_CONDITIONAL
    except (ModelError, ValueError) as exc:
        print(f"qdo: error: {exc}", file=sys.stderr)
        return EXIT_USER_ERROR
    except OSError as exc:
        print(f"qdo: error: {exc}", file=sys.stderr)
        return EXIT_USER_ERROR


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
