"""Experiment orchestration: trials, group estimates, and report serialization.

A run evaluates a list of analysis groups against one model. The exact
backend produces point estimates; the sampled backend runs K independent
trials and aggregates per-trial estimates into 95% confidence intervals.

Seed derivation (documented contract): the run seed feeds a SeedSequence
whose spawned children, one per trial, each spawn three streams in the fixed
order (observational, do=1, do=0). Identical configurations therefore yield
identical reports, and trials could be executed in parallel without changing
any number.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .analysis import (
    EffectReport,
    Query,
    StratumEffect,
    aggregate_trials,
    cond_prob,
    observational_effect,
    stratified_effect,
)
from .circuit import Circuit, compile_model
from .engine import Distribution, NoiseSpec, run_exact, run_sampled
from .model import CausalModel, Intervention, ModelError, apply_do

DEFAULT_SEED = 1729


@dataclass(frozen=True)
class RunConfig:
    backend: str = "exact"
    shots: int = 15000
    trials: int = 1
    seed: int = DEFAULT_SEED
    noise: NoiseSpec | None = None

    def __post_init__(self) -> None:
        if self.backend not in ("exact", "sampled"):
            raise ValueError(f"backend must be 'exact' or 'sampled', got {self.backend!r}")
        if self.backend == "sampled" and self.shots < 1:
            raise ValueError(f"shots must be >= 1, got {self.shots}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.noise is not None and self.backend != "sampled":
            raise ValueError("noise requires the sampled backend")


@dataclass(frozen=True)
class Group:
    """One row of a report: what to estimate and under which label."""

    kind: str  # "observational" | "subgroup" | "stratified" | "causal"
    label: str
    stratifier: str | None = None
    stratum: int | None = None
    weighting: str = "prevalence"


def observational_group(label: str = "Observational, Overall") -> Group:
    return Group("observational", label)


def subgroup(stratifier: str, stratum: int, label: str | None = None) -> Group:
    return Group("subgroup", label or f"Observational, {stratifier}={stratum}",
                 stratifier=stratifier, stratum=stratum)


def stratified_group(stratifier: str, label: str | None = None, weighting: str = "prevalence") -> Group:
    return Group("stratified", label or f"Stratified by {stratifier}",
                 stratifier=stratifier, weighting=weighting)


def causal_group(label: str = "Causal, Overall (do)") -> Group:
    return Group("causal", label)


@dataclass(frozen=True)
class Report:
    model: str
    config: RunConfig
    groups: tuple[EffectReport, ...]
    circuits: tuple[Circuit, ...] = field(default=(), repr=False)

    def group(self, label: str) -> EffectReport:
        for g in self.groups:
            if g.label == label:
                return g
        raise KeyError(f"no group labeled {label!r}")


def _estimate(
    group: Group,
    dists: dict[str, Distribution],
    qubits: dict[str, int],
    treatment: str,
    outcome: str,
) -> tuple[float, tuple[StratumEffect, ...] | None]:
    if group.kind == "observational":
        return observational_effect(dists["obs"], qubits, treatment, outcome), None
    if group.kind == "subgroup":
        cond = ((group.stratifier, group.stratum),)
        p1 = cond_prob(dists["obs"], qubits, Query((outcome, 1), ((treatment, 1),) + cond))
        p0 = cond_prob(dists["obs"], qubits, Query((outcome, 1), ((treatment, 0),) + cond))
        return p1 - p0, None
    if group.kind == "stratified":
        return stratified_effect(
            dists["obs"], qubits, treatment, outcome, group.stratifier, group.weighting
        )
    if group.kind == "causal":
        p1 = cond_prob(dists["do1"], qubits, Query((outcome, 1)))
        p0 = cond_prob(dists["do0"], qubits, Query((outcome, 1)))
        return p1 - p0, None
    raise ValueError(f"unknown group kind {group.kind!r}")


def run_experiment(
    model: CausalModel,
    treatment: str,
    outcome: str,
    groups: Sequence[Group],
    cfg: RunConfig,
) -> Report:
    """Evaluate ``groups`` on one model under the configured backend."""
    if model.is_intervened(treatment):
        raise ModelError(f"treatment {treatment!r} is already intervened on")
    qubits = model.qubit_map()
    needs_do = any(g.kind == "causal" for g in groups)
    obs_circ = compile_model(model)
    circuits = [obs_circ]
    do1_circ = do0_circ = None
    if needs_do:
        do1_circ = compile_model(apply_do(model, Intervention(treatment, 1)))
        do0_circ = compile_model(apply_do(model, Intervention(treatment, 0)))
        circuits += [do1_circ, do0_circ]

    if cfg.backend == "exact":
        dists = {"obs": run_exact(obs_circ)}
        if needs_do:
            dists["do1"] = run_exact(do1_circ)
            dists["do0"] = run_exact(do0_circ)
        reports = []
        for g in groups:
            effect, strata = _estimate(g, dists, qubits, treatment, outcome)
            reports.append(EffectReport(g.label, effect, strata=strata))
        return Report(model.name, cfg, tuple(reports), tuple(circuits))

    root = np.random.SeedSequence(cfg.seed)
    per_group: list[list[float]] = [[] for _ in groups]
    per_strata: list[list[tuple[StratumEffect, ...]]] = [[] for _ in groups]
    for trial_ss in root.spawn(cfg.trials):
        obs_ss, do1_ss, do0_ss = trial_ss.spawn(3)
        dists = {"obs": run_sampled(obs_circ, cfg.shots, obs_ss, cfg.noise)}
        if needs_do:
            dists["do1"] = run_sampled(do1_circ, cfg.shots, do1_ss, cfg.noise)
            dists["do0"] = run_sampled(do0_circ, cfg.shots, do0_ss, cfg.noise)
        for i, g in enumerate(groups):
            effect, strata = _estimate(g, dists, qubits, treatment, outcome)
            per_group[i].append(effect)
            if strata is not None:
                per_strata[i].append(strata)

    reports = []
    for i, g in enumerate(groups):
        stats = aggregate_trials(per_group[i])
        reports.append(
            EffectReport(
                g.label,
                stats.mean,
                per_trial=tuple(per_group[i]),
                std_err=stats.std_err,
                ci_low=stats.ci_low,
                ci_high=stats.ci_high,
                n_trials=cfg.trials,
                shots_per_trial=cfg.shots,
                strata=_mean_strata(per_strata[i]),
            )
        )
    return Report(model.name, cfg, tuple(reports), tuple(circuits))


def _mean_strata(trials: list[tuple[StratumEffect, ...]]) -> tuple[StratumEffect, ...] | None:
    """Per-stratum mean weight and effect across trials."""
    if not trials:
        return None
    sums: dict[int, list[float]] = {}
    for strata in trials:
        for s in strata:
            acc = sums.setdefault(s.value, [0.0, 0.0, 0.0])
            acc[0] += s.weight
            acc[1] += s.effect
            acc[2] += 1.0
    return tuple(
        StratumEffect(value, w / k, e / k) for value, (w, e, k) in sorted(sums.items())
    )


def simpson3_groups(stratifier: str = "G") -> list[Group]:
    return [
        subgroup(stratifier, 0),
        subgroup(stratifier, 1),
        observational_group(),
        causal_group(),
    ]


def healthcare10_groups(stratifiers: Sequence[str] = ("Age", "Region")) -> list[Group]:
    groups = [observational_group()]
    groups += [stratified_group(s) for s in stratifiers]
    groups.append(causal_group("Causal Intervention (do)"))
    return groups


# --- serialization -----------------------------------------------------------


def report_to_dict(report: Report) -> dict:
    cfg = report.config
    out: dict = {"model": report.model, "backend": cfg.backend}
    if cfg.backend == "sampled":
        out["shots"] = cfg.shots
        out["trials"] = cfg.trials
        out["seed"] = cfg.seed
        if cfg.noise is not None:
            out["noise"] = cfg.noise.p_depol
    out["groups"] = []
    for g in report.groups:
        entry: dict = {"label": g.label, "effect": g.effect}
        if g.ci is not None:
            entry["ci"] = [g.ci_low, g.ci_high]
        if g.per_trial:
            entry["per_trial"] = list(g.per_trial)
        if g.strata is not None:
            entry["strata"] = [
                {"value": s.value, "weight": s.weight, "effect": s.effect} for s in g.strata
            ]
        out["groups"].append(entry)
    return out


def report_json_text(report: Report) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def report_csv_text(report: Report) -> str:
    lines = ["label,effect,ci_low,ci_high,n_trials"]
    for g in report.groups:
        ci_low = "" if g.ci_low is None else repr(g.ci_low)
        ci_high = "" if g.ci_high is None else repr(g.ci_high)
        n = "" if g.n_trials is None else str(g.n_trials)
        label = g.label.replace('"', '""')
        lines.append(f'"{label}",{g.effect!r},{ci_low},{ci_high},{n}')
    return "\n".join(lines) + "\n"


def format_report_table(report: Report, bias_against: str | None = None) -> str:
    """Fixed-width table; ``bias_against`` adds a bias column relative to that group."""
    ref = report.group(bias_against).effect if bias_against is not None else None
    rows = []
    for g in report.groups:
        ci = f"[{g.ci_low:+.3f}, {g.ci_high:+.3f}]" if g.ci is not None else "-"
        row = [g.label, f"{g.effect:+.3f}", ci]
        if ref is not None:
            row.append(f"{g.effect - ref:+.3f}")
        rows.append(row)
    headers = ["Analysis Group", "Effect Size (dP)", "95% CI"]
    if ref is not None:
        headers.append("Bias")
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(headers)]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)),
        "  ".join("-" * w for w in widths),
    ]
    for r in rows:
        lines.append("  ".join(c.ljust(widths[i]) for i, c in enumerate(r)))
    return "\n".join(lines) + "\n"
