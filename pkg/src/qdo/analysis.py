"""Statistical quantities over distributions: conditionals, effects, CIs.

Conditioning works directly on full-register distributions via bit masks, for
exact probabilities and raw sampled counts alike. A conditioning event with
zero mass raises ``UndefinedConditionalError`` rather than silently producing
0/0: asking about an impossible event is a caller bug worth surfacing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .circuit import compile_model
from .engine import Distribution, NoiseSpec, run_exact, run_sampled
from .model import CausalModel, Intervention, ModelError, apply_do

# Normal-approximation 95% interval: mean +/- 1.96 standard errors.
Z_95 = 1.96


class UndefinedConditionalError(ValueError):
    """Conditioning event has zero probability mass / zero counts."""


@dataclass(frozen=True)
class Query:
    """P(outcome | condition) over named binary variables."""

    outcome: tuple[str, int]
    condition: tuple[tuple[str, int], ...] = ()


@dataclass(frozen=True)
class StratumEffect:
    value: int
    weight: float
    effect: float


@dataclass(frozen=True)
class TrialStats:
    mean: float
    std_err: float | None
    ci_low: float | None
    ci_high: float | None
    n_trials: int


@dataclass(frozen=True)
class EffectReport:
    """One analysis group: an effect size with optional trial statistics."""

    label: str
    effect: float
    per_trial: tuple[float, ...] = ()
    std_err: float | None = None
    ci_low: float | None = None
    ci_high: float | None = None
    n_trials: int | None = None
    shots_per_trial: int | None = None
    strata: tuple[StratumEffect, ...] | None = None

    @property
    def mean(self) -> float:
        return self.effect

    @property
    def ci(self) -> tuple[float, float] | None:
        if self.ci_low is None or self.ci_high is None:
            return None
        return (self.ci_low, self.ci_high)


def _event_mask(dist: Distribution, qubits: Mapping[str, int], event) -> np.ndarray:
    idx = np.arange(dist.values.size)
    mask = np.ones(dist.values.size, dtype=bool)
    for name, bit in event:
        if name not in qubits:
            raise ModelError(f"unknown variable {name!r} in query")
        if bit not in (0, 1):
            raise ValueError(f"variable {name!r}: value must be 0 or 1, got {bit!r}")
        mask &= ((idx >> qubits[name]) & 1) == bit
    return mask


def cond_prob(dist: Distribution, qubits: Mapping[str, int], query: Query) -> float:
    """P(outcome | condition); for sampled distributions, a ratio of counts."""
    cond_mask = _event_mask(dist, qubits, query.condition)
    cond_mass = float(dist.values[cond_mask].sum())
    if cond_mass <= 0.0:
        cond = ", ".join(f"{n}={b}" for n, b in query.condition) or "(empty)"
        raise UndefinedConditionalError(f"undefined conditional: condition [{cond}] has zero mass")
    out_mask = cond_mask & _event_mask(dist, qubits, [query.outcome])
    return float(dist.values[out_mask].sum()) / cond_mass


def observational_effect(
    dist: Distribution, qubits: Mapping[str, int], treatment: str, outcome: str
) -> float:
    """P(outcome=1 | treatment=1) - P(outcome=1 | treatment=0)."""
    p1 = cond_prob(dist, qubits, Query((outcome, 1), ((treatment, 1),)))
    p0 = cond_prob(dist, qubits, Query((outcome, 1), ((treatment, 0),)))
    return p1 - p0


def stratified_effect(
    dist: Distribution,
    qubits: Mapping[str, int],
    treatment: str,
    outcome: str,
    stratifier: str,
    weighting: str = "prevalence",
) -> tuple[float, tuple[StratumEffect, ...]]:
    """Within-stratum effects and their weighted aggregate.

    ``weighting`` selects the stratum weights: "prevalence" is P(Z=z), the
    back-door adjustment; "treated" is P(Z=z | treatment=1); "unweighted" is a
    plain mean of the stratum effects. A stratum the stratifier never takes is
    skipped (zero weight); a nonempty stratum with an empty treatment cell is
    an error.
    """
    if weighting not in ("prevalence", "treated", "unweighted"):
        raise ValueError(f"unknown weighting {weighting!r}")
    total = float(dist.values.sum())
    present = []
    for z in (0, 1):
        mass = float(dist.values[_event_mask(dist, qubits, [(stratifier, z)])].sum())
        if mass <= 0.0:
            continue
        try:
            p1 = cond_prob(dist, qubits, Query((outcome, 1), ((treatment, 1), (stratifier, z))))
            p0 = cond_prob(dist, qubits, Query((outcome, 1), ((treatment, 0), (stratifier, z))))
        except UndefinedConditionalError as exc:
            raise UndefinedConditionalError(
                f"undefined stratum cell ({stratifier}={z}): {exc}"
            ) from exc
        present.append((z, mass, p1 - p0))
    if not present:
        raise UndefinedConditionalError(f"stratifier {stratifier!r} has no mass in any stratum")

    strata = []
    for z, mass, effect in present:
        if weighting == "prevalence":
            w = mass / total
        elif weighting == "treated":
            w = cond_prob(dist, qubits, Query((stratifier, z), ((treatment, 1),)))
        else:
            w = 1.0 / len(present)
        strata.append(StratumEffect(z, w, effect))
    aggregate = sum(s.weight * s.effect for s in strata)
    return aggregate, tuple(strata)


def aggregate_trials(estimates: Sequence[float]) -> TrialStats:
    """Mean, standard error and 95% CI across independent trial estimates.

    The standard error uses the K-1 sample standard deviation; a single trial
    yields a mean with no interval.
    """
    if len(estimates) == 0:
        raise ValueError("aggregate_trials requires at least one estimate")
    k = len(estimates)
    mean = float(np.mean(estimates))
    if k < 2:
        return TrialStats(mean, None, None, None, k)
    std_err = float(np.std(estimates, ddof=1)) / math.sqrt(k)
    half = Z_95 * std_err
    return TrialStats(mean, std_err, mean - half, mean + half, k)


def causal_effect(
    model: CausalModel,
    treatment: str,
    outcome: str,
    *,
    backend: str = "exact",
    shots: int = 15000,
    trials: int = 1,
    seed: int | np.random.SeedSequence = 0,
    noise: NoiseSpec | None = None,
    label: str = "Causal, Overall (do)",
) -> EffectReport:
    """ACE = P(outcome=1 | do(treatment=1)) - P(outcome=1 | do(treatment=0)).

    Compiles the two surgered models and runs them on the chosen backend; the
    sampled backend runs ``trials`` independent pairs with per-trial derived
    seeds and aggregates them into a 95% CI.
    """
    if model.is_intervened(treatment):
        raise ModelError(f"treatment {treatment!r} is already intervened on")
    qubits = model.qubit_map()
    circ1 = compile_model(apply_do(model, Intervention(treatment, 1)))
    circ0 = compile_model(apply_do(model, Intervention(treatment, 0)))
    out1 = Query((outcome, 1))

    if backend == "exact":
        ace = cond_prob(run_exact(circ1), qubits, out1) - cond_prob(run_exact(circ0), qubits, out1)
        return EffectReport(label, ace)
    if backend != "sampled":
        raise ValueError(f"unknown backend {backend!r}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(int(seed))
    per_trial = []
    for child in root.spawn(trials):
        ss1, ss0 = child.spawn(2)
        p1 = cond_prob(run_sampled(circ1, shots, ss1, noise), qubits, out1)
        p0 = cond_prob(run_sampled(circ0, shots, ss0, noise), qubits, out1)
        per_trial.append(p1 - p0)
    stats = aggregate_trials(per_trial)
    return EffectReport(
        label,
        stats.mean,
        per_trial=tuple(per_trial),
        std_err=stats.std_err,
        ci_low=stats.ci_low,
        ci_high=stats.ci_high,
        n_trials=trials,
        shots_per_trial=shots,
    )
