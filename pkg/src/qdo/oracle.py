"""Classical enumeration of the joint distribution a model implies.

This is the anti-bug cross-check for the whole pipeline: it never touches the
circuit layer or the statevector engine. It relies on the closed form for
composed conditioned Y-rotations on a ground-state qubit: across the branches
of a parent assignment the active rotation angles add, so

    P(v = 1 | parents) = sin^2(theta_eff / 2),
    theta_eff = base angle + sum of sign * angle over active incoming edges.

A Hadamard prep is not a Y-rotation, so the sum rule holds for a uniform-prep
variable only when nothing else rotates it; models with a uniform-prep
variable that has incoming edges are rejected (the engine still simulates
them fine, they are just outside what this oracle can certify).
"""

from __future__ import annotations

import math

import numpy as np

from .engine import Distribution
from .model import CausalModel, ModelError, topological_order, validate


class UnsupportedModelError(ModelError):
    """Model is outside the class the enumeration oracle can handle."""


def conditional_table(model: CausalModel, name: str) -> dict[tuple[int, ...], float]:
    """P(name = 1 | parent assignment) for every assignment of its parents.

    Keys are bit tuples ordered by ascending parent qubit index; a parentless
    variable yields a single entry keyed by the empty tuple.
    """
    var = model.variable(name)
    for iv in model.interventions:
        if iv.variable == name:
            return {(): float(iv.value)}

    incoming = model.incoming(name)
    if var.prep.kind == "uniform":
        if incoming:
            raise UnsupportedModelError(
                f"oracle-unsupported prep: variable {name!r} has a uniform (H) prep "
                "and incoming edges; the rotation-sum rule does not apply"
            )
        return {(): 0.5}

    qubit = model.qubit_map()
    parents = sorted({e.parent for e in incoming}, key=lambda p: qubit[p])
    base = var.prep.angle if var.prep.kind == "rotation" else 0.0
    table: dict[tuple[int, ...], float] = {}
    for bits in _assignments(len(parents)):
        given = dict(zip(parents, bits))
        theta = base + sum(e.sign * e.angle for e in incoming if given[e.parent] == e.control_value)
        table[bits] = math.sin(theta / 2.0) ** 2
    return table


def _assignments(n: int):
    for i in range(1 << n):
        yield tuple((i >> k) & 1 for k in range(n))


def enumerate_joint(model: CausalModel) -> Distribution:
    """Exact joint distribution by dense enumeration of all 2^n assignments.

    The joint factorizes over the DAG: each assignment's probability is the
    product over variables of P(value | parent assignment), with intervened
    variables contributing probability one on their forced value.
    """
    violations = validate(model)
    if violations:
        raise ModelError("invalid model: " + "; ".join(violations))

    qubit = model.qubit_map()
    order = topological_order(model)
    tables = {name: conditional_table(model, name) for name in order}
    parents_of = {
        name: sorted({e.parent for e in model.incoming(name)}, key=lambda p: qubit[p])
        for name in order
    }
    forced = {iv.variable: iv.value for iv in model.interventions}

    n = model.n_qubits
    probs = np.zeros(1 << n)
    for idx in range(1 << n):
        bit = lambda name: (idx >> qubit[name]) & 1
        p = 1.0
        for name in order:
            if name in forced:
                if bit(name) != forced[name]:
                    p = 0.0
                    break
                continue
            key = tuple(bit(par) for par in parents_of[name])
            p1 = tables[name][key]
            p *= p1 if bit(name) == 1 else 1.0 - p1
            if p == 0.0:
                break
        probs[idx] = p
    return Distribution(n, probs)
