"""Structural causal models over binary variables with rotation-angle mechanisms.

A model is a DAG whose nodes are binary variables mapped one-to-one onto
qubits. Each variable carries a preparation (ground state, uniform, or a base
Y-rotation) and each edge carries a controlled-rotation angle. Interventions
are represented by graph surgery: ``apply_do`` removes the intervened
variable's incoming edges and pins its preparation, leaving the forcing of the
value to the circuit compiler.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

TWO_PI = 2.0 * math.pi


class ModelError(ValueError):
    """A model or model file cannot be used as requested."""


@dataclass(frozen=True)
class Prep:
    """Initial-state preparation for one variable.

    kind is "ground" (state 0, no gate), "uniform" (Hadamard), or "rotation"
    (Y-rotation by ``angle`` radians, giving P(1) = sin^2(angle/2)).
    """

    kind: str
    angle: float = 0.0

    @staticmethod
    def rotation(angle: float) -> "Prep":
        if math.isfinite(angle):
            angle = angle % TWO_PI
        return Prep("rotation", angle)


GROUND = Prep("ground")
UNIFORM = Prep("uniform")


@dataclass(frozen=True)
class Variable:
    name: str
    qubit: int
    prep: Prep = GROUND


@dataclass(frozen=True)
class Edge:
    """Causal link parent -> child, active when the parent is in ``control_value``.

    ``sign`` = -1 lowers to a rotation by ``-angle`` (a link that suppresses
    rather than promotes the child).
    """

    parent: str
    child: str
    control_value: int
    angle: float
    sign: int = 1


@dataclass(frozen=True)
class Intervention:
    variable: str
    value: int


@dataclass(frozen=True)
class CausalModel:
    name: str
    variables: tuple[Variable, ...]
    edges: tuple[Edge, ...]
    interventions: tuple[Intervention, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "interventions", tuple(self.interventions))

    @property
    def n_qubits(self) -> int:
        return len(self.variables)

    def variable(self, name: str) -> Variable:
        for v in self.variables:
            if v.name == name:
                return v
        raise ModelError(f"unknown variable {name!r} in model {self.name!r}")

    def qubit_map(self) -> dict[str, int]:
        return {v.name: v.qubit for v in self.variables}

    def incoming(self, name: str) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.child == name)

    def is_intervened(self, name: str) -> bool:
        return any(iv.variable == name for iv in self.interventions)


def validate(model: CausalModel) -> list[str]:
    """Return every invariant violation as a human-readable string.

    An empty list means the model is valid. Violations are data, not errors:
    this never raises.
    """
    out: list[str] = []
    names = [v.name for v in model.variables]
    known = set(names)

    for v in model.variables:
        if not v.name:
            out.append("variable with empty name")
        if v.prep.kind not in ("ground", "uniform", "rotation"):
            out.append(f"variable {v.name!r}: unknown prep kind {v.prep.kind!r}")
        elif v.prep.kind == "rotation" and not math.isfinite(v.prep.angle):
            out.append(f"variable {v.name!r}: non-finite base rotation angle")
    if len(known) != len(names):
        dupes = sorted({n for n in names if names.count(n) > 1})
        out.append(f"duplicate variable names: {', '.join(dupes)}")
    qubits = sorted(v.qubit for v in model.variables)
    if qubits != list(range(len(model.variables))):
        out.append(
            f"qubit indices must be a permutation of 0..{len(model.variables) - 1}, got {qubits}"
        )

    seen_triples: set[tuple[str, str, int]] = set()
    for e in model.edges:
        if e.parent == e.child:
            out.append(f"self-loop on {e.parent!r}")
            continue
        for end in (e.parent, e.child):
            if end not in known:
                out.append(f"edge {e.parent!r}->{e.child!r} references unknown variable {end!r}")
        if not (math.isfinite(e.angle) and e.angle > 0):
            out.append(f"edge {e.parent!r}->{e.child!r}: angle must be finite and > 0")
        if e.control_value not in (0, 1):
            out.append(f"edge {e.parent!r}->{e.child!r}: control_value must be 0 or 1")
        if e.sign not in (1, -1):
            out.append(f"edge {e.parent!r}->{e.child!r}: sign must be +1 or -1")
        triple = (e.parent, e.child, e.control_value)
        if triple in seen_triples:
            out.append(f"duplicate edge {e.parent!r}->{e.child!r} (control={e.control_value})")
        seen_triples.add(triple)

    cyclic = _cycle_participants(model)
    if cyclic:
        out.append(f"cycle detected involving: {', '.join(sorted(cyclic))}")

    intervened: set[str] = set()
    for iv in model.interventions:
        if iv.variable not in known:
            out.append(f"intervention on unknown variable {iv.variable!r}")
            continue
        if iv.value not in (0, 1):
            out.append(f"intervention {iv.variable!r}: value must be 0 or 1")
        if iv.variable in intervened:
            out.append(f"variable {iv.variable!r} intervened more than once")
        intervened.add(iv.variable)
        if any(e.child == iv.variable for e in model.edges):
            out.append(f"intervened variable {iv.variable!r} still has incoming edges")
    return out


def _cycle_participants(model: CausalModel) -> set[str]:
    # Strip nodes with no incoming, then no outgoing, edges within the rest;
    # what survives lies on a directed cycle.
    known = {v.name for v in model.variables}
    edges = {
        (e.parent, e.child)
        for e in model.edges
        if e.parent in known and e.child in known and e.parent != e.child
    }
    remaining = set(known)
    changed = True
    while changed:
        changed = False
        for n in list(remaining):
            has_in = any(p in remaining and c == n for p, c in edges)
            has_out = any(c in remaining and p == n for p, c in edges)
            if not (has_in and has_out):
                remaining.discard(n)
                changed = True
    return remaining


def topological_order(model: CausalModel) -> list[str]:
    """Variable names with every parent before every child.

    Ties are broken by ascending qubit index, so the result is deterministic.
    """
    qubit = model.qubit_map()
    indeg = {v.name: 0 for v in model.variables}
    children: dict[str, list[str]] = {v.name: [] for v in model.variables}
    for e in model.edges:
        if e.parent not in indeg or e.child not in indeg:
            raise ModelError(
                f"edge {e.parent!r}->{e.child!r} references a variable missing from the model"
            )
        if e.parent == e.child:
            raise ModelError(f"self-loop on {e.parent!r}")
        indeg[e.child] += 1
        children[e.parent].append(e.child)

    heap = [(qubit[n], n) for n, d in indeg.items() if d == 0]
    heapq.heapify(heap)
    order: list[str] = []
    while heap:
        _, n = heapq.heappop(heap)
        order.append(n)
        for c in children[n]:
            indeg[c] -= 1
            if indeg[c] == 0:
                heapq.heappush(heap, (qubit[c], c))
    if len(order) != len(indeg):
        stuck = sorted(_cycle_participants(model)) or sorted(set(indeg) - set(order))
        raise ModelError(f"cycle detected involving: {', '.join(stuck)}")
    return order


def apply_do(model: CausalModel, iv: Intervention) -> CausalModel:
    """Graph surgery: sever every edge into ``iv.variable`` and pin its prep.

    Returns a new model with ``iv`` recorded; the input is unmodified. The
    forced value itself is realized by the compiler (an X gate when value is 1).
    """
    model.variable(iv.variable)
    if iv.value not in (0, 1):
        raise ModelError(f"intervention value must be 0 or 1, got {iv.value!r}")
    if model.is_intervened(iv.variable):
        raise ModelError(f"variable {iv.variable!r} is already intervened on")
    variables = tuple(
        replace(v, prep=GROUND) if v.name == iv.variable else v for v in model.variables
    )
    edges = tuple(e for e in model.edges if e.child != iv.variable)
    return replace(
        model,
        variables=variables,
        edges=edges,
        interventions=model.interventions + (iv,),
    )


# --- JSON model file format --------------------------------------------------
#
# { "name": str,
#   "variables": [ {"name": str, "qubit": int,
#                   "prep": "ground" | "uniform" | {"rotation": float}} ],
#   "edges": [ {"parent": str, "child": str, "control_value": 0|1,
#               "angle": float, "sign": 1|-1} ] }
#
# Angles are radians. Unknown fields are rejected.


def _require_keys(obj: dict, allowed: set[str], required: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ModelError(f"{where}: unknown field(s) {', '.join(sorted(unknown))}")
    missing = required - set(obj)
    if missing:
        raise ModelError(f"{where}: missing field(s) {', '.join(sorted(missing))}")


def _as_bit(value, where: str) -> int:
    if isinstance(value, bool) or value not in (0, 1):
        raise ModelError(f"{where}: expected 0 or 1, got {value!r}")
    return int(value)


def _as_angle(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ModelError(f"{where}: expected a number (radians), got {value!r}")
    return float(value)


def _prep_from_json(value, where: str) -> Prep:
    if value == "ground":
        return GROUND
    if value == "uniform":
        return UNIFORM
    if isinstance(value, dict):
        _require_keys(value, {"rotation"}, {"rotation"}, where)
        return Prep.rotation(_as_angle(value["rotation"], f"{where}.rotation"))
    raise ModelError(f'{where}: expected "ground", "uniform" or {{"rotation": angle}}, got {value!r}')


def model_from_dict(data: dict) -> CausalModel:
    """Parse the JSON model format; rejects unknown fields with a field path."""
    if not isinstance(data, dict):
        raise ModelError(f"model: expected an object, got {type(data).__name__}")
    _require_keys(data, {"name", "variables", "edges"}, {"name", "variables", "edges"}, "model")
    if not isinstance(data["name"], str):
        raise ModelError("model.name: expected a string")
    if not isinstance(data["variables"], list) or not isinstance(data["edges"], list):
        raise ModelError("model.variables and model.edges: expected arrays")

    variables = []
    for i, v in enumerate(data["variables"]):
        where = f"variables[{i}]"
        if not isinstance(v, dict):
            raise ModelError(f"{where}: expected an object")
        _require_keys(v, {"name", "qubit", "prep"}, {"name", "qubit", "prep"}, where)
        if not isinstance(v["name"], str):
            raise ModelError(f"{where}.name: expected a string")
        if isinstance(v["qubit"], bool) or not isinstance(v["qubit"], int) or v["qubit"] < 0:
            raise ModelError(f"{where}.qubit: expected a non-negative integer")
        variables.append(
            Variable(v["name"], v["qubit"], _prep_from_json(v["prep"], f"{where}.prep"))
        )

    edges = []
    for i, e in enumerate(data["edges"]):
        where = f"edges[{i}]"
        if not isinstance(e, dict):
            raise ModelError(f"{where}: expected an object")
        _require_keys(
            e, {"parent", "child", "control_value", "angle", "sign"},
            {"parent", "child", "control_value", "angle", "sign"}, where,
        )
        if not isinstance(e["parent"], str) or not isinstance(e["child"], str):
            raise ModelError(f"{where}: parent and child must be strings")
        sign = e["sign"]
        if isinstance(sign, bool) or sign not in (1, -1):
            raise ModelError(f"{where}.sign: expected 1 or -1, got {sign!r}")
        edges.append(
            Edge(
                e["parent"],
                e["child"],
                _as_bit(e["control_value"], f"{where}.control_value"),
                _as_angle(e["angle"], f"{where}.angle"),
                int(sign),
            )
        )
    return CausalModel(data["name"], tuple(variables), tuple(edges))


def model_to_dict(model: CausalModel) -> dict:
    if model.interventions:
        raise ModelError("the model file format holds observational models only")
    return {
        "name": model.name,
        "variables": [
            {
                "name": v.name,
                "qubit": v.qubit,
                "prep": v.prep.kind if v.prep.kind != "rotation" else {"rotation": v.prep.angle},
            }
            for v in model.variables
        ],
        "edges": [
            {
                "parent": e.parent,
                "child": e.child,
                "control_value": e.control_value,
                "angle": e.angle,
                "sign": e.sign,
            }
            for e in model.edges
        ],
    }


def model_json_text(model: CausalModel) -> str:
    return json.dumps(model_to_dict(model), indent=2) + "\n"


def load_model(path: str | Path) -> CausalModel:
    """Parse and validate a model file; raises ModelError with diagnostics."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ModelError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    model = model_from_dict(data)
    violations = validate(model)
    if violations:
        raise ModelError(f"{path}: invalid model: " + "; ".join(violations))
    return model


def save_model(model: CausalModel, path: str | Path) -> None:
    Path(path).write_text(model_json_text(model), encoding="utf-8")
