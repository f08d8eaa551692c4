"""JSON problem files, short-exact-sequence files and machine reports.

Integers may appear either as JSON numbers or as decimal strings (the
latter for values outside the signed 64-bit range). Reports normalize
their payload once, at construction, so ``parse_report(emit_json(r)) == r``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import jsonschema

from .abelian import FgAbGroup, Subgroup
from .errors import MalformedInputError
from .gmodule import DEFAULT_MAX_ORDER, FiniteGroup, GModule, SubgroupOfG
from .localization import LocalizationProblem, PlaceSpec, all_cyclic_tail
from .matrix import IntMatrix
from .presets import RadicalData

INT64 = 2 ** 63

_int = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": "^-?[0-9]+$"}]}
_vector = {"type": "array", "items": _int}
_matrix = {"type": "array", "items": _vector}
_subgroup_list = {"type": "array", "items": {"type": "array", "items": _int}}
_tail = {"oneOf": [{"type": "null"}, {"const": "all_cyclic"}, _subgroup_list]}

GROUP_SCHEMA = {
    "type": "object",
    "oneOf": [
        {"required": ["cayley"], "properties": {"cayley": _matrix}},
        {"required": ["perm_generators"], "properties": {"perm_generators": _matrix}},
    ],
}

MODULE_SCHEMA = {
    "type": "object",
    "required": ["ambient_rank", "action"],
    "properties": {
        "ambient_rank": {"type": "integer", "minimum": 0},
        "relations": {"type": "array", "items": _vector},
        "action": {
            "oneOf": [
                {"type": "object", "required": ["by_generator"],
                 "properties": {"by_generator": {"type": "array", "items": _matrix}},
                 "additionalProperties": False},
                {"type": "object", "patternProperties": {"^[0-9]+$": _matrix},
                 "additionalProperties": False},
            ]
        },
    },
    "additionalProperties": False,
}

PROBLEM_SCHEMA = {
    "type": "object",
    "required": ["group", "module", "places", "S"],
    "properties": {
        "group": GROUP_SCHEMA,
        "module": MODULE_SCHEMA,
        "places": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "kind", "decomp"],
                "properties": {
                    "id": {"type": "string"},
                    "kind": {"enum": ["finite", "real", "complex"]},
                    "decomp": {"type": "array", "items": _int},
                },
                "additionalProperties": False,
            },
        },
        "S": {
            "type": "object",
            "required": ["explicit"],
            "properties": {
                "explicit": {"type": "array", "items": {"type": "string"}},
                "symbolic_tail": _tail,
                "complement_tail": _tail,
            },
            "additionalProperties": False,
        },
        "radical": {
            "type": "object",
            "required": ["generators"],
            "properties": {
                "generators": {"type": "array", "items": _vector},
                "v0": {"type": "string"},
                "p": {"type": "integer"},
            },
            "additionalProperties": False,
        },
        "description": {"type": "string"},
    },
    "additionalProperties": False,
}

SIXTERM_SCHEMA = {
    "type": "object",
    "required": ["group", "B1", "B2", "B3", "i", "j"],
    "properties": {
        "group": GROUP_SCHEMA,
        "B1": MODULE_SCHEMA,
        "B2": MODULE_SCHEMA,
        "B3": MODULE_SCHEMA,
        "i": _matrix,
        "j": _matrix,
        "subgroup": {"type": "array", "items": _int},
        "description": {"type": "string"},
    },
    "additionalProperties": False,
}


def _validate(doc, schema):
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as e:
        path = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise MalformedInputError(e.message, path=path) from None


def _ints(v):
    return [int(x) for x in v]


def _matrix_from(rows, ncols, path):
    try:
        return IntMatrix.from_rows([_ints(r) for r in rows], ncols)
    except ValueError as e:
        raise MalformedInputError(str(e), path=path) from None


def parse_group(doc: dict, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    try:
        if "cayley" in doc:
            table = [_ints(r) for r in doc["cayley"]]
            if len(table) > max_order:
                raise MalformedInputError(f"group order {len(table)} exceeds the cap {max_order}")
            return FiniteGroup(table)
        return FiniteGroup.from_permutations([_ints(p) for p in doc["perm_generators"]], max_order)
    except MalformedInputError as e:
        raise MalformedInputError(str(e), path="group") from None


def parse_module(doc: dict, G: FiniteGroup, path: str = "module") -> GModule:
    n = doc["ambient_rank"]
    rels = [_ints(c) for c in doc.get("relations", [])]
    for k, c in enumerate(rels):
        if len(c) != n:
            raise MalformedInputError(f"relation column of length {len(c)}, expected {n}",
                                      path=f"{path}/relations/{k}")
    carrier = FgAbGroup(n, IntMatrix.from_columns(rels, n))
    act = doc["action"]
    try:
        if "by_generator" in act:
            mats = [_matrix_from(m, n, f"{path}/action/by_generator/{k}")
                    for k, m in enumerate(act["by_generator"])]
            return GModule.from_generator_action(G, carrier, mats)
        mats = {}
        for key, m in act.items():
            g = int(key)
            if not 0 <= g < G.order:
                raise MalformedInputError(f"element index {g} out of range", path=f"{path}/action/{key}")
            mats[g] = _matrix_from(m, n, f"{path}/action/{key}")
        missing = [g for g in G.elements() if g not in mats]
        if missing:
            raise MalformedInputError(f"no matrix for elements {missing}", path=f"{path}/action")
        return GModule(G, carrier, mats)
    except MalformedInputError as e:
        if e.path:
            raise
        raise MalformedInputError(str(e), path=f"{path}/action") from None


def _subgroup(G, elems, path):
    try:
        return SubgroupOfG(G, _ints(elems))
    except MalformedInputError as e:
        raise MalformedInputError(str(e), path=path) from None


def _parse_tail(G, tail, path):
    if tail is None:
        return None
    if tail == "all_cyclic":
        return all_cyclic_tail(G)
    return tuple(_subgroup(G, t, f"{path}/{k}") for k, t in enumerate(tail))


@dataclass
class ProblemFile:
    problem: LocalizationProblem
    radical: RadicalData | None = None
    v0: str | None = None
    p: int | None = None


def parse_problem(doc: dict, max_order: int = DEFAULT_MAX_ORDER) -> ProblemFile:
    _validate(doc, PROBLEM_SCHEMA)
    G = parse_group(doc["group"], max_order)
    M = parse_module(doc["module"], G)
    places = []
    for k, p in enumerate(doc["places"]):
        H = _subgroup(G, p["decomp"], f"places/{k}/decomp")
        try:
            places.append(PlaceSpec(p["id"], p["kind"], H))
        except MalformedInputError as e:
            raise MalformedInputError(str(e), path=f"places/{k}") from None
    S = doc["S"]
    try:
        problem = LocalizationProblem(
            M, places, S["explicit"],
            _parse_tail(G, S.get("symbolic_tail"), "S/symbolic_tail"),
            _parse_tail(G, S.get("complement_tail"), "S/complement_tail"))
    except MalformedInputError as e:
        if e.path:
            raise
        raise MalformedInputError(str(e), path="S") from None
    out = ProblemFile(problem)
    if "radical" in doc:
        r = doc["radical"]
        try:
            out.radical = RadicalData(M, tuple(tuple(_ints(v)) for v in r["generators"]))
        except MalformedInputError as e:
            raise MalformedInputError(str(e), path="radical") from None
        out.v0 = r.get("v0")
        out.p = r.get("p")
    return out


def parse_sixterm(doc: dict, max_order: int = DEFAULT_MAX_ORDER):
    from .sixterm import ShortExactSequence
    _validate(doc, SIXTERM_SCHEMA)
    G = parse_group(doc["group"], max_order)
    B = [parse_module(doc[k], G, k) for k in ("B1", "B2", "B3")]
    i = _matrix_from(doc["i"], B[0].rank, "i")
    j = _matrix_from(doc["j"], B[1].rank, "j")
    try:
        seq = ShortExactSequence(*B, i, j)
    except MalformedInputError as e:
        raise MalformedInputError(str(e), path="<sequence>") from None
    H = _subgroup(G, doc["subgroup"], "subgroup") if "subgroup" in doc else None
    return seq, H


# -- emitting problem files ----------------------------------------------------


def module_doc(M: GModule) -> dict:
    return {
        "ambient_rank": M.rank,
        "relations": [list(c) for c in M.carrier.relations.columns()],
        "action": {str(g): a.tolist() for g, a in enumerate(M.action)},
    }


def problem_doc(problem: LocalizationProblem, radical: RadicalData | None = None,
                v0: str | None = None, description: str | None = None) -> dict:
    G = problem.module.group
    doc = {
        "group": {"cayley": [list(r) for r in G.table]},
        "module": module_doc(problem.module),
        "places": [{"id": p.id, "kind": p.kind.value, "decomp": list(p.decomp.elements)}
                   for p in problem.places.values()],
        "S": {"explicit": list(problem.S.explicit)},
    }
    if problem.S.symbolic_tail is not None:
        doc["S"]["symbolic_tail"] = [list(H.elements) for H in problem.S.symbolic_tail]
    if problem.S_complement.symbolic_tail is not None:
        doc["S"]["complement_tail"] = [list(H.elements) for H in problem.S_complement.symbolic_tail]
    if radical is not None:
        doc["radical"] = {"generators": [list(g) for g in radical.generators]}
        if v0 is not None:
            doc["radical"]["v0"] = v0
    if description:
        doc["description"] = description
    return doc


# -- reports -------------------------------------------------------------------


def normalize(x: Any) -> Any:
    """JSON-ready form: big ints and fractions become strings, tuples lists."""
    if isinstance(x, bool) or x is None or isinstance(x, (str, float)):
        return x
    if isinstance(x, int):
        return str(x) if not -INT64 <= x < INT64 else x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): normalize(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [normalize(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


@dataclass
class Report:
    command: str
    data: dict
    wall_time: float | None = field(default=None, compare=False)
    notes: list[str] = field(default_factory=list, compare=False)  # text mode only

    @classmethod
    def make(cls, command: str, data: dict, wall_time: float | None = None) -> Report:
        return cls(command, normalize(data), wall_time)


def emit_json(r: Report) -> str:
    return json.dumps({"command": r.command, "data": r.data}, sort_keys=True, indent=2,
                      ensure_ascii=False) + "\n"


def parse_report(text: str) -> Report:
    doc = json.loads(text)
    return Report(doc["command"], doc["data"])


def subgroup_doc(H: Subgroup) -> dict:
    free, factors = H.canonical()
    return {
        "free_rank": free,
        "invariant_factors": factors,
        "generators": [list(H.parent.reduce(g)) for g in H.generators if not H.parent.in_relations(g)],
    }


def group_str(free: int, factors) -> str:
    return str(FgAbGroup.diagonal([0] * free + list(factors))) if (free or factors) else "0"
