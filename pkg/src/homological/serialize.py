"""JSON documents with exact rationals written as "p/q" strings.

Every reader accepts exactly what the matching writer produces, so
``load(dump(x)) == x`` holds bit for bit.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .cantor import CantorStep, TowerSolution
from .coboundary import DiscreteSolution, StepSolution
from .core.functions import DiscreteFunction, StepFunction
from .core.iet import IntervalExchange, Piece
from .core.norms import Norm, NormValue
from .core.vectors import RationalVector, as_rational
from .errors import InvalidInstance
from .selection import PermutationFamily, VectorMatrix


class DocumentError(InvalidInstance):
    """A document is malformed or of an unexpected type."""


def rat(x: Fraction) -> str:
    return str(Fraction(x))


def parse_rat(s: Any) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise DocumentError(f"expected a rational string, got {s!r}")
    try:
        return as_rational(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad rational {s!r}: {exc}") from None


def vec_doc(v: RationalVector) -> list:
    return [rat(a) for a in v.entries]


def parse_vec(doc) -> RationalVector:
    if not isinstance(doc, list) or not doc:
        raise DocumentError(f"expected a nonempty list of rationals, got {doc!r}")
    return RationalVector._wrap(tuple(parse_rat(a) for a in doc))


def norm_doc(v: NormValue) -> dict:
    return v.to_json()


def approx(x: float) -> str:
    return f"{x:.12g}"


# -- instances ----------------------------------------------------------------

def discrete_doc(f: DiscreteFunction) -> dict:
    return {"type": "discrete", "values": [vec_doc(v) for v in f.values]}


def step_doc(f: StepFunction) -> dict:
    return {"type": "step", "breakpoints": [rat(b) for b in f.breakpoints],
            "values": [vec_doc(v) for v in f.values]}


def iet_doc(T: IntervalExchange) -> dict:
    return {"type": "iet",
            "pieces": [{"lo": rat(p.lo), "hi": rat(p.hi), "shift": rat(p.shift)} for p in T.pieces]}


def cantor_doc(f: CantorStep) -> dict:
    return {"type": "cantor", "q": f.q, "r": rat(f.r), "depth": f.depth,
            "values": [vec_doc(v) for v in f.values]}


def matrix_doc(mx: VectorMatrix) -> dict:
    return {"type": "matrix", "norm": mx.norm.value,
            "rows": [[vec_doc(v) for v in row] for row in mx.entries]}


def vectors_doc(vs) -> dict:
    return {"type": "vectors", "vectors": [vec_doc(v) for v in vs]}


def sets_doc(sets) -> dict:
    return {"type": "sets", "sets": [[vec_doc(v) for v in c] for c in sets]}


def _need(doc, key):
    if not isinstance(doc, dict) or key not in doc:
        raise DocumentError(f"missing field {key!r}")
    return doc[key]


def _int(doc, key) -> int:
    v = _need(doc, key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise DocumentError(f"field {key!r} must be an integer")
    return v


def parse_instance(doc: dict):
    """Build the object described by an instance document."""
    kind = _need(doc, "type")
    if kind == "discrete":
        return DiscreteFunction(tuple(parse_vec(v) for v in _need(doc, "values")))
    if kind == "step":
        return StepFunction(tuple(parse_rat(b) for b in _need(doc, "breakpoints")),
                            tuple(parse_vec(v) for v in _need(doc, "values")))
    if kind == "iet":
        return IntervalExchange(tuple(
            Piece(parse_rat(_need(p, "lo")), parse_rat(_need(p, "hi")), parse_rat(_need(p, "shift")))
            for p in _need(doc, "pieces")))
    if kind == "cantor":
        return CantorStep(_int(doc, "q"), parse_rat(_need(doc, "r")), _int(doc, "depth"),
                          tuple(parse_vec(v) for v in _need(doc, "values")))
    if kind == "matrix":
        norm = Norm.parse(doc.get("norm", "l2"))
        return VectorMatrix(tuple(tuple(parse_vec(v) for v in row) for row in _need(doc, "rows")), norm)
    if kind == "vectors":
        return [parse_vec(v) for v in _need(doc, "vectors")]
    if kind == "sets":
        return [[parse_vec(v) for v in c] for c in _need(doc, "sets")]
    raise DocumentError(f"unknown document type {kind!r}")


def to_doc(obj) -> dict:
    if isinstance(obj, DiscreteFunction):
        return discrete_doc(obj)
    if isinstance(obj, StepFunction):
        return step_doc(obj)
    if isinstance(obj, IntervalExchange):
        return iet_doc(obj)
    if isinstance(obj, CantorStep):
        return cantor_doc(obj)
    if isinstance(obj, VectorMatrix):
        return matrix_doc(obj)
    raise TypeError(f"no document form for {type(obj).__name__}")


# -- solutions ----------------------------------------------------------------

def discrete_solution_doc(f: DiscreteFunction, sol: DiscreteSolution) -> dict:
    d = f.dim
    doc = {
        "type": "solution", "kind": "discrete", "norm": sol.norm.value,
        "f": discrete_doc(f),
        "sigma": list(sol.sigma), "order": list(sol.order),
        "g": [vec_doc(v) for v in sol.g.values],
        "certified_bound": norm_doc(sol.certified_bound),
        "f_norm": norm_doc(sol.f_norm),
        "bound_limit": norm_doc(sol.f_norm * d),
        "residual": "0",
    }
    planar = sol.meets_planar_constant()
    if planar is not None:
        doc["within_planar_constant"] = planar
    return doc


def step_solution_doc(f: StepFunction, sol: StepSolution) -> dict:
    return {
        "type": "solution", "kind": "step", "norm": sol.discrete.norm.value,
        "f": step_doc(f), "T": iet_doc(sol.T), "g": step_doc(sol.g),
        "start_cell": sol.discrete.start,
        "certified_bound": norm_doc(sol.certified_bound),
        "f_norm": norm_doc(sol.discrete.f_norm),
        "bound_limit": norm_doc(sol.discrete.f_norm * f.dim),
        "residual": "0",
    }


def tower_solution_doc(f: CantorStep, sol: TowerSolution) -> dict:
    return {
        "type": "solution", "kind": "cantor", "norm": sol.norm.value,
        "f": cantor_doc(f),
        "levels": [{
            "depth": L.depth, "cycle": list(L.cycle),
            "g": [vec_doc(v) for v in L.g],
            "h_norm": norm_doc(L.h_norm), "g_norm": norm_doc(L.g_norm),
            "level_bound": approx(float(L.h_norm) * sol.C_V),
        } for L in sol.levels],
        "T": list(sol.T_final),
        "g": [vec_doc(v) for v in sol.g_final.values],
        "branch_cycle": list(sol.branch_cycle),
        "C_V": approx(sol.C_V),
        "a": approx(sol.a),
        "certified_bound": norm_doc(sol.g_norm),
        "global_bound": approx(sol.global_bound),
        "start_norm": norm_doc(sol.start_norm),
        "start_bound": approx(sol.start_bound),
        "checks": dict(sorted(sol.checks.items())),
        "residual": "0",
    }


def kwapien_solution_doc(mx: VectorMatrix, fam: PermutationFamily) -> dict:
    return {
        "type": "solution", "kind": "kwapien", "norm": mx.norm.value,
        "matrix": matrix_doc(mx),
        "perms": [list(p) for p in fam.perms],
        "achieved_bound": norm_doc(fam.achieved_bound),
        "max_entry_norm": norm_doc(mx.max_entry_norm()),
        "bound_limit": approx(float(fam.guaranteed_bound)),
    }


def dumps(doc: dict) -> str:
    """Canonical text form: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise DocumentError("top level must be an object")
    return doc


__all__ = [
    "DocumentError", "parse_instance", "to_doc", "dumps", "loads", "discrete_solution_doc",
    "step_solution_doc", "tower_solution_doc", "kwapien_solution_doc", "vectors_doc",
    "sets_doc", "parse_vec", "parse_rat", "vec_doc",
]
