"""JSON encodings for every domain type.

Encoders always emit canonical forms. Decoders rebuild through the checked
constructors, so a hand-edited file that breaks an invariant fails loudly
instead of producing a malformed value.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .cyclotomic import Cyclotomic, field
from .errors import StructuralError
from .expopoly import DifferenceOperator, Exponential, ExpoPoly, VectorPolynomial
from .fourier import Measure, Table
from .groups import GroupElement, GroupSpec
from .lab import ResidualReport
from .structure import ClassificationReport, TranslateSpan


def _q(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# -- core algebra -----------------------------------------------------------------


def cyclotomic_to_json(c: Cyclotomic) -> dict:
    return {"order": c.order, "coeffs": [_q(x) for x in c.coeffs]}


def cyclotomic_from_json(d: dict) -> Cyclotomic:
    order = int(d["order"])
    coeffs = [Fraction(s) for s in d["coeffs"]]
    if len(coeffs) != field(order).phi:
        raise StructuralError(f"Q(zeta_{order}) needs {field(order).phi} coefficients, got {len(coeffs)}")
    return Cyclotomic(order, coeffs)


def group_to_json(g: GroupSpec) -> dict:
    return {"free_rank": g.free_rank, "torsion": list(g.torsion_orders)}


def group_from_json(d: dict) -> GroupSpec:
    return GroupSpec(int(d["free_rank"]), tuple(int(n) for n in d["torsion"]))


def element_to_json(x: GroupElement) -> dict:
    return {"free": list(x.free), "torsion": list(x.torsion)}


def element_from_json(d: dict, group: GroupSpec) -> GroupElement:
    return group.element(d["free"], d["torsion"])


# -- expopoly ------------------------------------------------------------------


def exponential_to_json(m: Exponential) -> dict:
    return {
        "free": [cyclotomic_to_json(v) for v in m.free_values],
        "torsion": [cyclotomic_to_json(v) for v in m.torsion_values],
    }


def exponential_from_json(d: dict, group: GroupSpec, order: int) -> Exponential:
    fv = [cyclotomic_from_json(v) for v in d["free"]]
    tv = [cyclotomic_from_json(v) for v in d["torsion"]]
    for v in (*fv, *tv):
        if v.order != order:
            raise StructuralError(f"exponential value in Q(zeta_{v.order}), expected Q(zeta_{order})")
    return Exponential(group, fv, tv, order)


def expopoly_to_json(f: ExpoPoly) -> dict:
    f = f.canonical()
    terms = []
    for m, p in f.terms:
        mons = [{"exponent": list(e), "coeff": [cyclotomic_to_json(c) for c in vec]} for e, vec in p.sorted_terms()]
        terms.append({"exponential": exponential_to_json(m), "polynomial": mons})
    return {
        "group": group_to_json(f.group),
        "vector_dim": f.vector_dim,
        "cyclotomic_order": f.order,
        "terms": terms,
    }


def expopoly_from_json(d: dict) -> ExpoPoly:
    group = group_from_json(d["group"])
    k = int(d["vector_dim"])
    order = int(d["cyclotomic_order"])
    pairs = []
    for t in d["terms"]:
        m = exponential_from_json(t["exponential"], group, order)
        mons = {}
        for mon in t["polynomial"]:
            e = tuple(int(v) for v in mon["exponent"])
            if e in mons:
                raise StructuralError(f"duplicate monomial {e}")
            vec = [cyclotomic_from_json(c) for c in mon["coeff"]]
            if any(c.order != order for c in vec):
                raise StructuralError("coefficient outside the declared cyclotomic field")
            mons[e] = vec
        pairs.append((m, VectorPolynomial(group.free_rank, k, order, mons)))
    return ExpoPoly.from_terms(group, k, order, pairs)


# -- structure -----------------------------------------------------------------


def diffop_to_json(d: DifferenceOperator) -> dict:
    return {
        "group": group_to_json(d.group),
        "cyclotomic_order": d.order,
        "terms": [{"coeff": cyclotomic_to_json(c), "shift": element_to_json(g)} for c, g in d.terms],
    }


def diffop_from_json(d: dict) -> DifferenceOperator:
    group = group_from_json(d["group"])
    order = int(d["cyclotomic_order"])
    return DifferenceOperator(
        group, order, [(cyclotomic_from_json(t["coeff"]), element_from_json(t["shift"], group)) for t in d["terms"]]
    )


def classification_to_json(r: ClassificationReport) -> dict:
    return r.to_dict()


def classification_from_json(d: dict) -> ClassificationReport:
    return ClassificationReport(
        bool(d["is_generalized"]),
        bool(d["is_polynomial"]),
        bool(d["is_w_polynomial"]),
        bool(d["is_local_polynomial"]),
        None if d["degree"] is None else int(d["degree"]),
        int(d["dim_L_f"]),
    )


def translate_span_to_json(s: TranslateSpan) -> dict:
    return {"dim": s.dim, "basis": [expopoly_to_json(b) for b in s.basis]}


def translate_span_from_json(d: dict) -> TranslateSpan:
    basis = [expopoly_from_json(b) for b in d["basis"]]
    if len(basis) != int(d["dim"]):
        raise StructuralError("translate span dim disagrees with its basis length")
    return TranslateSpan(basis, len(basis))


# -- fourier -------------------------------------------------------------------


def table_to_json(t: Table) -> dict:
    return {
        "group": group_to_json(t.group),
        "vector_dim": t.vector_dim,
        "cyclotomic_order": t.order,
        "values": [
            {"point": element_to_json(x), "value": [cyclotomic_to_json(c) for c in t(x)]}
            for x in t.group.elements()
        ],
    }


def table_from_json(d: dict) -> Table:
    group = group_from_json(d["group"])
    k = int(d["vector_dim"])
    vals = {}
    for entry in d["values"]:
        x = element_from_json(entry["point"], group)
        if x in vals:
            raise StructuralError(f"point {x} listed twice")
        v = tuple(cyclotomic_from_json(c) for c in entry["value"])
        if len(v) != k:
            raise StructuralError(f"value at {x} has {len(v)} entries, expected {k}")
        vals[x] = v
    orders = {c.order for v in vals.values() for c in v}
    order = int(d["cyclotomic_order"]) if "cyclotomic_order" in d else (orders.pop() if len(orders) == 1 else 0)
    if any(c.order != order for v in vals.values() for c in v):
        raise StructuralError("table values use more than one cyclotomic order")
    return Table(group, k, order, vals)


def measure_to_json(mu: Measure) -> dict:
    return {
        "group": group_to_json(mu.group),
        "cyclotomic_order": mu.order,
        "weights": [{"point": element_to_json(x), "weight": cyclotomic_to_json(mu.weights[x])} for x in mu.group.elements()],
    }


def measure_from_json(d: dict) -> Measure:
    group = group_from_json(d["group"])
    order = int(d["cyclotomic_order"])
    w = {element_from_json(e["point"], group): cyclotomic_from_json(e["weight"]) for e in d["weights"]}
    return Measure(group, order, w)


# -- lab -----------------------------------------------------------------------


def residual_report_to_json(r: ResidualReport) -> dict:
    return r.to_dict()


def residual_report_from_json(d: dict) -> ResidualReport:
    return ResidualReport.from_dict(d)


# -- generic dispatch ------------------------------------------------------------

_ENCODERS = [
    (Cyclotomic, cyclotomic_to_json),
    (GroupSpec, group_to_json),
    (GroupElement, element_to_json),
    (Exponential, exponential_to_json),
    (ExpoPoly, expopoly_to_json),
    (DifferenceOperator, diffop_to_json),
    (ClassificationReport, classification_to_json),
    (TranslateSpan, translate_span_to_json),
    (Table, table_to_json),
    (Measure, measure_to_json),
    (ResidualReport, residual_report_to_json),
]


def to_json(value: Any) -> Any:
    """Encode a domain value (or a list/tuple/dict of them) into plain JSON data."""
    for cls, enc in _ENCODERS:
        if isinstance(value, cls):
            return enc(value)
    if isinstance(value, (list, tuple)):
        return [to_json(v) for v in value]
    if isinstance(value, dict):
        return {str(k): to_json(v) for k, v in value.items()}
    if isinstance(value, Fraction):
        return _q(value)
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    raise TypeError(f"no JSON encoding for {type(value).__name__}")


def dumps(value: Any) -> str:
    """Deterministic text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(to_json(value), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
