"""Exact harmonic analysis on finite abelian groups Z_{n_1} x ... x Z_{n_t}.

Haar measure is normalized to a probability measure for function
convolution, ``(f*g)(x) = (1/|G|) sum_t f(x-t) g(t)``, while a
:class:`Measure` is a density against counting measure,
``(mu*f)(x) = sum_t f(x-t) mu(t)``. With these conventions the measure with
density g/|G| convolves exactly like g.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .cyclotomic import Cyclotomic, cyc_dot, dot_packed, field, pack, root_of_unity
from .errors import NotFiniteError, StructuralError
from .expopoly import Exponential, ExpoPoly, VectorPolynomial, evaluate
from .groups import GroupElement, GroupSpec
from .linalg import CyclotomicEchelon, RealifiedSpan


def _require_finite(group: GroupSpec) -> None:
    if not group.is_finite:
        raise NotFiniteError(f"{group} is infinite; Fourier analysis needs free_rank = 0")


@dataclass(frozen=True)
class Table:
    """A function on a finite group, stored as its full value table."""

    group: GroupSpec
    vector_dim: int
    order: int
    values: Mapping[GroupElement, tuple]

    def __post_init__(self):
        _require_finite(self.group)
        if len(self.values) != self.group.order:
            raise StructuralError(f"table covers {len(self.values)} of {self.group.order} points")

    def __call__(self, x: GroupElement) -> tuple:
        return self.values[x]

    @classmethod
    def from_function(cls, group: GroupSpec, vector_dim: int, order: int, fn) -> Table:
        _require_finite(group)
        return cls(group, vector_dim, order, {x: tuple(fn(x)) for x in group.elements()})

    @classmethod
    def from_expopoly(cls, f: ExpoPoly) -> Table:
        return cls.from_function(f.group, f.vector_dim, f.order, lambda x: evaluate(f, x))

    def flat(self) -> list:
        return [c for x in self.group.elements() for c in self.values[x]]

    def translate(self, g: GroupElement) -> Table:
        return Table(self.group, self.vector_dim, self.order, {x: self.values[x + g] for x in self.group.elements()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Table):
            return NotImplemented
        return self.group == other.group and self.vector_dim == other.vector_dim and dict(self.values) == dict(other.values)

    __hash__ = None


@dataclass(frozen=True)
class Measure:
    """Density of a complex measure against counting measure."""

    group: GroupSpec
    order: int
    weights: Mapping[GroupElement, Cyclotomic]

    def __post_init__(self):
        _require_finite(self.group)
        if len(self.weights) != self.group.order:
            raise StructuralError("measure must be defined on every group element")

    @classmethod
    def dirac(cls, group: GroupSpec, order: int, at: GroupElement | None = None) -> Measure:
        at = group.zero() if at is None else at
        return cls(group, order, {x: Cyclotomic.rational(int(x == at), order) for x in group.elements()})


@dataclass(frozen=True)
class Character:
    """gamma_y(x) = prod_j zeta_{n_j}^{y_j x_j}."""

    group: GroupSpec
    dual_index: tuple[int, ...]
    order: int

    @property
    def exponential(self) -> Exponential:
        vals = [root_of_unity(n, y, self.order) for n, y in zip(self.group.torsion_orders, self.dual_index)]
        return Exponential(self.group, (), vals, self.order)

    def __call__(self, x: GroupElement) -> Cyclotomic:
        e = sum(y * t * (self.order // n) for y, t, n in zip(self.dual_index, x.torsion, self.group.torsion_orders))
        return Cyclotomic.zeta(self.order, e)

    def is_trivial(self) -> bool:
        return not any(self.dual_index)


def characters(group: GroupSpec, order: int | None = None) -> list[Character]:
    _require_finite(group)
    order = order if order is not None else math.lcm(4, *group.torsion_orders)
    if order % group.exponent_lcm:
        raise StructuralError(f"Q(zeta_{order}) does not contain the character values of {group}")
    return [Character(group, tuple(y), order) for y in group.torsion_elements()]


def _as_table(f) -> Table:
    return Table.from_expopoly(f) if isinstance(f, ExpoPoly) else f


def fourier_coefficient(f, gamma: Character) -> tuple:
    """e_gamma = (1/|G|) sum_t gamma(-t) f(t)."""
    f = _as_table(f)
    if gamma.group != f.group:
        raise StructuralError("character and function live on different groups")
    elems = f.group.elements()
    ws = [gamma(-t) for t in elems]
    size = f.group.order
    return tuple(cyc_dot(f.order, ws, [f(t)[j] for t in elems]).scale(Fraction(1, size)) for j in range(f.vector_dim))


def _convolve_core(f: Table, weights: Mapping[GroupElement, Cyclotomic]) -> dict:
    """x -> sum_t f(x - t) w(t), unnormalized."""
    elems = f.group.elements()
    for t in elems:
        if weights[t].order != f.order:
            raise StructuralError("weights and table use different cyclotomic orders")
    w = [(t, pack(weights[t])) for t in elems if weights[t]]
    packed = {y: [pack(c) for c in f(y)] for y in elems}
    out = {}
    for x in elems:
        rows = [(packed[x - t], pw) for t, pw in w]
        out[x] = tuple(dot_packed(f.order, [(pv[j], pw) for pv, pw in rows]) for j in range(f.vector_dim))
    return out


def convolve(f, g) -> Table:
    """(f*g)(x) = (1/|G|) sum_t f(x - t) g(t), g scalar-valued."""
    f, g = _as_table(f), _as_table(g)
    if f.group != g.group:
        raise StructuralError("convolution of functions on different groups")
    if g.vector_dim != 1:
        raise StructuralError("the second factor must be scalar-valued")
    inv = Fraction(1, f.group.order)
    raw = _convolve_core(f, {t: g(t)[0] for t in f.group.elements()})
    return Table(f.group, f.vector_dim, f.order, {x: tuple(c.scale(inv) for c in v) for x, v in raw.items()})


def measure_convolve(mu: Measure, f) -> Table:
    """(mu*f)(x) = sum_t f(x - t) mu(t)."""
    f = _as_table(f)
    if mu.group != f.group:
        raise StructuralError("measure and function live on different groups")
    return Table(f.group, f.vector_dim, f.order, _convolve_core(f, mu.weights))


def convolve_many(f, gs: Sequence) -> list[Table]:
    """[f*g for g in gs] as one exact integer matrix product (python-flint).

    Rows are (x, component) with the realified values f(x - t) over t;
    columns are (g, power) with the multiplication matrices of g(t).
    Agrees with :func:`convolve`, which stays the reference route.
    """
    import flint

    f = _as_table(f)
    gs = [_as_table(g) for g in gs]
    for g in gs:
        if g.group != f.group or g.vector_dim != 1 or g.order != f.order:
            raise StructuralError("convolve_many needs scalar tables on the same group and order")
    if not gs:
        return []
    order, elems = f.order, f.group.elements()
    phi = len(Cyclotomic.one(order).nums)
    table = field(order).reduce_table
    D = math.lcm(*(c.den for y in elems for c in f(y)))
    E = math.lcm(*(g(t)[0].den for g in gs for t in elems))
    rows = []
    for x in elems:
        shifted = [f(x - t) for t in elems]
        for j in range(f.vector_dim):
            row = []
            for v in shifted:
                c = v[j]
                sc = D // c.den
                row.extend(a * sc for a in c.nums)
            rows.append(row)
    # R[(t, s), (i, u)] = coefficient of zeta^u in zeta^s * g_i(t), times E
    R = [[0] * (len(gs) * phi) for _ in range(len(elems) * phi)]
    for ti, t in enumerate(elems):
        for gi, g in enumerate(gs):
            c = g(t)[0]
            sc = E // c.den
            for a_pow, a in enumerate(c.nums):
                if not a:
                    continue
                for s_pow in range(phi):
                    red = table[(a_pow + s_pow) % order]
                    for u, r in enumerate(red):
                        if r:
                            R[ti * phi + s_pow][gi * phi + u] += a * sc * r
    prod = flint.fmpz_mat(rows) * flint.fmpz_mat(R)
    den = D * E * f.group.order
    out = []
    for gi in range(len(gs)):
        vals = {}
        for xi, x in enumerate(elems):
            vals[x] = tuple(
                Cyclotomic._make(order, [int(prod[xi * f.vector_dim + j, gi * phi + u]) for u in range(phi)], den)
                for j in range(f.vector_dim)
            )
        out.append(Table(f.group, f.vector_dim, order, vals))
    return out


def synthesize(f) -> ExpoPoly:
    """sum_gamma e_gamma gamma as a canonical exponential polynomial."""
    f = _as_table(f)
    r = f.group.free_rank
    pairs = []
    for gamma in characters(f.group, f.order):
        e = fourier_coefficient(f, gamma)
        if any(e):
            pairs.append((gamma.exponential, VectorPolynomial.constant(r, e, f.order)))
    return ExpoPoly.from_terms(f.group, f.vector_dim, f.order, pairs)


def convolution_associativity_check(mu: Measure, f, g) -> bool:
    """(mu*f)*g == mu*(f*g), exactly."""
    return convolve(measure_convolve(mu, f), g) == measure_convolve(mu, convolve(f, g))


class TableSpan:
    """Exact span of a list of tables, flattened over all group points.

    ``backend="flint"`` decides rank and membership over Q after
    realification; ``"echelon"`` is the pure-Python elimination over
    Q(zeta_N). Both are exact and are cross-checked in the tests.
    """

    def __init__(self, tables: Sequence[Table], backend: str = "flint"):
        if not tables:
            raise StructuralError("need at least one table")
        t0 = tables[0]
        self.group, self.order, self.vector_dim = t0.group, t0.order, t0.vector_dim
        self.backend = backend
        size = t0.group.order * t0.vector_dim
        if backend == "flint":
            self.basis = RealifiedSpan(t0.order, size, [t.flat() for t in tables])
        elif backend == "echelon":
            self.basis = CyclotomicEchelon(t0.order, size)
            for t in tables:
                self.basis.add(t.flat())
        else:
            raise ValueError(f"unknown backend {backend!r}")
        self.tables = list(tables)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, t: Table) -> bool:
        return self.basis.contains(t.flat())

    def contains_span(self, other: TableSpan) -> bool:
        vecs = [t.flat() for t in other.tables]
        if isinstance(self.basis, RealifiedSpan):
            return self.basis.contains_all(vecs)
        return all(self.basis.contains(v) for v in vecs)


def translate_table_span(f, backend: str = "flint") -> TableSpan:
    """Span of all translates of f (the group is finite, so this is V_f)."""
    f = _as_table(f)
    return TableSpan([f.translate(g) for g in f.group.elements()], backend)


def synthesis_span(f, backend: str = "flint") -> TableSpan | None:
    """Span of the tables of e_gamma gamma over characters with e_gamma != 0."""
    f = _as_table(f)
    tables = []
    for gamma in characters(f.group, f.order):
        e = fourier_coefficient(f, gamma)
        if any(e):
            tables.append(Table.from_function(f.group, f.vector_dim, f.order, lambda x, e=e, gm=gamma: tuple(gm(x) * c for c in e)))
    return TableSpan(tables, backend) if tables else None
