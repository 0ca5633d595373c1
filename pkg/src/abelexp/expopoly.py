"""Vector-valued exponential polynomials on Z^r x (finite abelian group).

A function is held in the canonical form ``sum_i m_i * p_i`` where the
``m_i`` are pairwise distinct exponentials and each ``p_i`` is a nonzero
polynomial in the free coordinates with coefficients in Q(zeta_N)^k.

Polynomials never involve torsion coordinates: an additive map from a group
into C sends every element of finite order to 0 (n*a(y) = a(n*y) = a(0) = 0),
so monomials built from additive maps vanish in torsion directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from itertools import product
from typing import Iterable, Mapping, Sequence

from .cyclotomic import Cyclotomic
from .errors import PreconditionError, StructuralError
from .groups import GroupElement, GroupSpec

Vector = tuple  # tuple of Cyclotomic, length k
Exponent = tuple  # tuple of nonnegative ints, length r


def _vzero(k: int, order: int) -> Vector:
    z = Cyclotomic.zero(order)
    return (z,) * k


def _vadd(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def _vscale(c, a: Vector) -> Vector:
    return tuple(c * x for x in a)


def _vnonzero(a: Vector) -> bool:
    return any(a)


class Exponential:
    """A homomorphism G -> C^* given by its values on the generators."""

    __slots__ = ("group", "order", "free_values", "torsion_values", "_hash")

    def __init__(self, group: GroupSpec, free_values: Sequence, torsion_values: Sequence = (), order: int | None = None):
        if order is None:
            vals = [v for v in (*free_values, *torsion_values) if isinstance(v, Cyclotomic)]
            if not vals:
                raise StructuralError("order must be given when no value is a Cyclotomic")
            order = vals[0].order
        fv = tuple(Cyclotomic.coerce(v, order) for v in free_values)
        tv = tuple(Cyclotomic.coerce(v, order) for v in torsion_values)
        if len(fv) != group.free_rank or len(tv) != len(group.torsion_orders):
            raise StructuralError(f"exponential needs {group.free_rank} free and {len(group.torsion_orders)} torsion values")
        for v in fv:
            if v.is_zero():
                raise PreconditionError("exponential values on free generators must be nonzero")
        for v, n in zip(tv, group.torsion_orders):
            if not (v ** n).is_one():
                raise PreconditionError(f"torsion value {v} is not an {n}-th root of unity")
        self.group = group
        self.order = order
        self.free_values = fv
        self.torsion_values = tv
        self._hash = None

    @classmethod
    def trivial(cls, group: GroupSpec, order: int) -> Exponential:
        one = Cyclotomic.one(order)
        return cls(group, (one,) * group.free_rank, (one,) * len(group.torsion_orders), order)

    def is_trivial(self) -> bool:
        return all(v.is_one() for v in self.free_values + self.torsion_values)

    def __call__(self, x: GroupElement) -> Cyclotomic:
        self.group.check(x)
        result = Cyclotomic.one(self.order)
        for v, e in zip(self.free_values, x.free):
            if e:
                result = result * v ** e
        for v, e in zip(self.torsion_values, x.torsion):
            if e:
                result = result * v ** e
        return result

    def __mul__(self, other: Exponential) -> Exponential:
        if self.group != other.group:
            raise StructuralError("exponentials on different groups")
        return Exponential(
            self.group,
            [a * b for a, b in zip(self.free_values, other.free_values)],
            [a * b for a, b in zip(self.torsion_values, other.torsion_values)],
            self.order,
        )

    def values(self) -> tuple:
        return self.free_values + self.torsion_values

    def sort_key(self) -> tuple:
        return tuple(c for v in self.values() for c in v.coeffs)

    def to_order(self, order: int) -> Exponential:
        return Exponential(
            self.group,
            [v.to_order(order) for v in self.free_values],
            [v.to_order(order) for v in self.torsion_values],
            order,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Exponential):
            return NotImplemented
        return self.group == other.group and self.order == other.order and self.values() == other.values()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.group, self.values()))
        return self._hash

    def __repr__(self) -> str:
        f = ", ".join(map(str, self.free_values))
        t = ", ".join(map(str, self.torsion_values))
        return f"exp[{f}; {t}]"


class VectorPolynomial:
    """Polynomial in r free coordinates with values in Q(zeta_N)^k.

    ``terms`` maps exponent tuples to coefficient vectors; zero vectors are
    never stored.
    """

    __slots__ = ("nvars", "vector_dim", "order", "terms", "_hash")

    def __init__(self, nvars: int, vector_dim: int, order: int, terms: Mapping[Exponent, Sequence] | None = None):
        self.nvars = nvars
        self.vector_dim = vector_dim
        self.order = order
        clean: dict[Exponent, Vector] = {}
        for exp, vec in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars or any(e < 0 for e in exp):
                raise StructuralError(f"bad exponent {exp} for {nvars} variables")
            vec = tuple(Cyclotomic.coerce(c, order) for c in vec)
            if len(vec) != vector_dim:
                raise StructuralError(f"coefficient vector of length {len(vec)}, expected {vector_dim}")
            if exp in clean:
                vec = _vadd(clean[exp], vec)
            if _vnonzero(vec):
                clean[exp] = vec
            else:
                clean.pop(exp, None)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars, vector_dim, order, terms) -> VectorPolynomial:
        obj = object.__new__(cls)
        obj.nvars, obj.vector_dim, obj.order = nvars, vector_dim, order
        obj.terms = {e: v for e, v in terms.items() if _vnonzero(v)}
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, nvars: int, vec: Sequence, order: int) -> VectorPolynomial:
        return cls(nvars, len(vec), order, {(0,) * nvars: vec})

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorPolynomial):
            return NotImplemented
        return (self.nvars, self.vector_dim, self.order) == (other.nvars, other.vector_dim, other.order) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def sorted_terms(self) -> list[tuple[Exponent, Vector]]:
        """Graded order: highest total degree first, then lexicographically descending."""
        return sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-e for e in kv[0])))

    def __add__(self, other: VectorPolynomial) -> VectorPolynomial:
        out = dict(self.terms)
        for e, v in other.terms.items():
            out[e] = _vadd(out[e], v) if e in out else v
        return VectorPolynomial._raw(self.nvars, self.vector_dim, self.order, out)

    def scale(self, c) -> VectorPolynomial:
        return VectorPolynomial._raw(
            self.nvars, self.vector_dim, self.order, {e: _vscale(c, v) for e, v in self.terms.items()}
        )

    def __neg__(self) -> VectorPolynomial:
        return self.scale(-1)

    def __sub__(self, other: VectorPolynomial) -> VectorPolynomial:
        return self + (-other)

    def evaluate(self, free: Sequence[int]) -> Vector:
        acc = _vzero(self.vector_dim, self.order)
        for e, v in self.terms.items():
            mono = 1
            for xi, ei in zip(free, e):
                mono *= xi ** ei
            if mono:
                acc = _vadd(acc, _vscale(mono, v))
        return acc

    def shift(self, h: Sequence[int]) -> VectorPolynomial:
        """x -> p(x + h) by binomial expansion of every monomial."""
        if not any(h):
            return self
        out: dict[Exponent, Vector] = {}
        for e, v in self.terms.items():
            per_var = [
                [(b, comb(ei, b) * hi ** (ei - b)) for b in range(ei + 1) if hi or b == ei]
                for ei, hi in zip(e, h)
            ]
            for choice in product(*per_var):
                mult = 1
                for _, c in choice:
                    mult *= c
                exp = tuple(b for b, _ in choice)
                w = _vscale(mult, v)
                out[exp] = _vadd(out[exp], w) if exp in out else w
        return VectorPolynomial._raw(self.nvars, self.vector_dim, self.order, out)

    def mul_scalar_poly(self, other: VectorPolynomial) -> VectorPolynomial:
        """Product with a scalar (k = 1) polynomial."""
        if other.vector_dim != 1:
            raise StructuralError("can only multiply by a scalar polynomial")
        out: dict[Exponent, Vector] = {}
        for e1, v1 in self.terms.items():
            for e2, (c,) in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                w = _vscale(c, v1)
                out[e] = _vadd(out[e], w) if e in out else w
        return VectorPolynomial._raw(self.nvars, self.vector_dim, self.order, out)

    def component(self, j: int) -> VectorPolynomial:
        return VectorPolynomial._raw(self.nvars, 1, self.order, {e: (v[j],) for e, v in self.terms.items()})

    def functional(self, u: Sequence) -> VectorPolynomial:
        out = {}
        for e, v in self.terms.items():
            s = Cyclotomic.zero(self.order)
            for a, b in zip(u, v):
                s = s + a * b
            out[e] = (s,)
        return VectorPolynomial._raw(self.nvars, 1, self.order, out)

    def homogeneous_part(self, d: int) -> VectorPolynomial:
        return VectorPolynomial._raw(
            self.nvars, self.vector_dim, self.order, {e: v for e, v in self.terms.items() if sum(e) == d}
        )

    def to_order(self, order: int) -> VectorPolynomial:
        return VectorPolynomial._raw(
            self.nvars, self.vector_dim, order, {e: tuple(c.to_order(order) for c in v) for e, v in self.terms.items()}
        )

    def __repr__(self) -> str:
        return f"VectorPolynomial({self.sorted_terms()})"


def monomials_up_to(nvars: int, degree: int) -> list[Exponent]:
    """All exponents of total degree <= degree, in a fixed order."""
    if degree < 0:
        return []
    out = []

    def rec(prefix, remaining, left):
        if left == 0:
            out.append(tuple(prefix))
            return
        for e in range(remaining + 1):
            rec(prefix + [e], remaining - e, left - 1)

    rec([], degree, nvars)
    return sorted(out, key=lambda e: (sum(e), e))


class ExpoPoly:
    """Canonical ``sum_i m_i * p_i`` on a finitely generated abelian group.

    Construct with :meth:`from_terms`, which merges duplicate exponentials,
    drops zero polynomials and sorts by the exponential order; two values
    compare equal iff they are the same function.
    """

    __slots__ = ("group", "vector_dim", "order", "terms", "_hash")

    def __init__(self, group: GroupSpec, vector_dim: int, order: int, terms: tuple):
        # trusted constructor: terms already canonical
        self.group = group
        self.vector_dim = vector_dim
        self.order = order
        self.terms = terms
        self._hash = None

    @classmethod
    def from_terms(cls, group: GroupSpec, vector_dim: int, order: int, pairs: Iterable[tuple[Exponential, VectorPolynomial]]) -> ExpoPoly:
        merged: dict[Exponential, VectorPolynomial] = {}
        for m, p in pairs:
            if m.group != group:
                raise StructuralError(f"exponential on {m.group}, expected {group}")
            if m.order != order or p.order != order:
                raise StructuralError(f"scalar field mismatch: expected Q(zeta_{order})")
            if p.nvars != group.free_rank or p.vector_dim != vector_dim:
                raise StructuralError("polynomial shape does not match group/vector_dim")
            merged[m] = merged[m] + p if m in merged else p
        terms = tuple(sorted(((m, p) for m, p in merged.items() if not p.is_zero()), key=lambda t: t[0].sort_key()))
        return cls(group, vector_dim, order, terms)

    def canonical(self) -> ExpoPoly:
        return ExpoPoly.from_terms(self.group, self.vector_dim, self.order, self.terms)

    # -- simple constructors --------------------------------------------------

    @classmethod
    def zero(cls, group: GroupSpec, vector_dim: int, order: int) -> ExpoPoly:
        return cls(group, vector_dim, order, ())

    @classmethod
    def constant(cls, group: GroupSpec, vec: Sequence, order: int) -> ExpoPoly:
        p = VectorPolynomial.constant(group.free_rank, vec, order)
        return cls.from_terms(group, len(vec), order, [(Exponential.trivial(group, order), p)])

    @classmethod
    def polynomial(cls, group: GroupSpec, poly: VectorPolynomial) -> ExpoPoly:
        return cls.from_terms(group, poly.vector_dim, poly.order, [(Exponential.trivial(group, poly.order), poly)])

    @classmethod
    def exponential(cls, m: Exponential, vec: Sequence | None = None) -> ExpoPoly:
        vec = vec if vec is not None else (Cyclotomic.one(m.order),)
        p = VectorPolynomial.constant(m.group.free_rank, vec, m.order)
        return cls.from_terms(m.group, len(vec), m.order, [(m, p)])

    # -- structure ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def exponentials(self) -> list[Exponential]:
        return [m for m, _ in self.terms]

    def term_for(self, m: Exponential) -> VectorPolynomial | None:
        for mm, p in self.terms:
            if mm == m:
                return p
        return None

    def is_generalized_polynomial(self) -> bool:
        return all(m.is_trivial() for m, _ in self.terms)

    @property
    def max_degree(self) -> int:
        return max((p.degree for _, p in self.terms), default=-1)

    def _check_compatible(self, other: ExpoPoly) -> None:
        if self.group != other.group:
            raise StructuralError(f"group mismatch: {self.group} vs {other.group}")
        if self.vector_dim != other.vector_dim:
            raise StructuralError(f"vector_dim mismatch: {self.vector_dim} vs {other.vector_dim}")
        if self.order != other.order:
            raise StructuralError(f"scalar field mismatch: Q(zeta_{self.order}) vs Q(zeta_{other.order})")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExpoPoly):
            return NotImplemented
        return (
            self.group == other.group
            and self.vector_dim == other.vector_dim
            and self.order == other.order
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.group, self.vector_dim, self.terms))
        return self._hash

    # -- evaluation and linear structure ---------------------------------------

    def __call__(self, x: GroupElement) -> Vector:
        return evaluate(self, x)

    def __add__(self, other: ExpoPoly) -> ExpoPoly:
        self._check_compatible(other)
        return ExpoPoly.from_terms(self.group, self.vector_dim, self.order, self.terms + other.terms)

    def __neg__(self) -> ExpoPoly:
        return self.scale(-1)

    def __sub__(self, other: ExpoPoly) -> ExpoPoly:
        return self + (-other)

    def scale(self, c) -> ExpoPoly:
        c = Cyclotomic.coerce(c, self.order)
        if c.is_zero():
            return ExpoPoly.zero(self.group, self.vector_dim, self.order)
        return ExpoPoly(self.group, self.vector_dim, self.order, tuple((m, p.scale(c)) for m, p in self.terms))

    def __mul__(self, other: ExpoPoly) -> ExpoPoly:
        """Pointwise product; at least one factor must be scalar-valued."""
        if not isinstance(other, ExpoPoly):
            return self.scale(other)
        if self.group != other.group or self.order != other.order:
            raise StructuralError("product of functions on different groups/fields")
        if other.vector_dim == 1:
            a, b = self, other
        elif self.vector_dim == 1:
            a, b = other, self
        else:
            raise StructuralError("cannot multiply two vector-valued functions")
        pairs = [(m1 * m2, p1.mul_scalar_poly(p2)) for m1, p1 in a.terms for m2, p2 in b.terms]
        return ExpoPoly.from_terms(self.group, a.vector_dim, self.order, pairs)

    def to_order(self, order: int) -> ExpoPoly:
        return ExpoPoly.from_terms(
            self.group, self.vector_dim, order, [(m.to_order(order), p.to_order(order)) for m, p in self.terms]
        )

    def component(self, j: int) -> ExpoPoly:
        return ExpoPoly.from_terms(self.group, 1, self.order, [(m, p.component(j)) for m, p in self.terms])

    @classmethod
    def stack(cls, comps: Sequence[ExpoPoly]) -> ExpoPoly:
        """Assemble scalar functions into one vector-valued function."""
        if not comps:
            raise StructuralError("need at least one component")
        g, n = comps[0].group, comps[0].order
        k = len(comps)
        zero = Cyclotomic.zero(n)
        pairs = []
        for j, c in enumerate(comps):
            if c.vector_dim != 1 or c.group != g or c.order != n:
                raise StructuralError("stack needs scalar functions on one group")
            for m, p in c.terms:
                terms = {e: tuple(v[0] if i == j else zero for i in range(k)) for e, v in p.terms.items()}
                pairs.append((m, VectorPolynomial._raw(p.nvars, k, n, terms)))
        return cls.from_terms(g, k, n, pairs)

    def __repr__(self) -> str:
        from .dsl import format_expopoly

        return f"ExpoPoly<{self.group}, k={self.vector_dim}, N={self.order}>({format_expopoly(self)})"


def evaluate(f: ExpoPoly, x: GroupElement) -> Vector:
    f.group.check(x)
    acc = _vzero(f.vector_dim, f.order)
    for m, p in f.terms:
        acc = _vadd(acc, _vscale(m(x), p.evaluate(x.free)))
    return acc


def translate(f: ExpoPoly, g: GroupElement) -> ExpoPoly:
    """x -> f(x + g); per term T_g(m p) = m(g) m T_g p."""
    f.group.check(g)
    if g.is_zero():
        return f
    return ExpoPoly.from_terms(
        f.group, f.vector_dim, f.order, [(m, p.shift(g.free).scale(m(g))) for m, p in f.terms]
    )


def add_scale(f: ExpoPoly, g: ExpoPoly, alpha, beta) -> ExpoPoly:
    f._check_compatible(g)
    return f.scale(alpha) + g.scale(beta)


def compose_functional(f: ExpoPoly, u: Sequence) -> ExpoPoly:
    """Scalar function x -> sum_j u_j f_j(x)."""
    if len(u) != f.vector_dim:
        raise StructuralError(f"functional of length {len(u)} on {f.vector_dim}-vector values")
    u = [Cyclotomic.coerce(c, f.order) for c in u]
    return ExpoPoly.from_terms(f.group, 1, f.order, [(m, p.functional(u)) for m, p in f.terms])


class DifferenceOperator:
    """Finite linear combination ``sum_t c_t T_{g_t}`` of translations."""

    __slots__ = ("group", "order", "terms")

    def __init__(self, group: GroupSpec, order: int, terms: Iterable[tuple] = ()):
        acc: dict[GroupElement, Cyclotomic] = {}
        for c, g in terms:
            group.check(g)
            c = Cyclotomic.coerce(c, order)
            acc[g] = acc[g] + c if g in acc else c
        self.group = group
        self.order = order
        self.terms = tuple(sorted(((c, g) for g, c in acc.items() if c), key=lambda t: t[1].sort_key()))

    @classmethod
    def zero(cls, group: GroupSpec, order: int) -> DifferenceOperator:
        return cls(group, order)

    @classmethod
    def translation(cls, g: GroupElement, order: int, coeff=1) -> DifferenceOperator:
        return cls(g.group, order, [(coeff, g)])

    @classmethod
    def identity(cls, group: GroupSpec, order: int) -> DifferenceOperator:
        return cls.translation(group.zero(), order)

    @classmethod
    def delta(cls, g: GroupElement, order: int) -> DifferenceOperator:
        """Delta_g = T_g - T_0."""
        return cls(g.group, order, [(1, g), (-1, g.group.zero())])

    def is_zero(self) -> bool:
        return not self.terms

    def shifts(self) -> list[GroupElement]:
        return [g for _, g in self.terms]

    def _check(self, other: DifferenceOperator) -> None:
        if self.group != other.group or self.order != other.order:
            raise StructuralError("difference operators on different groups/fields")

    def __add__(self, other: DifferenceOperator) -> DifferenceOperator:
        self._check(other)
        return DifferenceOperator(self.group, self.order, self.terms + other.terms)

    def scale(self, c) -> DifferenceOperator:
        return DifferenceOperator(self.group, self.order, [(c * a, g) for a, g in self.terms])

    def __neg__(self) -> DifferenceOperator:
        return self.scale(-1)

    def __sub__(self, other: DifferenceOperator) -> DifferenceOperator:
        return self + (-other)

    def __matmul__(self, other: DifferenceOperator) -> DifferenceOperator:
        return compose_ops(self, other)

    def __call__(self, f: ExpoPoly) -> ExpoPoly:
        return apply_diff_op(self, f)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DifferenceOperator):
            return NotImplemented
        return self.group == other.group and self.order == other.order and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.group, self.terms))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*T[{g}]" for c, g in self.terms)


def compose_ops(d1: DifferenceOperator, d2: DifferenceOperator) -> DifferenceOperator:
    """Formal product: shifts add, coefficients multiply."""
    d1._check(d2)
    return DifferenceOperator(d1.group, d1.order, [(a * b, g + h) for a, g in d1.terms for b, h in d2.terms])


def apply_diff_op(d: DifferenceOperator, f: ExpoPoly, cache: dict | None = None) -> ExpoPoly:
    """sum_t c_t T_{g_t} f in canonical form.

    ``cache`` optionally memoizes translates of ``f`` by shift across calls
    that share the same ``f``.
    """
    if d.group != f.group:
        raise StructuralError(f"operator on {d.group} applied to function on {f.group}")
    if d.order != f.order:
        raise StructuralError("operator and function use different scalar fields")
    pairs = []
    for c, g in d.terms:
        if cache is not None:
            tg = cache.get(g)
            if tg is None:
                tg = cache[g] = translate(f, g)
        else:
            tg = translate(f, g)
        pairs.extend((m, p.scale(c)) for m, p in tg.terms)
    return ExpoPoly.from_terms(f.group, f.vector_dim, f.order, pairs)
