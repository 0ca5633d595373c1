"""Structure theory of exponential polynomials as algorithms.

Degrees, homogeneous decomposition and polarization of generalized
polynomials; translate spans and their dimensions; classification;
component extraction by difference operators and by interpolation; the
spectral set; and the lift of a vector-valued function to a scalar one on
Z^k x G.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

from .cyclotomic import Cyclotomic
from .errors import (
    DecompositionFailureError,
    IllPosedInstanceError,
    NoCertificateError,
    NotGeneralizedPolynomialError,
    NotInLiftedFormError,
    PreconditionError,
    StructuralError,
)
from .expopoly import (
    DifferenceOperator,
    Exponential,
    ExpoPoly,
    VectorPolynomial,
    apply_diff_op,
    compose_functional,
    evaluate,
    monomials_up_to,
    translate,
)
from .groups import GroupElement, GroupSpec
from .linalg import IncrementalBasis, nullspace, row_reduce


@dataclass(frozen=True)
class FunctionOracle:
    """Black-box access to a function G -> Q(zeta_N)^k."""

    group: GroupSpec
    vector_dim: int
    order: int
    eval: Callable[[GroupElement], tuple]

    def __call__(self, x: GroupElement) -> tuple:
        return self.eval(x)

    @classmethod
    def from_expopoly(cls, f: ExpoPoly) -> FunctionOracle:
        return cls(f.group, f.vector_dim, f.order, lambda x: evaluate(f, x))


def _as_oracle(f) -> FunctionOracle:
    return FunctionOracle.from_expopoly(f) if isinstance(f, ExpoPoly) else f


def _vzero(k, order):
    return (Cyclotomic.zero(order),) * k


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vscale(c, a):
    return tuple(c * x for x in a)


# -- degree --------------------------------------------------------------------


def degree(f: ExpoPoly) -> int:
    """Degree of a generalized polynomial; -1 for the zero function."""
    if f.is_zero():
        return -1
    if not f.is_generalized_polynomial():
        raise NotGeneralizedPolynomialError("function has a nontrivial exponential factor; no finite-order difference annihilates it")
    return f.max_degree


def _iterated_difference(f: FunctionOracle, x: GroupElement, steps: Sequence[GroupElement]) -> tuple:
    """Delta_{a_1} ... Delta_{a_m} f(x) via the 2^m-term signed expansion."""
    acc = _vzero(f.vector_dim, f.order)
    m = len(steps)
    for theta in itertools.product((0, 1), repeat=m):
        point = x
        for t, a in zip(theta, steps):
            if t:
                point = point + a
        sign = -1 if (m - sum(theta)) % 2 else 1
        acc = _vadd(acc, _vscale(sign, f(point)))
    return acc


def _random_element(rng: random.Random, group: GroupSpec, box: int) -> GroupElement:
    return GroupElement(
        group,
        tuple(rng.randint(-box, box) for _ in range(group.free_rank)),
        tuple(rng.randrange(n) for n in group.torsion_orders),
    )


def check_genpoly_blackbox(f, n: int, trials: int, box: int, seed: int = 0) -> bool:
    """Sample (n+1)-fold differences of f at random points.

    True means every sampled difference vanished; this can be a false
    positive, never a false negative.
    """
    if n < 0 or trials < 1:
        raise PreconditionError("need n >= 0 and trials >= 1")
    f = _as_oracle(f)
    rng = random.Random(seed)
    for _ in range(trials):
        x = _random_element(rng, f.group, box)
        steps = [_random_element(rng, f.group, box) for _ in range(n + 1)]
        if any(_iterated_difference(f, x, steps)):
            return False
    return True


# -- homogeneous parts and polarization ----------------------------------------


def _vandermonde_inverse(n: int) -> list[list[Fraction]]:
    """Inverse of V[k-1][i] = k^i for k = 1..n+1, i = 0..n."""
    size = n + 1
    aug = [[Fraction(k) ** i for i in range(size)] + [Fraction(int(j == r)) for j in range(size)] for r, k in enumerate(range(1, size + 1))]
    red, pivots = row_reduce(aug)
    return [row[size:] for row in red]


def homogeneous_parts(f, n: int, x: GroupElement) -> list[tuple]:
    """(f_0(x), ..., f_n(x)) with f(kx) = sum_i k^i f_i(x), solved for k = 1..n+1."""
    f = _as_oracle(f)
    samples = [f(k * x) for k in range(1, n + 2)]
    vinv = _vandermonde_inverse(n)
    parts = []
    for i in range(n + 1):
        acc = _vzero(f.vector_dim, f.order)
        for k in range(n + 1):
            if vinv[i][k]:
                acc = _vadd(acc, _vscale(vinv[i][k], samples[k]))
        parts.append(acc)
    return parts


def polarize(f_i, i: int, xs: Sequence[GroupElement]) -> tuple:
    """Symmetric i-additive A with A(x, ..., x) = f_i(x): (1/i!) Delta_{x_1}..Delta_{x_i} f_i(0)."""
    f_i = _as_oracle(f_i)
    if i == 0:
        return f_i(f_i.group.zero())
    if len(xs) != i:
        raise PreconditionError(f"polarization of degree {i} needs {i} points")
    diff = _iterated_difference(f_i, f_i.group.zero(), xs)
    return _vscale(Fraction(1, math.factorial(i)), diff)


# -- translate spans -----------------------------------------------------------


class _Layout:
    """Coordinates of functions sum_i m_i p_i with deg p_i <= d_i as flat vectors."""

    def __init__(self, f: ExpoPoly):
        self.group = f.group
        self.k = f.vector_dim
        self.order = f.order
        self.blocks: dict[Exponential, tuple[int, dict]] = {}
        offset = 0
        for m, p in f.terms:
            monos = monomials_up_to(f.group.free_rank, p.degree)
            index = {e: offset + j * self.k for j, e in enumerate(monos)}
            self.blocks[m] = (p.degree, index)
            offset += len(monos) * self.k
        self.size = offset

    def vector(self, h: ExpoPoly) -> list | None:
        """Flat coordinates of h, or None if h leaves the ambient space."""
        out = [Cyclotomic.zero(self.order)] * self.size
        for m, p in h.terms:
            block = self.blocks.get(m)
            if block is None:
                return None
            _, index = block
            for e, vec in p.terms.items():
                if e not in index:
                    return None
                base = index[e]
                for j, c in enumerate(vec):
                    out[base + j] = c
        return out


@dataclass
class TranslateSpan:
    """Basis of the span of all translates of a function.

    ``closure`` maps each generator shift to the matrix C with
    ``T_g basis[j] = sum_l C[l][j] basis[l]``.
    """

    basis: list[ExpoPoly]
    dim: int
    closure: dict = field(default_factory=dict, repr=False)
    _layout: _Layout | None = field(default=None, repr=False)
    _echelon: IncrementalBasis | None = field(default=None, repr=False)

    def coordinates(self, h: ExpoPoly) -> list | None:
        if self._layout is None:
            return [] if h.is_zero() else None
        v = self._layout.vector(h)
        if v is None:
            return None
        return self._echelon.coordinates(v)

    def contains(self, h: ExpoPoly) -> bool:
        return self.coordinates(h) is not None


def _shift_generators(group: GroupSpec) -> list[GroupElement]:
    gens = []
    for i in range(group.free_rank):
        e = group.free_generator(i)
        gens.extend([e, -e])
    gens.extend(group.torsion_generator(j) for j in range(len(group.torsion_orders)))
    return gens


def translate_span(f: ExpoPoly) -> TranslateSpan:
    """Close {f} under translation by generators, keeping exactly independent translates."""
    if f.is_zero():
        return TranslateSpan([], 0)
    layout = _Layout(f)
    ech = IncrementalBasis(layout.size, zero=Cyclotomic.zero(f.order), one=Cyclotomic.one(f.order))
    basis: list[ExpoPoly] = []
    gens = _shift_generators(f.group)
    queue = [f]
    while queue:
        h = queue.pop(0)
        if ech.add(layout.vector(h)):
            basis.append(h)
            queue.extend(translate(h, g) for g in gens)
    span = TranslateSpan(basis, len(basis), {}, layout, ech)
    for g in gens:
        cols = [span.coordinates(translate(b, g)) for b in basis]
        if any(c is None for c in cols):
            raise AssertionError("translate span is not closed under translation")
        span.closure[g] = [[cols[j][l] for j in range(len(basis))] for l in range(len(basis))]
    return span


# -- classification --------------------------------------------------------------


@dataclass(frozen=True)
class ClassificationReport:
    is_generalized: bool
    is_polynomial: bool
    is_w_polynomial: bool
    is_local_polynomial: bool
    degree: int | None
    dim_L_f: int

    def __post_init__(self):
        chain = [self.is_polynomial, self.is_w_polynomial, self.is_generalized, self.is_local_polynomial]
        for stronger, weaker in zip(chain, chain[1:]):
            if stronger and not weaker:
                raise AssertionError(f"classification chain violated: {self}")

    def to_dict(self) -> dict:
        return {
            "is_generalized": self.is_generalized,
            "is_polynomial": self.is_polynomial,
            "is_w_polynomial": self.is_w_polynomial,
            "is_local_polynomial": self.is_local_polynomial,
            "degree": self.degree,
            "dim_L_f": self.dim_L_f,
        }


def _generator_differences_vanish(f: ExpoPoly) -> bool:
    """Delta_{a_1}..Delta_{a_{d+1}} f = 0 for all generator tuples, d = max degree.

    On a finitely generated group this decides local polynomiality: a term
    m p with m nontrivial on some generator a survives every power of Delta_a.
    """
    if f.is_zero():
        return True
    gens = f.group.generators()
    deltas = [DifferenceOperator.delta(g, f.order) for g in gens]
    level = [(0, f)]
    for _ in range(f.max_degree + 1):
        nxt = []
        for start, h in level:
            for i in range(start, len(gens)):
                dh = apply_diff_op(deltas[i], h)
                if not dh.is_zero():
                    nxt.append((i, dh))
        if not nxt:
            return True
        level = nxt
    return False


def classify(f: ExpoPoly) -> ClassificationReport:
    # Each flag has its own route; with G finitely generated and k finite
    # they must coincide, which the report's postcondition and tests check.
    span = translate_span(f)
    gen = f.is_generalized_polynomial()
    e = [[Cyclotomic.one(f.order) if i == j else Cyclotomic.zero(f.order) for i in range(f.vector_dim)] for j in range(f.vector_dim)]
    w_poly = all(compose_functional(f, u).is_generalized_polynomial() for u in e)
    return ClassificationReport(
        is_generalized=gen,
        is_polynomial=gen and span.dim < math.inf,
        is_w_polynomial=w_poly,
        is_local_polynomial=_generator_differences_vanish(f),
        degree=degree(f) if gen else None,
        dim_L_f=span.dim,
    )


def degree_certificate(f: ExpoPoly) -> list[Cyclotomic]:
    """A coordinate functional u with deg(u o f) = deg f."""
    if f.is_zero():
        raise NoCertificateError("the zero function has no degree certificate")
    d = degree(f)
    (_, p), = f.terms
    top = next(vec for e, vec in p.sorted_terms() if sum(e) == d)
    j = next(j for j, c in enumerate(top) if c)
    return [Cyclotomic.one(f.order) if i == j else Cyclotomic.zero(f.order) for i in range(f.vector_dim)]


def n_of_f_bounds(f: ExpoPoly, n_random: int = 20, seed: int = 0) -> tuple[int, int]:
    """(max dim L_{u o f} over sampled u, dim L_f); N(f) lies between them."""
    if not f.is_generalized_polynomial():
        raise NotGeneralizedPolynomialError("bounds are defined for generalized polynomials")
    k, n = f.vector_dim, f.order
    rng = random.Random(seed)
    functionals = [[int(i == j) for i in range(k)] for j in range(k)]
    while len(functionals) < k + n_random:
        u = [rng.randint(-3, 3) for _ in range(k)]
        if any(u):
            functionals.append(u)
    lower = max(translate_span(compose_functional(f, u)).dim for u in functionals)
    upper = translate_span(f).dim
    if not f.is_zero() and not degree(f) < lower:
        raise AssertionError("deg f < dim L_{u o f} failed")
    return lower, upper


# -- difference-operator extraction ------------------------------------------------


def _separating_element(a: Exponential, b: Exponential) -> GroupElement:
    for g in a.group.generators():
        if a(g) != b(g):
            return g
    raise PreconditionError("exponentials agree on every generator, so they are equal")


def _check_distinct(ms: Sequence[Exponential]) -> None:
    if len(set(ms)) != len(ms):
        raise PreconditionError("exponentials must be pairwise distinct")
    if ms:
        g, n = ms[0].group, ms[0].order
        if any(m.group != g or m.order != n for m in ms):
            raise StructuralError("exponentials must share group and scalar field")


def degree_profiles(n: int, s: int) -> list[tuple[int, ...]]:
    """All (d_1..d_n) with d_i >= -1 and sum d_i = s."""
    total = s + n
    out = []
    for cuts in itertools.combinations(range(total + n - 1), n - 1):
        parts, prev = [], -1
        for c in cuts + (total + n - 1,):
            parts.append(c - prev - 1)
            prev = c
        out.append(tuple(p - 1 for p in parts))
    return out


class _SeparatorBuilder:
    """Operator isolating component b of f = sum p_i m_i whenever deg p_i <= d_i.

    With d_b >= 0 and some other d_a >= 0, choose g with m_a(g) != m_b(g) and
    put D_0 = T_g - m_a(g) T_0, L_b = T_g - m_b(g) T_0. Then D_0 lowers the
    bound on component a, L_b the bound on component b, and

        p_b m_b = c (E D_0 f - D L_b f),   c = 1 / (m_b(g) - m_a(g)),

    where E and D isolate component b for the two lowered profiles.
    """

    def __init__(self, ms: Sequence[Exponential]):
        self.ms = list(ms)
        self.group = ms[0].group
        self.order = ms[0].order
        self.memo: dict = {}

    def op(self, b: int, d: tuple[int, ...]) -> DifferenceOperator:
        key = (b, d)
        if key in self.memo:
            return self.memo[key]
        group, order = self.group, self.order
        if d[b] < 0:
            result = DifferenceOperator.zero(group, order)
        else:
            others = [a for a in range(len(d)) if a != b and d[a] >= 0]
            if not others:
                result = DifferenceOperator.identity(group, order)
            else:
                a = others[0]
                ma, mb = self.ms[a], self.ms[b]
                g = _separating_element(ma, mb)
                zero = group.zero()
                d0 = DifferenceOperator(group, order, [(1, g), (-ma(g), zero)])
                lb = DifferenceOperator(group, order, [(1, g), (-mb(g), zero)])
                c = (mb(g) - ma(g)).inverse()
                lower_a = tuple(v - 1 if i == a else v for i, v in enumerate(d))
                lower_b = tuple(v - 1 if i == b else v for i, v in enumerate(d))
                result = (self.op(b, lower_a) @ d0 - self.op(b, lower_b) @ lb).scale(c)
        self.memo[key] = result
        return result

    def profile_operators(self, s: int) -> dict[tuple, list[DifferenceOperator]]:
        n = len(self.ms)
        return {d: [self.op(b, d) for b in range(n)] for d in degree_profiles(n, s)}


def lemma2_operators(ms: Sequence[Exponential], s: int) -> list[DifferenceOperator]:
    """A finite operator set D: for every f = sum p_i m_i with sum deg p_i <= s and
    every i, some D in D maps f to p_i m_i."""
    ms = list(ms)
    if not ms:
        raise PreconditionError("need at least one exponential")
    _check_distinct(ms)
    n = len(ms)
    if s < -n:
        raise PreconditionError(f"s must be >= -n = {-n}")
    group, order = ms[0].group, ms[0].order
    if n == 1:
        return [DifferenceOperator.identity(group, order)]
    if s == -n:
        return [DifferenceOperator.zero(group, order)]
    seen, out = set(), []
    for ops in _SeparatorBuilder(ms).profile_operators(s).values():
        for d in ops:
            if d not in seen:
                seen.add(d)
                out.append(d)
    return out


def _single_component(h: ExpoPoly, m: Exponential, max_deg: int) -> bool:
    if h.is_zero():
        return True
    return len(h.terms) == 1 and h.terms[0][0] == m and h.terms[0][1].degree <= max_deg


def _binomial_poly(nvars: int, alpha: tuple, order: int) -> VectorPolynomial:
    """prod_i C(x_i, alpha_i) in the monomial basis."""
    poly = {(0,) * nvars: (Fraction(1),)}
    for i, a in enumerate(alpha):
        # falling factorial x(x-1)...(x-a+1) / a!
        coeffs = [Fraction(1)]
        for t in range(a):
            nxt = [Fraction(0)] * (len(coeffs) + 1)
            for j, c in enumerate(coeffs):
                nxt[j + 1] += c
                nxt[j] -= t * c
            coeffs = nxt
        scale = Fraction(1, math.factorial(a))
        new = {}
        for e, (c0,) in poly.items():
            for j, c in enumerate(coeffs):
                if c:
                    ee = tuple(v + j if idx == i else v for idx, v in enumerate(e))
                    new[ee] = (new.get(ee, (Fraction(0),))[0] + c0 * c * scale,)
        poly = new
    return VectorPolynomial(nvars, 1, order, poly)


class _TableFunction:
    """Oracle values memoized for the duration of one extraction."""

    def __init__(self, f: FunctionOracle):
        self.f = f
        self.values: dict = {}

    def __call__(self, x: GroupElement):
        v = self.values.get(x)
        if v is None:
            v = self.values[x] = self.f(x)
        return v

    def apply(self, d: DifferenceOperator, x: GroupElement):
        acc = _vzero(self.f.vector_dim, self.f.order)
        for c, g in d.terms:
            acc = _vadd(acc, _vscale(c, self(x + g)))
        return acc


def _interpolate_component(values: dict, m: Exponential, max_deg: int, group: GroupSpec, k: int, order: int, side: int) -> ExpoPoly | None:
    """Fit q m with deg q <= max_deg to values on the grid [0, side)^r x torsion, or None."""
    if max_deg < 0:
        return ExpoPoly.zero(group, k, order) if not any(any(v) for v in values.values()) else None
    r = group.free_rank
    w = {}
    for x, v in values.items():
        inv = m(x).inverse()
        w[x] = tuple(inv * c for c in v)
    # independence of torsion
    tors0 = (0,) * len(group.torsion_orders)
    base = {}
    for x, v in w.items():
        if x.torsion == tors0:
            base[x.free] = v
    for x, v in w.items():
        if base[x.free] != v:
            return None
    # Newton forward differences at the origin
    pairs = []
    for alpha in monomials_up_to(r, max_deg):
        coeff = _vzero(k, order)
        for beta in itertools.product(*(range(a + 1) for a in alpha)):
            sign = (-1) ** (sum(alpha) - sum(beta))
            weight = sign * math.prod(math.comb(a, b) for a, b in zip(alpha, beta))
            coeff = _vadd(coeff, _vscale(weight, base[beta]))
        if any(coeff):
            bp = _binomial_poly(r, alpha, order)
            pairs.append(VectorPolynomial._raw(r, k, order, {e: _vscale(c, coeff) for e, (c,) in bp.terms.items()}))
    poly = VectorPolynomial(r, k, order, {})
    for p in pairs:
        poly = poly + p
    q = ExpoPoly.from_terms(group, k, order, [(m, poly)])
    for x, v in values.items():
        if evaluate(q, x) != v:
            return None
    return q


def extract_components_ops(f: Union[ExpoPoly, FunctionOracle], ms: Sequence[Exponential], s: int) -> list[ExpoPoly]:
    """Components (p_1 m_1, ..., p_n m_n) of f obtained from the separating difference operators.

    Operators are grouped by the degree profile they were built for; the
    first profile whose outputs each have the form q_i m_i (deg q_i within
    the profile) and sum back to f is returned. By uniqueness of the
    representation those are the true components.
    """
    ms = list(ms)
    _check_distinct(ms)
    n = len(ms)
    if s < -n:
        raise PreconditionError(f"s must be >= -n = {-n}")
    group, order, k = f.group, f.order, f.vector_dim
    if any(m.group != group or m.order != order for m in ms):
        raise StructuralError("exponentials do not match the function's group/field")
    if s == -n:
        zero = ExpoPoly.zero(group, k, order)
        if isinstance(f, ExpoPoly) and not f.is_zero():
            raise DecompositionFailureError("s = -n forces f = 0")
        return [zero] * n
    if n == 1:
        profiles = {(s,): [DifferenceOperator.identity(group, order)]}
    else:
        profiles = _SeparatorBuilder(ms).profile_operators(s)

    if isinstance(f, ExpoPoly):
        cache: dict = {}
        for d, ops in profiles.items():
            outs = []
            for b, op in enumerate(ops):
                h = apply_diff_op(op, f, cache)
                if not _single_component(h, ms[b], d[b]):
                    break
                outs.append(h)
            else:
                total = ExpoPoly.zero(group, k, order)
                for h in outs:
                    total = total + h
                if total == f:
                    return outs
        raise DecompositionFailureError("no degree profile reproduces f; is f = sum p_i m_i with sum deg p_i <= s?")

    # Oracle input: operators are applied pointwise on a finite grid. Two
    # functions of this shape agreeing on 2(s+n) consecutive points per free
    # axis (and every torsion residue) are equal.
    table = _TableFunction(f)
    side = 2 * (s + n)
    points = group.box(0, side - 1)
    for d, ops in profiles.items():
        comps = []
        for b, op in enumerate(ops):
            vals = {x: table.apply(op, x) for x in points}
            q = _interpolate_component(vals, ms[b], d[b], group, k, order, side)
            if q is None:
                break
            comps.append(q)
        else:
            if all(_vsum([evaluate(c, x) for c in comps], k, order) == table(x) for x in points):
                return comps
    raise DecompositionFailureError("no degree profile reproduces the oracle on the sample grid")


def _vsum(vecs, k, order):
    acc = _vzero(k, order)
    for v in vecs:
        acc = _vadd(acc, v)
    return acc


class _Echelon:
    """Forward elimination over rows fed one at a time (augmented with k right-hand sides)."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, list] = {}  # pivot column -> normalized row

    def add(self, row: list) -> None:
        row = list(row)
        for c in range(self.ncols):
            if not row[c]:
                continue
            piv = self.rows.get(c)
            if piv is None:
                inv = 1 / row[c]
                self.rows[c] = [v * inv if v else v for v in row]
                return
            fac = row[c]
            row = [x - fac * y if y else x for x, y in zip(row, piv)]
        if any(row[self.ncols:]):
            raise DecompositionFailureError("interpolation system is inconsistent: f is not of the asserted form")

    @property
    def rank(self) -> int:
        return len(self.rows)

    def back_substitute(self, nrhs: int) -> list[list]:
        sol = [None] * self.ncols
        for c in sorted(self.rows, reverse=True):
            row = self.rows[c]
            vals = list(row[self.ncols:])
            for cc in range(c + 1, self.ncols):
                if row[cc]:
                    vals = [v - row[cc] * w for v, w in zip(vals, sol[cc])]
            sol[c] = vals
        return sol


def extract_components_solve(f: Union[ExpoPoly, FunctionOracle], ms: Sequence[Exponential], s: int) -> list[ExpoPoly]:
    """Components of f by exact interpolation over an expanding box.

    Each p_i gets unknown coefficients up to total degree s + n - 1, the
    largest degree compatible with sum deg p_i <= s when the other
    components vanish.
    """
    ms = list(ms)
    _check_distinct(ms)
    n = len(ms)
    f = _as_oracle(f)
    group, order, k = f.group, f.order, f.vector_dim
    r = group.free_rank
    if s < -n:
        raise PreconditionError(f"s must be >= -n = {-n}")
    max_deg = s + n - 1
    if max_deg < 0:
        return [ExpoPoly.zero(group, k, order) for _ in ms]
    monos = monomials_up_to(r, max_deg)
    ncols = n * len(monos)
    ntors = math.prod(group.torsion_orders)
    max_radius = 2 * (s + 2) * (n + 1)
    radius = 0
    while (2 * radius + 1) ** r * ntors < ncols:
        radius += 1
    def row_at(x):
        row = []
        for m in ms:
            mx = m(x)
            for e in monos:
                mono = math.prod(xi ** ei for xi, ei in zip(x.free, e))
                row.append(mx * mono)
        return row

    ech = _Echelon(ncols)
    seen: set = set()
    box: list = []
    while True:
        for x in group.box(-radius, radius):
            if x in seen:
                continue
            seen.add(x)
            box.append(x)
            ech.add(row_at(x) + list(f(x)))
        if ech.rank == ncols:
            break
        if 2 * radius + 1 >= 2 * max_radius or r == 0:
            raise IllPosedInstanceError(f"interpolation rank {ech.rank} < {ncols} on the largest box (side {2 * radius + 1})")
        radius += 1
    sol = ech.back_substitute(k)

    comps = []
    for i, m in enumerate(ms):
        terms = {}
        for j, e in enumerate(monos):
            terms[e] = tuple(sol[i * len(monos) + j])
        comps.append(ExpoPoly.from_terms(group, k, order, [(m, VectorPolynomial(r, k, order, terms))]))
    return comps


# -- spectral set ----------------------------------------------------------------


def spectral_set(f: ExpoPoly) -> list[tuple[Exponential, list[tuple]]]:
    """For each exponential m of f, a basis of {e : m e lies in the translate span}."""
    span = translate_span(f)
    if span.dim == 0:
        return []
    layout, k, order = span._layout, f.vector_dim, f.order
    basis_vecs = [layout.vector(b) for b in span.basis]
    zero, one = Cyclotomic.zero(order), Cyclotomic.one(order)
    out = []
    for m in f.exponentials():
        units = []
        for j in range(k):
            vec = [one if i == j else zero for i in range(k)]
            units.append(layout.vector(ExpoPoly.exponential(m, vec)))
        # columns: e_1..e_k then -basis; nullspace gives e sum_j e_j unit_j = sum c_l b_l
        cols = units + [[-c for c in b] for b in basis_vecs]
        rows = [[col[i] for col in cols] for i in range(layout.size)]
        ns = nullspace(rows, len(cols), zero, one)
        es, _ = row_reduce([v[:k] for v in ns]) if ns else ([], [])
        out.append((m, [tuple(e) for e in es if any(e)]))
    return out


# -- variety lift ------------------------------------------------------------------


def lift(fs: ExpoPoly, g: ExpoPoly) -> ExpoPoly:
    """F(t, x) = sum_j t_j f_j(x) + g(x) on Z^k x G."""
    if fs.group != g.group:
        raise StructuralError(f"group mismatch: {fs.group} vs {g.group}")
    if g.vector_dim != 1:
        raise StructuralError("g must be scalar-valued")
    if fs.order != g.order:
        raise StructuralError("scalar field mismatch")
    k, group, order = fs.vector_dim, fs.group, fs.order
    big = GroupSpec(k, ()).product(group)
    one = Cyclotomic.one(order)
    r = big.free_rank

    def embed(m: Exponential) -> Exponential:
        return Exponential(big, (one,) * k + m.free_values, m.torsion_values, order)

    pairs = []
    for m, p in fs.terms:
        terms = {}
        for e, vec in p.terms.items():
            for j, c in enumerate(vec):
                if c:
                    t = tuple(int(i == j) for i in range(k))
                    terms[t + e] = (c,)
        pairs.append((embed(m), VectorPolynomial(r, 1, order, terms)))
    for m, p in g.terms:
        pairs.append((embed(m), VectorPolynomial(r, 1, order, {(0,) * k + e: v for e, v in p.terms.items()})))
    return ExpoPoly.from_terms(big, 1, order, pairs)


def unlift(F: ExpoPoly, k: int) -> tuple[ExpoPoly, ExpoPoly]:
    """Recover (fs, g) from F = sum_j t_j f_j + g on Z^k x G, with f_j = Delta_{e_j} F."""
    big = F.group
    if F.vector_dim != 1:
        raise NotInLiftedFormError("lifted functions are scalar-valued")
    if big.free_rank < k:
        raise NotInLiftedFormError(f"group {big} has fewer than {k} free coordinates")
    group = GroupSpec(big.free_rank - k, big.torsion_orders)
    order = F.order
    for m, p in F.terms:
        if not all(v.is_one() for v in m.free_values[:k]):
            raise NotInLiftedFormError("exponential is not trivial on the Z^k factor")
        for e in p.terms:
            if sum(e[:k]) > 1:
                raise NotInLiftedFormError(f"monomial with t-exponents {e[:k]} is not linear in t")

    def restrict(h: ExpoPoly) -> ExpoPoly:
        pairs = []
        for m, p in h.terms:
            mm = Exponential(group, m.free_values[k:], m.torsion_values, order)
            terms = {}
            for e, v in p.terms.items():
                if any(e[:k]):
                    raise NotInLiftedFormError("component still depends on t")
                terms[e[k:]] = v
            pairs.append((mm, VectorPolynomial(group.free_rank, 1, order, terms)))
        return ExpoPoly.from_terms(group, 1, order, pairs)

    comps = [restrict(apply_diff_op(DifferenceOperator.delta(big.free_generator(j), order), F)) for j in range(k)]
    g_terms = [
        (m, VectorPolynomial._raw(p.nvars, 1, order, {e: v for e, v in p.terms.items() if not any(e[:k])}))
        for m, p in F.terms
    ]
    g = restrict(ExpoPoly.from_terms(big, 1, order, g_terms))
    if k == 0:
        return ExpoPoly.zero(group, 1, order), g
    return ExpoPoly.stack(comps), g
