import random
from fractions import Fraction

import pytest

from abelexp import Cyclotomic
from abelexp.linalg import CyclotomicEchelon, IncrementalBasis, RealifiedSpan, nullspace, rank, realify, solve

import gen


def test_rational_rank_and_nullspace():
    rows = [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(2), Fraction(4), Fraction(6)], [Fraction(0), Fraction(1), Fraction(1)]]
    assert rank(rows) == 2
    (v,) = nullspace(rows)
    assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
    assert solve(rows, [1, 2, 0]) is not None
    assert solve(rows, [1, 0, 0]) is None


def test_realify_scales_to_integers():
    c = Cyclotomic(12, [Fraction(1, 2), 0, Fraction(-1, 3), 0])
    assert realify([c], 12) == [3, 0, -2, 0]


@pytest.mark.parametrize("order", [1, 4, 5, 7, 12])
def test_three_span_routes_agree(order):
    rng = random.Random(order)
    dim = 6
    for _ in range(8):
        base = [[gen.rand_scalar(rng, order, -2, 2) for _ in range(dim)] for _ in range(rng.randint(1, 4))]
        # add a dependent vector so ranks are not trivially full
        mix = [gen.rand_scalar(rng, order) for _ in base]
        base.append([sum((m * v[i] for m, v in zip(mix, base)), Cyclotomic.zero(order)) for i in range(dim)])
        inc = IncrementalBasis(dim, Cyclotomic.zero(order), Cyclotomic.one(order))
        ech = CyclotomicEchelon(order, dim)
        for v in base:
            assert inc.add(v) == ech.add(v)
        real = RealifiedSpan(order, dim, base)
        assert len(inc) == len(ech) == len(real)
        probes = [[gen.rand_scalar(rng, order) for _ in range(dim)] for _ in range(3)] + [base[-1]]
        for w in probes:
            assert inc.contains(w) == ech.contains(w) == real.contains(w)


def test_coordinates_recover_combination():
    rng = random.Random(0)
    inc = IncrementalBasis(4, Cyclotomic.zero(12), Cyclotomic.one(12))
    vs = [[gen.rand_scalar(rng, 12) for _ in range(4)] for _ in range(3)]
    for v in vs:
        inc.add(v)
    cs = [gen.rand_scalar(rng, 12) for _ in inc.vectors]
    w = [sum((c * v[i] for c, v in zip(cs, inc.vectors)), Cyclotomic.zero(12)) for i in range(4)]
    assert inc.coordinates(w) == cs
