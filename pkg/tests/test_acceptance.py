"""Acceptance criteria, one test each, with runtime budgets.

Every criterion prints a single ``PASS``/``FAIL`` line (shown in the pytest
terminal summary, or on stdout when run as ``python3 tests/test_acceptance.py``).
"""

from __future__ import annotations

import itertools
import math
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from abelexp import (  # noqa: E402
    Cyclotomic,
    DifferenceOperator,
    Exponential,
    ExpoPoly,
    FunctionOracle,
    apply_diff_op,
    classify,
    compose_functional,
    degree,
    degree_certificate,
    evaluate,
    extract_components_ops,
    extract_components_solve,
    homogeneous_parts,
    lemma2_operators,
    lift,
    parse,
    parse_group,
    polarize,
    translate_span,
    unlift,
)
from abelexp import lab  # noqa: E402
from abelexp.fourier import (  # noqa: E402
    characters,
    convolution_associativity_check,
    convolve_many,
    fourier_coefficient,
    measure_convolve,
    synthesis_span,
    synthesize,
    translate_table_span,
)

import gen  # noqa: E402

RESULTS: list[str] = []


def record(num: int, title: str, ok: bool, elapsed: float, budget: float | None, detail: str = "") -> None:
    within = budget is None or elapsed < budget
    status = "PASS" if ok and within else "FAIL"
    limit = f" (budget {budget:.0f} s)" if budget is not None else ""
    extra = f"; {detail}" if detail else ""
    line = f"[{status}] criterion {num:2d}: {title}: {elapsed:.2f} s{limit}{extra}"
    RESULTS.append(line)
    print(line)
    assert ok, line
    assert within, line


@pytest.fixture(scope="module", autouse=True)
def _report(request):
    yield
    tr = request.config.pluginmanager.get_plugin("terminalreporter")
    if tr is not None and RESULTS:
        tr.write_line("")
        tr.write_line("acceptance summary")
        for line in RESULTS:
            tr.write_line(line)


def _q(v, order=4):
    return Cyclotomic.rational(v, order)


# 1 ---------------------------------------------------------------------------------


def test_c01_sum_of_squares_span_dimension():
    t0 = time.perf_counter()
    dims = []
    for r in range(1, 6):
        G = parse_group(f"Z^{r}")
        f = parse(" + ".join(f"x{i}^2" for i in range(1, r + 1)), G, 4)
        dims.append(translate_span(f).dim)
    ok = dims == [r + 2 for r in range(1, 6)]
    record(1, "dim L_f = r + 2 for sum of squares, r = 1..5", ok, time.perf_counter() - t0, 5, f"dims {dims}")


# 2 ---------------------------------------------------------------------------------


def test_c02_degree_below_span_dimension():
    rng = random.Random(2)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(100):
        r, k = rng.randint(1, 3), rng.randint(1, 2)
        f = gen.rand_genpoly(rng, parse_group(f"Z^{r}"), k, 4, rng.randint(0, 4), nterms=3)
        bad += not degree(f) < translate_span(f).dim
    record(2, "deg f < dim L_f on 100 random generalized polynomials", bad == 0, time.perf_counter() - t0, 30, f"{bad} violations")


# 3 ---------------------------------------------------------------------------------


def test_c03_homogeneous_decomposition():
    rng = random.Random(3)
    Z3 = parse_group("Z^3")
    t0 = time.perf_counter()
    bad = 0
    for _ in range(100):
        f = gen.rand_genpoly(rng, Z3, 1, 4, 5, nterms=4)
        n = degree(f)
        x = gen.rand_element(rng, Z3, 2)
        parts = homogeneous_parts(f, n, x)
        bad += (sum((p[0] for p in parts), _q(0)),) != evaluate(f, x)
        for k in (2, 3):
            scaled = homogeneous_parts(f, n, k * x)
            bad += any(scaled[i] != tuple(c * k**i for c in parts[i]) for i in range(n + 1))
    record(3, "homogeneous parts reassemble f and scale as k^i", bad == 0, time.perf_counter() - t0, 20, f"{bad} failures")


# 4 ---------------------------------------------------------------------------------


def test_c04_polarization():
    rng = random.Random(4)
    Z2 = parse_group("Z^2")
    t0 = time.perf_counter()
    bad = 0
    for case in range(50):
        i = 2 + case % 2
        f = gen.rand_genpoly(rng, Z2, rng.randint(1, 2), 4, i, exact=True, nterms=4)
        # f_i only as a black box through the homogeneous decomposition of f
        f_i = FunctionOracle(Z2, f.vector_dim, 4, lambda x, f=f, i=i: homogeneous_parts(f, i, x)[i])
        xs = [gen.rand_element(rng, Z2) for _ in range(i)]
        base = polarize(f_i, i, xs)
        bad += any(polarize(f_i, i, list(p)) != base for p in itertools.permutations(xs))
        a, b = gen.rand_element(rng, Z2), gen.rand_element(rng, Z2)
        lhs = polarize(f_i, i, [a + b, *xs[1:]])
        rhs = tuple(s + t for s, t in zip(polarize(f_i, i, [a, *xs[1:]]), polarize(f_i, i, [b, *xs[1:]])))
        bad += lhs != rhs
        x = gen.rand_element(rng, Z2)
        bad += polarize(f_i, i, [x] * i) != f_i(x)
    record(4, "polarization symmetric, additive, recovers the diagonal", bad == 0, time.perf_counter() - t0, None, f"{bad} failures")


# 5 ---------------------------------------------------------------------------------


def _separator_pool():
    Z, Z2 = parse_group("Z"), parse_group("Z^2")
    i = Cyclotomic.zeta(4)
    half = _q(1) / 2

    def ex(G, *vals):
        return Exponential(G, [v if isinstance(v, Cyclotomic) else _q(v) for v in vals], (), 4)

    return [
        [ex(Z, 1), ex(Z, 2)],
        [ex(Z, 2), ex(Z, 3)],
        [ex(Z, i), ex(Z, half)],
        [ex(Z, 1), ex(Z, -1), ex(Z, 2)],
        [ex(Z, 1), ex(Z, 2), ex(Z, 3)],
        [ex(Z2, 1, 1), ex(Z2, 2, 1)],
        [ex(Z2, 1, 1), ex(Z2, 1, -1), ex(Z2, 2, 3)],
        [ex(Z2, i, 1), ex(Z2, 1, 2)],
    ]


def _instance(rng, ms, s):
    G = ms[0].group
    k = rng.randint(1, 2)
    budget = s
    pairs = []
    order = list(range(len(ms)))
    rng.shuffle(order)
    for idx in order:
        if rng.random() < 0.2:
            continue
        d = rng.randint(0, max(budget, 0)) if budget >= 0 else -1
        if d < 0:
            break
        budget -= d
        pairs.append((ms[idx], gen.rand_vpoly(rng, G.free_rank, k, 4, d, nterms=2)))
    return ExpoPoly.from_terms(G, k, 4, pairs)


def _component(f, m):
    p = f.term_for(m)
    return ExpoPoly.from_terms(f.group, f.vector_dim, 4, [(m, p)]) if p is not None else ExpoPoly.zero(f.group, f.vector_dim, 4)


def test_c05_separator_exactness():
    rng = random.Random(5)
    pool = _separator_pool()
    t0 = time.perf_counter()
    bad = checked = 0
    for ms in pool:
        ops_by_s = {s: lemma2_operators(ms, s) for s in range(4)}
        for case in range(50):
            s = case % 4
            ops = ops_by_s[s]
            f = _instance(rng, ms, s)
            images = [apply_diff_op(D, f) for D in ops]
            comps = [_component(f, m) for m in ms]
            bad += any(c not in images for c in comps)
            via_ops = extract_components_ops(f, ms, s)
            bad += via_ops != comps or via_ops != extract_components_solve(f, ms, s)
            checked += 1
    record(5, "difference operators isolate every component; ops = solve", bad == 0, time.perf_counter() - t0, 120, f"{checked} instances, {bad} failures")


# 6 ---------------------------------------------------------------------------------


def test_c06_uniqueness_oracle():
    rng = random.Random(6)
    G = parse_group("ZxZ2")
    t0 = time.perf_counter()
    bad = equal_cases = 0
    for case in range(200):
        f = gen.rand_expopoly(rng, G, 1, 4, rng.randint(1, 3), 2)
        pieces = []
        for m, p in f.terms:
            extra = gen.rand_vpoly(rng, 1, 1, 4, 2)
            pieces += [(m, p - extra), (m, extra)]
        if case % 2:
            # perturb with an extra term so some pairs differ
            m = rng.choice(f.exponentials() + [gen.rand_exponential(rng, G, 4)])
            pieces.append((m, gen.rand_vpoly(rng, 1, 1, 4, rng.randint(0, 2))))
        rng.shuffle(pieces)
        h = ExpoPoly.from_terms(G, 1, 4, pieces)
        bad += h.canonical() != h or h.canonical().terms != h.terms
        rebuilt = ExpoPoly.from_terms(G, 1, 4, list(reversed(pieces)))
        bad += rebuilt.terms != h.terms
        d = max(f.max_degree, h.max_degree)
        pointwise = all(evaluate(f, x) == evaluate(h, x) for x in G.box(-d - 1, d + 2))
        bad += pointwise != (f == h)
        equal_cases += f == h
    record(6, "canonical form unique; structural = pointwise equality", bad == 0, time.perf_counter() - t0, None, f"{equal_cases}/200 equal pairs, {bad} failures")


# 7 ---------------------------------------------------------------------------------


def test_c07_finite_synthesis():
    rng = random.Random(7)
    G = parse_group("Z6xZ4")
    N = 12
    chars = characters(G, N)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(100):
        f = gen.rand_table(rng, G, 2, N)
        s = synthesize(f)
        bad += any(evaluate(s, x) != f(x) for x in G.elements())
        a, b = synthesis_span(f), translate_table_span(f)
        bad += not (a.dim == b.dim and a.contains_span(b) and b.contains_span(a))
        coeffs = [fourier_coefficient(f, g) for g in chars]
        gammas = [gen_table_of(g) for g in chars]
        for conv, e, g in zip(convolve_many(f, gammas), coeffs, chars):
            bad += any(conv(x) != tuple(c * g(x) for c in e) for x in G.elements())
        mu = gen.rand_measure(rng, G, N)
        bad += not b.contains(measure_convolve(mu, f))
        bad += not convolution_associativity_check(mu, f, gen.rand_table(rng, G, 1, N))
    record(7, "finite synthesis, span equality, f*gamma, mu*f in V_f, associativity", bad == 0, time.perf_counter() - t0, 60, f"{bad} failures")


_CHAR_TABLES: dict = {}


def gen_table_of(gamma):
    from abelexp.fourier import Table

    if gamma not in _CHAR_TABLES:
        _CHAR_TABLES[gamma] = Table.from_function(gamma.group, 1, gamma.order, lambda x: (gamma(x),))
    return _CHAR_TABLES[gamma]


# 8 ---------------------------------------------------------------------------------


def test_c08_lift_roundtrip():
    rng = random.Random(8)
    t0 = time.perf_counter()
    bad = 0
    for case in range(50):
        G = parse_group(["Z", "ZxZ2", "Z^2"][case % 3])
        k = rng.randint(1, 3)
        fs = gen.rand_expopoly(rng, G, k, 4, rng.randint(1, 2), 2)
        g = gen.rand_expopoly(rng, G, 1, 4, rng.randint(1, 2), 2)
        F = lift(fs, g)
        bad += unlift(F, k) != (fs, g)
        big = F.group
        x = gen.rand_element(rng, G)
        t = [rng.randint(-4, 4) for _ in range(k)]
        for j in range(k):
            dF = apply_diff_op(DifferenceOperator.delta(big.free_generator(j), 4), F)
            bad += evaluate(dF, big.element(t + list(x.free), x.torsion)) != (evaluate(fs, x)[j],)
    record(8, "unlift(lift(fs, g)) = (fs, g) and Delta_{e_i} F = f_i", bad == 0, time.perf_counter() - t0, None, f"{bad} failures")


# 9 ---------------------------------------------------------------------------------


def test_c09_degree_certificate():
    rng = random.Random(9)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(100):
        G = parse_group(rng.choice(["Z", "Z^2", "Z^3"]))
        k = rng.randint(1, 3)
        f = gen.rand_genpoly(rng, G, k, 4, rng.randint(0, 4), nterms=3)
        d = degree(f)
        u = degree_certificate(f)
        bad += degree(compose_functional(f, u)) != d
        for _ in range(20):
            v = [gen.rand_scalar(rng, 4) for _ in range(k)]
            bad += degree(compose_functional(f, v)) > d
    record(9, "certificate achieves deg f; random functionals never exceed it", bad == 0, time.perf_counter() - t0, None, f"{bad} failures")


# 10 --------------------------------------------------------------------------------


def test_c10_counterexample_probe():
    t0 = time.perf_counter()
    reports = lab.baseline_sweep(depth=5, max_translates=6)
    min_res = min(r for rep in reports for r in rep.residuals)
    inst = lab.build_counterexample(5, lab.required_window(6))
    max_ctrl = max(
        lab.membership_control(inst, j, t, lab.sweep_points(t)).residual for t in range(1, 7) for j in range(1, t + 1)
    )
    ok = min_res > 1e-6 and max_ctrl < 1e-9
    record(10, "baseline residuals > 1e-6, membership control < 1e-9", ok, time.perf_counter() - t0, 10, f"min residual {min_res:.3g}, max control {max_ctrl:.2g}")


# 11 --------------------------------------------------------------------------------


def test_c11_classification_chain():
    rng = random.Random(11)
    t0 = time.perf_counter()
    bad = 0
    kinds = {"poly": 0, "exp": 0, "mixed": 0}
    for case in range(300):
        G = parse_group(["Z", "Z^2", "ZxZ2", "ZxZ4"][case % 4])
        k = rng.randint(1, 2)
        kind = ["poly", "exp", "mixed"][case % 3]
        kinds[kind] += 1
        if kind == "poly":
            f = gen.rand_genpoly(rng, G, k, 4, 3)
        elif kind == "exp":
            m = gen.rand_exponential(rng, G, 4, trivial_weight=0.1)
            f = ExpoPoly.exponential(m, [gen.rand_nonzero(rng, 4) for _ in range(k)])
        else:
            f = gen.rand_expopoly(rng, G, k, 4, rng.randint(2, 3), 2)
        rep = classify(f)
        flags = (rep.is_polynomial, rep.is_w_polynomial, rep.is_generalized, rep.is_local_polynomial)
        chain = all(not a or b for a, b in zip(flags, flags[1:]))
        bad += not chain or len(set(flags)) != 1
        bad += rep.is_generalized != (len(f.terms) <= 1 and all(m.is_trivial() for m in f.exponentials()))
    record(11, "classification chain holds and the four flags coincide", bad == 0, time.perf_counter() - t0, None, f"{kinds}, {bad} failures")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted((n, f) for n, f in globals().items() if n.startswith("test_c")):
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
