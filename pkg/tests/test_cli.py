import json
import random
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abelexp import (
    Cyclotomic,
    DifferenceOperator,
    ExpoPoly,
    ParseError,
    classify,
    evaluate,
    format_expopoly,
    parse,
    parse_group,
    translate_span,
)
from abelexp import serialize as ser
from abelexp.cli import EXIT_DOMAIN, EXIT_OK, EXIT_PARSE, EXIT_USAGE, run
from abelexp.dsl import required_root_orders
from abelexp.lab import baseline_sweep

import gen

Z = parse_group("Z")


def payload(argv):
    res = run(argv)
    assert res.exit_code == EXIT_OK, res.diagnostics
    return res.payload


# -- parser ----------------------------------------------------------------------


def test_parse_polynomial():
    f = parse("x1^2 + 2*x1 + 5", Z, 4)
    assert f.max_degree == 2 and len(f.terms) == 1
    assert evaluate(f, Z.element([3])) == (Cyclotomic.rational(20, 4),)


def test_parse_exponential_product():
    f = parse("x1 * exp[2;]", Z, 4)
    ((m, p),) = f.terms
    assert m.free_values == (Cyclotomic.rational(2, 4),) and p.degree == 1
    assert format_expopoly(f) == "x1*exp[2;]"


def test_parse_vector():
    f = parse("[x1, x1^2] + [0, 1]", Z, 4)
    assert f.vector_dim == 2
    assert f == parse("[x1, x1^2 + 1]", Z, 4)


@pytest.mark.parametrize(
    "text,group,order,col",
    [
        ("x1 +* 2", "Z", 4, 5),
        ("exp[0;]", "Z", 4, 5),
        ("exp[1; 2]", "ZxZ4", 4, 8),
        ("zeta(3)", "Z", 4, 6),
    ],
)
def test_parse_errors_have_positions(text, group, order, col):
    with pytest.raises(ParseError) as exc:
        parse(text, parse_group(group), order)
    assert exc.value.line == 1 and exc.value.column == col


def test_torsion_variable_diagnostic():
    with pytest.raises(ParseError, match="torsion coordinates cannot appear"):
        parse("y1^2", parse_group("ZxZ4"), 4)


def test_multiline_position():
    with pytest.raises(ParseError) as exc:
        parse("x1 +\n  ) ", Z, 4)
    assert (exc.value.line, exc.value.column) == (2, 3)


def test_required_roots():
    assert sorted(required_root_orders("zeta(5)^2 + zeta(3)")) == [3, 5]


@pytest.mark.parametrize("group,order", [("Z", 4), ("Z^2xZ3", 12), ("ZxZ2xZ4", 8), ("Z3xZ5", 15 * 4)])
def test_print_parse_roundtrip(group, order):
    rng = random.Random(hash(group) & 0xFFFF)
    G = parse_group(group)
    for _ in range(50):
        f = gen.rand_expopoly(rng, G, rng.randint(1, 2), order, rng.randint(1, 3), 2)
        text = format_expopoly(f)
        assert parse(text, G, order) == f
        assert format_expopoly(parse(text, G, order)) == text


# -- JSON -----------------------------------------------------------------------------


def _roundtrip(value, decode):
    text = ser.dumps(value)
    assert ser.dumps(decode(json.loads(text))) == text
    return decode(json.loads(text))


def test_json_roundtrip_all_types():
    rng = random.Random(0)
    G = parse_group("Z^2xZ3")
    c = gen.rand_scalar(rng, 12, rational=0)
    assert _roundtrip(c, ser.cyclotomic_from_json) == c
    assert _roundtrip(G, ser.group_from_json) == G
    x = gen.rand_element(rng, G)
    assert _roundtrip(x, lambda d: ser.element_from_json(d, G)) == x
    m = gen.rand_exponential(rng, G, 12, trivial_weight=0)
    assert _roundtrip(m, lambda d: ser.exponential_from_json(d, G, 12)) == m
    for _ in range(20):
        f = gen.rand_expopoly(rng, G, 2, 12, 3, 2)
        assert _roundtrip(f, ser.expopoly_from_json) == f
    D = DifferenceOperator(G, 12, [(gen.rand_nonzero(rng, 12), gen.rand_element(rng, G)) for _ in range(3)])
    assert _roundtrip(D, ser.diffop_from_json) == D
    f = parse("x1*x2 + 3", G, 12)
    rep = classify(f)
    assert _roundtrip(rep, ser.classification_from_json) == rep
    span = translate_span(f)
    assert _roundtrip(span, ser.translate_span_from_json).basis == span.basis
    F = parse_group("Z6xZ4")
    t = gen.rand_table(rng, F, 2, 12)
    assert _roundtrip(t, ser.table_from_json) == t
    mu = gen.rand_measure(rng, F, 12)
    assert _roundtrip(mu, ser.measure_from_json) == mu
    rep = baseline_sweep(4, 2)[0]
    assert _roundtrip(rep, ser.residual_report_from_json).residuals == rep.residuals


def test_table_json_without_order():
    t = gen.rand_table(random.Random(1), parse_group("Z3"), 1, 12)
    d = ser.table_to_json(t)
    del d["cyclotomic_order"]
    assert ser.table_from_json(d) == t


def test_json_rejects_bad_field():
    with pytest.raises(Exception):
        ser.cyclotomic_from_json({"order": 12, "coeffs": ["1", "2"]})


# -- subcommands -------------------------------------------------------------------------


def test_degree_example():
    assert payload(["degree", "--group", "Z", "--expr", "x1^3"]) == {"degree": 3}


def test_dim_example():
    assert payload(["dim", "--group", "Z^3", "--expr", "x1^2+x2^2+x3^2"]) == {"dim": 5}


def test_decompose_backends_agree():
    base = ["decompose", "--group", "Z", "--expr", "x1 + exp[2;]", "--ms", "exp[1;],exp[2;]", "--s", "1"]
    ops = payload(base + ["--method", "ops"])
    sol = payload(base + ["--method", "solve"])
    assert [c["text"] for c in ops["components"]] == ["x1", "exp[2;]"]
    assert ops["components"] == sol["components"]
    assert payload(base + ["--method", "ops", "--oracle"])["components"] == ops["components"]


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_decompose_cli_random(seed):
    rng = random.Random(seed)
    f = gen.rand_expopoly(rng, Z, 1, 4, rng.randint(1, 3), 1)
    ms = ",".join(format_expopoly(ExpoPoly.exponential(m)) for m in f.exponentials())
    s = str(sum(p.degree for _, p in f.terms))
    base = ["decompose", f"--expr={format_expopoly(f)}", "--ms", ms, "--s", s]
    assert payload(base + ["--method", "ops"])["components"] == payload(base + ["--method", "solve"])["components"]


def test_exit_codes():
    assert run(["nope"]).exit_code == EXIT_USAGE
    assert run([]).exit_code == EXIT_USAGE
    assert run(["degree"]).exit_code == EXIT_USAGE
    res = run(["degree", "--expr", "x1 +"])
    assert res.exit_code == EXIT_PARSE and res.diagnostics[-1]["line"] == 1 and "column" in res.diagnostics[-1]
    assert run(["degree", "--expr", "exp[2;]"]).exit_code == EXIT_DOMAIN
    assert run(["decompose", "--expr", "x1", "--ms", "exp[1;]", "--s", "9"]).exit_code == EXIT_DOMAIN
    assert run(["lab-sweep", "--depth", "9"]).exit_code == EXIT_DOMAIN


def test_order_raised_with_notice():
    res = run(["fmt", "--expr", "zeta(3)*x1"])
    assert res.payload["order"] == 12
    assert any(d["level"] == "notice" for d in res.diagnostics)
    res = run(["fmt", "--expr", "zeta(5)", "--order", "4"])
    assert res.payload["order"] == 20


def test_subcommand_tour(tmp_path):
    assert payload(["eval", "--expr", "x1*exp[2;]", "--at", "3"])["values"][0]["text"] == ["24"]
    assert payload(["translate", "--expr", "x1*exp[2;]", "--by", "1"])["text"] == "2*x1*exp[2;] + 2*exp[2;]"
    assert payload(["diff", "--expr", "x1^2", "--by", "1"])["text"] == "2*x1 + 1"
    assert payload(["diff", "--expr", "x1^3", "--by", "1", "--by", "1", "--by", "1"])["text"] == "6"
    op = tmp_path / "op.json"
    op.write_text(ser.dumps(DifferenceOperator(Z, 4, [(1, Z.element([1])), (-2, Z.zero())])))
    assert payload(["diff", "--expr", "exp[2;]", "--op-file", str(op)])["text"] == "0"
    assert payload(["classify", "--expr", "x1^2"])["dim_L_f"] == 3
    assert len(payload(["spectral", "--expr", "x1*exp[2;] + exp[3;]"])["spectral_set"]) == 2
    assert payload(["certificate", "--expr", "[x1^2, -x1^2]"])["degree_u_f"] == 2
    assert payload(["homog", "--expr", "x1^2 + 2*x1 + 5", "--n", "2", "--at", "4"])["parts"][2]["text"] == ["16"]
    assert payload(["polarize", "--group", "Z^2", "--expr", "x1*x2", "--i", "2", "--at", "1,0", "--at", "0,1"])["value"]["text"] == ["1/2"]
    assert payload(["lift", "--expr", "x1^2"])["text"] == "x1*x2^2"
    out = payload(["unlift", "--group", "Z^2", "--expr", "x1*x2^2 + 4", "--k", "1"])
    assert (out["fs"]["text"], out["g"]["text"]) == ("x1^2", "4")
    assert payload(["synth", "--group", "Z4", "--expr", "exp[; i] + 2"])["exact_inversion"]
    conv = payload(["conv", "--group", "Z2", "--expr", "exp[; -1]", "--with", "exp[; -1]"])
    assert ser.table_from_json(conv["table"])(parse_group("Z2").element([], [1])) == (Cyclotomic.rational(-1, 4),)
    csv = tmp_path / "s.csv"
    rep = payload(["lab-sweep", "--depth", "4", "--max-translates", "2", "--csv", str(csv)])
    assert len(rep["reports"]) == 6 and csv.read_text().startswith("lambda_re,")
    assert payload(["fmt", "--expr", "x1 + x1"])["text"] == "2*x1"


def test_file_inputs(tmp_path):
    f = parse("x1^2 + exp[3;]", Z, 4)
    p = tmp_path / "f.json"
    p.write_text(ser.dumps(f))
    assert payload(["fmt", "--file", str(p)])["text"] == format_expopoly(f)
    p2 = tmp_path / "e.json"
    p2.write_text(json.dumps({"expr": "x1*x2", "group": "Z^2"}))
    assert payload(["degree", "--file", str(p2)]) == {"degree": 2}
    t = gen.rand_table(random.Random(2), parse_group("Z6"), 1, 12)
    p3 = tmp_path / "t.json"
    p3.write_text(ser.dumps(t))
    assert payload(["synth", "--file", str(p3)])["exact_inversion"]
    assert run(["fmt", "--file", str(tmp_path / "missing.json")]).exit_code == EXIT_DOMAIN


def test_check_suite():
    out = payload(["check", "--group", "Z^2xZ3", "--expr", "x1*x2 + exp[2,1; zeta(3)]*x2", "--seed", "3"])
    assert out["ok"] and len(out["checks"]) >= 8
    assert payload(["check", "--group", "Z6", "--expr", "exp[; zeta(6)] + 1"])["checks"]["finite_synthesis"]


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "abelexp", *args], capture_output=True)


def test_byte_deterministic_stdout():
    args = ["check", "--group", "ZxZ4", "--expr", "x1^2*exp[2; i] + x1", "--seed", "5"]
    a, b = _cli(*args), _cli(*args)
    assert a.returncode == 0 and a.stdout == b.stdout
    a, b = _cli("spectral", "--expr", "x1*exp[2;]"), _cli("spectral", "--expr", "x1*exp[2;]")
    assert a.stdout == b.stdout


def test_error_envelope_on_stdout():
    r = _cli("degree", "--expr", "x1 +")
    assert r.returncode == 3
    env = json.loads(r.stdout)
    assert env["status"] == "error" and env["diagnostics"][0]["column"] == 5
    assert _cli("nope").returncode == 1
