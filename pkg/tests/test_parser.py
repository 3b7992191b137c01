import random
import string
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_expr
from hydrino_audit.expr import (
    Delta,
    NamedConstant,
    Product,
    RealPart,
    SphHarmonic,
    Sum,
    add,
    const,
    delta,
    expr_equal,
    mul,
    pow_,
    rat,
    sub,
    sym,
)
from hydrino_audit.parser import ParseError, parse_expr, print_expr


def test_grammar_sum_quotient():
    e = parse_expr("c1 + c2/r")
    assert e == add(sym("c1"), mul(sym("c2"), pow_(sym("r"), -1)))


def test_grammar_delta_quotient():
    e = parse_expr("delta(r - r_n)/r")
    assert e == mul(delta(sub(sym("r"), sym("r_n"))), pow_(sym("r"), -1))
    dl = [f for f in e.factors if isinstance(f, Delta)][0]
    assert dl.order == 0


def test_grammar_angular_candidate():
    e = parse_expr("Y(0,0) + Re(Y(1,0)*(1 + exp(i*w*t)))")
    assert isinstance(e, Sum)
    harmonics = [n for t in e.terms for n in _walk(t) if isinstance(n, SphHarmonic)]
    assert {(y.l, y.m) for y in harmonics} == {(0, 0), (1, 0)}
    assert any(isinstance(n, RealPart) for t in e.terms for n in _walk(t))


def _walk(e):
    from hydrino_audit.expr import walk
    return walk(e)


def test_python_power_operator_rejected():
    with pytest.raises(ParseError) as exc:
        parse_expr("2 **")
    assert exc.value.span.start == 2


def test_incomplete_input():
    with pytest.raises(ParseError):
        parse_expr("2 *")
    with pytest.raises(ParseError):
        parse_expr("(1 + 2")
    with pytest.raises(ParseError):
        parse_expr("")


def test_print_examples():
    assert print_expr(add(sym("c1"), mul(sym("c2"), pow_(sym("r"), -1)))) == "c1 + c2/r"
    assert print_expr(delta(sub(sym("r"), sym("r_n")), 1)) == "delta'(r - r_n)"
    assert print_expr(pow_(sym("r"), Fraction(3, 2))) == "r^(3/2)"


def test_delta_derivative_orders():
    assert parse_expr("delta'(x)").order == 1
    assert parse_expr("delta''(x)").order == 2
    assert parse_expr("delta^(3)(x)").order == 3
    e = parse_expr("delta^(4)(x - 1)")
    assert e.order == 4
    assert parse_expr(print_expr(e)) == e


def test_ylm_literal_arguments():
    y = parse_expr("Y(2,-1)")
    assert (y.l, y.m) == (2, -1)
    with pytest.raises(ParseError):
        parse_expr("Y(1,2)")      # |m| > l, rejected with a position
    with pytest.raises(ParseError):
        parse_expr("Y(l,m)")      # symbolic degree not in the grammar


def test_no_implicit_multiplication():
    with pytest.raises(ParseError):
        parse_expr("2r")
    with pytest.raises(ParseError):
        parse_expr("2 r")


def test_unknown_function_rejected():
    with pytest.raises(ParseError) as exc:
        parse_expr("foo(x)")
    assert exc.value.expected  # closed set advertised


def test_greedy_rational_literal():
    assert parse_expr("2/4") == rat(1, 2)
    # the number rule binds tighter than division, so 1/2 is the power base
    e = parse_expr("1/2^(1/2)")
    assert e == pow_(rat(1, 2), Fraction(1, 2))


def test_reserved_constants():
    assert parse_expr("pi") == const("pi")
    assert parse_expr("alpha") == const("alpha")
    assert isinstance(parse_expr("i*x"), Product)
    # 'c' is reserved too; 'c1' is an ordinary symbol
    assert isinstance(parse_expr("c"), NamedConstant)
    assert parse_expr("c1") == sym("c1")


def test_unary_minus_precedence():
    x = sym("x")
    assert parse_expr("-x^2") == mul(rat(-1), pow_(x, 2))
    assert parse_expr("2^3") == rat(8)
    assert parse_expr("--x") == x


def test_whitespace_insensitive():
    assert parse_expr("c1+c2  /\tr") == parse_expr("c1 + c2/r")


def test_span_soundness_on_errors():
    bad_inputs = ["c1 + ", "1 + (2", "sin()", "delta(1)", "x ^ y", "@", "1,2"]
    for text in bad_inputs:
        with pytest.raises(ParseError) as exc:
            parse_expr(text)
        span = exc.value.span
        assert 0 <= span.start <= span.end <= len(text)
        assert exc.value.message


def test_deep_nesting_is_a_parse_error():
    with pytest.raises(ParseError):
        parse_expr("(" * 5000 + "x" + ")" * 5000)
    with pytest.raises(ParseError):
        parse_expr("-" * 5000 + "x")
    # moderate nesting stays fine
    e = parse_expr("(" * 50 + "x" + ")" * 50)
    assert e == sym("x")


def test_error_totality_fuzz():
    rng = random.Random(20240817)
    alphabet = string.ascii_lowercase + string.digits + "+-*/^()_', ."
    for _ in range(500):
        text = "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 30)))
        try:
            parse_expr(text)
        except ParseError as exc:
            assert 0 <= exc.span.start <= exc.span.end <= len(text)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9))
def test_round_trip(seed):
    rng = random.Random(seed)
    e = random_expr(rng, depth=4, allow_delta=True)
    assert expr_equal(parse_expr(print_expr(e)), e)
