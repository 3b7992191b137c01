"""Shared fixtures and the seeded random-expression generator used by the
round-trip, derivative and simplification properties."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest

from hydrino_audit.expr import (
    CONSTANT_IDS,
    Expr,
    InvalidNodeError,
    add,
    apply_fn,
    const,
    delta,
    mul,
    pow_,
    rat,
    re_,
    sym,
    ylm,
)

_EXPONENTS = (Fraction(-2), Fraction(-1), Fraction(2), Fraction(3),
              Fraction(1, 2), Fraction(-1, 2), Fraction(3, 2))


def _leaf(rng: random.Random, symbols, allow_complex: bool,
          allow_constants: bool) -> Expr:
    roll = rng.random()
    if roll < 0.4:
        return rat(rng.randint(-6, 6), rng.randint(1, 6))
    if roll < 0.85 or not allow_constants:
        return sym(rng.choice(symbols))
    pool = CONSTANT_IDS if allow_complex else tuple(c for c in CONSTANT_IDS if c != "i")
    return const(rng.choice(pool))


def random_expr(rng: random.Random, depth: int = 4, *, allow_delta: bool = False,
                allow_complex: bool = True, allow_ylm: bool = True,
                allow_constants: bool = True,
                symbols: tuple[str, ...] = ("x", "y", "r", "t")) -> Expr:
    """Random canonical expression; printable and reparsable by construction
    (no float scalars, default angle names).

    ``allow_constants=False`` keeps leaves at O(1) magnitudes, which the
    finite-difference and float-equality oracles need (physical constants
    span 1e-34..3e8 and wreck their conditioning without exercising anything
    the symbolic engine does differently).
    """
    if depth <= 0:
        return _leaf(rng, symbols, allow_complex, allow_constants)
    kw = dict(allow_delta=allow_delta, allow_complex=allow_complex,
              allow_ylm=allow_ylm, allow_constants=allow_constants,
              symbols=symbols)
    try:
        roll = rng.random()
        if roll < 0.30:
            return add(*(random_expr(rng, depth - 1, **kw)
                         for _ in range(rng.randint(2, 3))))
        if roll < 0.55:
            return mul(*(random_expr(rng, depth - 1, **kw)
                         for _ in range(rng.randint(2, 3))))
        if roll < 0.70:
            return pow_(random_expr(rng, depth - 1, **kw), rng.choice(_EXPONENTS))
        if roll < 0.85:
            fn = rng.choice(("exp", "sin", "cos", "log"))
            return apply_fn(fn, random_expr(rng, depth - 1, **kw))
        if roll < 0.90 and allow_complex:
            return re_(random_expr(rng, depth - 1, **kw))
        if roll < 0.95 and allow_ylm:
            l = rng.randint(0, 3)
            return ylm(l, rng.randint(-l, l))
        if allow_delta:
            var = sym(rng.choice(symbols))
            slope = rng.choice((1, 1, 2, -1))
            offset = rat(rng.randint(-3, 3), rng.randint(1, 2))
            return delta(add(mul(rat(slope), var), offset), rng.randint(0, 2))
    except InvalidNodeError:
        pass  # e.g. a collapsed-to-zero base raised to a negative power
    return _leaf(rng, symbols, allow_complex, allow_constants)


@pytest.fixture(scope="session")
def audit_config():
    from hydrino_audit.config import AuditConfig
    return AuditConfig()


@pytest.fixture(scope="session")
def full_report(audit_config):
    from hydrino_audit.claims import run_all
    return run_all(audit_config)
