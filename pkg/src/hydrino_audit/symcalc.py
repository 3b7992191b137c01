"""Symbolic differentiation, simplification, numeric evaluation and residuals.

The differential operators here act on smooth (delta-free) expressions; the
distributional calculus lives in :mod:`hydrino_audit.weakform`.  The angular
Laplacian never differentiates a spherical-harmonic atom directly; it acts
through the eigenrelation  Lap_ang Y(l,m) = -l(l+1) Y(l,m)  and a
finite-difference cross-check is provided as an independent numeric route.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from scipy.special import lpmv

from .constants import DEFAULT_CONSTANTS, PhysicalConstants, constant_value
from .expr import (
    Apply,
    Delta,
    Expr,
    FloatScalar,
    NamedConstant,
    Power,
    Product,
    Rational,
    RealPart,
    SphHarmonic,
    Sum,
    Symbol,
    add,
    contains_delta,
    contains_i,
    mul,
    pow_,
    rat,
    re_,
    sym,
    walk,
)


class DeltaInSmoothContextError(ValueError):
    """A delta node reached an operation that requires smooth expressions."""


class UnsupportedDerivativeError(ValueError):
    """Direct theta/phi differentiation of a spherical-harmonic atom."""


class UnboundSymbolError(KeyError):
    pass


class NonRealResultError(ArithmeticError):
    """An i-carrying expression was evaluated outside a real-part node."""


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EulerRadial:
    """f -> d/dr (r^2 df/dr), the radial piece of the spherical Laplacian
    without its 1/r^2 prefactor."""
    var: str = "r"


@dataclass(frozen=True)
class AngularLaplacian:
    pass


@dataclass(frozen=True)
class SecondTimeDerivative:
    var: str = "t"


@dataclass(frozen=True)
class WaveOperator:
    """d'Alembert operator: full spherical Laplacian minus (1/v^2) d2/dt2.
    The phase velocity must evaluate to a strictly positive number."""
    velocity: Expr
    r_var: str = "r"
    t_var: str = "t"


@dataclass(frozen=True)
class AngularTimeOperator:
    """The separated angular+time operator as the source equations state it:
    (1/r^2) Lap_ang + (1/v^2) d2/dt2, checked at fixed radius."""
    velocity: Expr
    radius: Expr
    t_var: str = "t"


DiffOperator = Union[EulerRadial, AngularLaplacian, SecondTimeDerivative,
                     WaveOperator, AngularTimeOperator]


# ---------------------------------------------------------------------------
# differentiation
# ---------------------------------------------------------------------------

def differentiate(e: Expr, var: str) -> Expr:
    if contains_delta(e):
        raise DeltaInSmoothContextError(
            "delta-in-smooth-context: distributional derivatives live in weakform")
    return _diff(e, var)


def _diff(e: Expr, var: str) -> Expr:
    if isinstance(e, (Rational, FloatScalar, NamedConstant)):
        return rat(0)
    if isinstance(e, Symbol):
        return rat(1) if e.name == var else rat(0)
    if isinstance(e, SphHarmonic):
        if var in (e.theta, e.phi):
            raise UnsupportedDerivativeError(
                f"direct {var}-derivative of Y({e.l},{e.m}); angular action goes "
                "through the eigenrelation")
        return rat(0)
    if isinstance(e, Sum):
        return add(*(_diff(t, var) for t in e.terms))
    if isinstance(e, Product):
        terms = []
        for idx, f in enumerate(e.factors):
            rest = e.factors[:idx] + e.factors[idx + 1:]
            terms.append(mul(_diff(f, var), *rest))
        return add(*terms)
    if isinstance(e, Power):
        q = e.exponent
        return mul(Rational(q), pow_(e.base, q - 1), _diff(e.base, var))
    if isinstance(e, Apply):
        inner = _diff(e.arg, var)
        if e.fn == "exp":
            outer = e
        elif e.fn == "sin":
            outer = Apply("cos", e.arg)
        elif e.fn == "cos":
            outer = mul(rat(-1), Apply("sin", e.arg))
        elif e.fn == "log":
            outer = pow_(e.arg, -1)
        else:  # pragma: no cover - closed function set
            raise UnsupportedDerivativeError(e.fn)
        return mul(outer, inner)
    if isinstance(e, RealPart):
        # Re commutes with d/dt for a real variable
        return re_(_diff(e.arg, var))
    raise UnsupportedDerivativeError(repr(e))  # pragma: no cover


# ---------------------------------------------------------------------------
# simplification
# ---------------------------------------------------------------------------

def simplify(e: Expr) -> Expr:
    """Fixpoint of the rewrite set: collect like terms, merge same-base powers,
    fold rational scalars, x^0 -> 1, 0-annihilation, exp(0) -> 1, and real-part
    reduction for i-free arguments."""
    prev = None
    cur = e
    for _ in range(64):
        if cur == prev:
            return cur
        prev, cur = cur, _simplify_once(cur)
    raise RuntimeError("simplify did not reach a fixpoint")  # pragma: no cover


def _simplify_once(e: Expr) -> Expr:
    if isinstance(e, Sum):
        return _collect_terms([_simplify_once(t) for t in e.terms])
    if isinstance(e, Product):
        return _merge_powers([_simplify_once(f) for f in e.factors])
    if isinstance(e, Power):
        base = _simplify_once(e.base)
        if isinstance(base, Product) and e.exponent.denominator == 1:
            return mul(*(pow_(f, e.exponent) for f in base.factors))
        return pow_(base, e.exponent)
    if isinstance(e, Apply):
        arg = _simplify_once(e.arg)
        zero, one = rat(0), rat(1)
        if e.fn == "exp" and arg == zero:
            return one
        if e.fn == "log" and arg == one:
            return zero
        if e.fn == "sin" and arg == zero:
            return zero
        if e.fn == "cos" and arg == zero:
            return one
        return Apply(e.fn, arg)
    if isinstance(e, RealPart):
        return _reduce_real_part(_simplify_once(e.arg))
    if isinstance(e, Delta):
        return Delta(_simplify_once(e.arg), e.order)
    return e


def expand(e: Expr) -> Expr:
    """Distribute products over sums (needed before like-term collection can
    cancel distributional derivatives of product-rule output)."""
    if isinstance(e, Sum):
        return add(*(expand(t) for t in e.terms))
    if isinstance(e, Product):
        combos: list[list[Expr]] = [[]]
        for f in (expand(f) for f in e.factors):
            branches = f.terms if isinstance(f, Sum) else (f,)
            combos = [combo + [b] for combo in combos for b in branches]
        if len(combos) == 1:
            return mul(*combos[0])
        return add(*(mul(*combo) for combo in combos))
    if isinstance(e, Power):
        return pow_(expand(e.base), e.exponent)
    if isinstance(e, Apply):
        return Apply(e.fn, expand(e.arg))
    if isinstance(e, RealPart):
        return re_(expand(e.arg))
    if isinstance(e, Delta):
        return Delta(expand(e.arg), e.order)
    return e


def _term_parts(t: Expr) -> tuple[Fraction, Expr | None]:
    if isinstance(t, Rational):
        return t.value, None
    if isinstance(t, Product):
        coeff = Fraction(1)
        rest = []
        for f in t.factors:
            if isinstance(f, Rational):
                coeff *= f.value
            else:
                rest.append(f)
        return coeff, mul(*rest)
    return Fraction(1), t


def _collect_terms(terms: list[Expr]) -> Expr:
    groups: dict[Expr | None, Fraction] = {}
    order: list[Expr | None] = []
    for t in terms:
        for piece in (t.terms if isinstance(t, Sum) else (t,)):
            coeff, key = _term_parts(piece)
            if key not in groups:
                groups[key] = Fraction(0)
                order.append(key)
            groups[key] += coeff
    out = []
    for key in order:
        coeff = groups[key]
        if coeff == 0:
            continue
        out.append(Rational(coeff) if key is None else mul(Rational(coeff), key))
    return add(*out)


def _merge_powers(factors: list[Expr]) -> Expr:
    coeff = Fraction(1)
    exps: dict[Expr, Fraction] = {}
    order: list[Expr] = []
    for f0 in factors:
        for f in (f0.factors if isinstance(f0, Product) else (f0,)):
            if isinstance(f, Rational):
                coeff *= f.value
                continue
            base, q = (f.base, f.exponent) if isinstance(f, Power) else (f, Fraction(1))
            if base not in exps:
                exps[base] = Fraction(0)
                order.append(base)
            exps[base] += q
    if coeff == 0:
        return rat(0)
    out = [Rational(coeff)]
    for base in order:
        out.append(pow_(base, exps[base]))
    return mul(*out)


def _reduce_real_part(arg: Expr) -> Expr:
    if not contains_i(arg):
        return arg
    if isinstance(arg, NamedConstant) and arg.name == "i":
        return rat(0)
    if isinstance(arg, Sum):
        return add(*(_reduce_real_part(t) for t in arg.terms))
    if isinstance(arg, Product):
        real_factors = [f for f in arg.factors if not contains_i(f)]
        complex_factors = [f for f in arg.factors if contains_i(f)]
        if real_factors:
            return mul(*real_factors, _simplify_once(re_(mul(*complex_factors))))
    if isinstance(arg, RealPart):
        return _reduce_real_part(arg.arg)
    return re_(arg)


# ---------------------------------------------------------------------------
# operator application
# ---------------------------------------------------------------------------

def apply_operator(op: DiffOperator, e: Expr) -> Expr:
    if isinstance(op, EulerRadial):
        r = sym(op.var)
        inner = mul(pow_(r, 2), differentiate(e, op.var))
        return simplify(differentiate(simplify(inner), op.var))
    if isinstance(op, AngularLaplacian):
        return simplify(_angular_laplacian(e))
    if isinstance(op, SecondTimeDerivative):
        return simplify(differentiate(simplify(differentiate(e, op.var)), op.var))
    if isinstance(op, WaveOperator):
        r = sym(op.r_var)
        radial = mul(pow_(r, -2), apply_operator(EulerRadial(op.r_var), e))
        angular = mul(pow_(r, -2), _angular_laplacian(e))
        time = mul(rat(-1), pow_(op.velocity, -2),
                   apply_operator(SecondTimeDerivative(op.t_var), e))
        return simplify(add(radial, angular, time))
    if isinstance(op, AngularTimeOperator):
        angular = mul(pow_(op.radius, -2), _angular_laplacian(e))
        time = mul(pow_(op.velocity, -2),
                   apply_operator(SecondTimeDerivative(op.t_var), e))
        return simplify(add(angular, time))
    raise TypeError(f"unknown operator {op!r}")


def _angular_laplacian(e: Expr) -> Expr:
    if isinstance(e, SphHarmonic):
        return mul(rat(-e.l * (e.l + 1)), e)
    if not _depends_on_angles(e):
        return rat(0)
    if isinstance(e, Sum):
        return add(*(_angular_laplacian(t) for t in e.terms))
    if isinstance(e, Product):
        angular = [f for f in e.factors if _depends_on_angles(f)]
        rest = [f for f in e.factors if not _depends_on_angles(f)]
        if len(angular) == 1:
            return mul(*rest, _angular_laplacian(angular[0]))
        raise UnsupportedDerivativeError(
            "angular Laplacian of a product of angular factors")
    if isinstance(e, RealPart):
        return re_(_angular_laplacian(e.arg))
    raise UnsupportedDerivativeError(
        f"angular Laplacian acts only on combinations of Y atoms, got {e!r}")


def _depends_on_angles(e: Expr) -> bool:
    for node in walk(e):
        if isinstance(node, SphHarmonic):
            return True
        if isinstance(node, Symbol) and node.name in ("theta", "phi"):
            return True
    return False


# ---------------------------------------------------------------------------
# numeric evaluation
# ---------------------------------------------------------------------------

@dataclass
class EvalPoint:
    bindings: dict[str, float]

    def __post_init__(self):
        theta = self.bindings.get("theta")
        if theta is not None and not (0.0 <= theta <= math.pi):
            raise ValueError(f"theta={theta} outside [0, pi]")
        phi = self.bindings.get("phi")
        if phi is not None and not (0.0 <= phi < 2.0 * math.pi):
            raise ValueError(f"phi={phi} outside [0, 2 pi)")


def eval_numeric(e: Expr, at: EvalPoint | dict[str, float],
                 constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    bindings = at.bindings if isinstance(at, EvalPoint) else at
    z = _eval(e, bindings, constants)
    scale = max(1.0, abs(z.real))
    if abs(z.imag) > 1e-10 * scale:
        raise NonRealResultError(
            f"non-real result {z}; wrap i-carrying expressions in Re(...)")
    return z.real


def _eval(e: Expr, b: dict[str, float], constants: PhysicalConstants) -> complex:
    if isinstance(e, Rational):
        return complex(e.value)
    if isinstance(e, FloatScalar):
        return complex(e.value)
    if isinstance(e, NamedConstant):
        return complex(constant_value(e.name, constants))
    if isinstance(e, Symbol):
        try:
            return complex(b[e.name])
        except KeyError:
            raise UnboundSymbolError(e.name) from None
    if isinstance(e, Sum):
        return sum(_eval(t, b, constants) for t in e.terms)
    if isinstance(e, Product):
        out = complex(1.0)
        for f in e.factors:
            out *= _eval(f, b, constants)
        return out
    if isinstance(e, Power):
        base = _eval(e.base, b, constants)
        q = e.exponent
        if q.denominator == 1:
            return base ** q.numerator
        if base.imag == 0 and base.real >= 0:
            return complex(base.real ** float(q))
        return base ** float(q)
    if isinstance(e, Apply):
        arg = _eval(e.arg, b, constants)
        fn = getattr(cmath, e.fn)
        return fn(arg)
    if isinstance(e, RealPart):
        return complex(_eval(e.arg, b, constants).real)
    if isinstance(e, SphHarmonic):
        theta = b.get(e.theta)
        phi = b.get(e.phi)
        if theta is None or phi is None:
            raise UnboundSymbolError(e.theta if theta is None else e.phi)
        return complex(real_sph_harmonic(e.l, e.m, theta, phi))
    if isinstance(e, Delta):
        raise DeltaInSmoothContextError(
            "cannot evaluate a delta distribution pointwise")
    raise TypeError(repr(e))  # pragma: no cover


def real_sph_harmonic(l: int, m: int, theta: float, phi: float) -> float:
    """Real spherical harmonics (cos/sin combinations), Condon-Shortley phase
    carried by the associated Legendre factor."""
    am = abs(m)
    norm = math.sqrt((2 * l + 1) / (4.0 * math.pi)
                     * math.factorial(l - am) / math.factorial(l + am))
    p = float(lpmv(am, l, math.cos(theta)))
    if m == 0:
        return norm * p
    if m > 0:
        return math.sqrt(2.0) * norm * p * math.cos(m * phi)
    return math.sqrt(2.0) * norm * p * math.sin(am * phi)


# ---------------------------------------------------------------------------
# residuals and finite-difference cross-checks
# ---------------------------------------------------------------------------

@dataclass
class ResidualResult:
    symbolic: Expr
    values: list[float]
    tol: float

    @property
    def passes(self) -> bool:
        return self.symbolic == rat(0) or all(abs(v) < self.tol for v in self.values)


def residual(op: DiffOperator, candidate: Expr, at: list[EvalPoint | dict],
             constants: PhysicalConstants = DEFAULT_CONSTANTS,
             tol_sym: float = 1e-10) -> ResidualResult:
    """Symbolic residual of ``op`` applied to ``candidate`` plus its values at
    the given points.  Delta-carrying candidates belong to weakform instead."""
    if contains_delta(candidate):
        raise DeltaInSmoothContextError(
            "delta-carrying candidate: use weakform.weak_residual")
    symbolic = apply_operator(op, candidate)
    if symbolic == rat(0):
        values = [0.0 for _ in at]
    else:
        values = [eval_numeric(symbolic, p, constants) for p in at]
    return ResidualResult(symbolic, values, tol_sym)


def derivative_fd(e: Expr, var: str, at: dict[str, float],
                  constants: PhysicalConstants = DEFAULT_CONSTANTS,
                  h: float = 1e-5) -> float:
    """Central finite difference of eval_numeric, the independent oracle for
    the symbolic derivative."""
    x = at[var]
    step = h * max(1.0, abs(x))
    up = dict(at, **{var: x + step})
    dn = dict(at, **{var: x - step})
    return (eval_numeric(e, up, constants) - eval_numeric(e, dn, constants)) / (2 * step)


def _second_fd(f, x: float, h: float) -> float:
    # 4th-order central second difference
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x)
            + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h)


def _first_fd(f, x: float, h: float) -> float:
    # 4th-order central first difference
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


def angular_laplacian_fd(e: Expr, at: dict[str, float],
                         constants: PhysicalConstants = DEFAULT_CONSTANTS,
                         h: float = 1e-3) -> float:
    """Finite-difference angular Laplacian
    (1/sin th) d_th(sin th d_th) + (1/sin^2 th) d2_phi, away from the poles."""
    theta = at["theta"]
    phi = at["phi"]

    def f_theta(th):
        return eval_numeric(e, dict(at, theta=th), constants)

    def f_phi(ph):
        return eval_numeric(e, dict(at, phi=ph % (2 * math.pi)), constants)

    d2t = _second_fd(f_theta, theta, h)
    d1t = _first_fd(f_theta, theta, h)
    d2p = _second_fd(f_phi, phi, h)
    st = math.sin(theta)
    return d2t + d1t * math.cos(theta) / st + d2p / (st * st)
