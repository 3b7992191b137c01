"""Distribution-theoretic solution checking on the half line.

A candidate f (possibly carrying delta nodes with affine arguments) is tested
against the radial Euler operator  L f = d/dr (r^2 df/dr)  by pairing with
smooth compactly supported test functions:

    <L f, phi> = <f, L phi>           (L is formally self-adjoint; boundary
                                       terms vanish on compact support)

Delta pieces are sifted exactly,

    <delta^(k)(a r + b), h> = (1/|a|) (-1/a)^k h^(k)(-b/a),

smooth pieces go through adaptive quadrature, and (whenever deltas are
present) two independent cross-checks run: a distributional closed form of
L f obtained by symbolic delta calculus, and a mollified-quadrature route
where the delta is replaced by a narrow normalized gaussian and the pairing
extrapolated to zero width (the error is a series in sigma^2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .constants import DEFAULT_CONSTANTS, PhysicalConstants
from .expr import (
    Delta,
    Expr,
    Product,
    Sum,
    Symbol,
    add,
    contains_delta,
    delta as delta_node,
    free_symbols,
    mul,
    pow_,
    rat,
    sym,
)
from .symcalc import EulerRadial, differentiate, eval_numeric, expand, simplify


class SupportError(ValueError):
    """Test-function support touches the origin (or is otherwise invalid)."""


class QuadratureError(ArithmeticError):
    """Adaptive quadrature tolerance not reached within the refinement cap."""


class UnsupportedCandidateError(ValueError):
    """Candidate outside the supported class (nested or multiplied deltas)."""


# ---------------------------------------------------------------------------
# test functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TestFunction:
    """Smooth compactly supported bump.

    polynomial kind: amplitude * (1 - ((r-c)/w)^2)^4 on [c-w, c+w].
    gaussian kind:   amplitude * exp(-u^2/2 + 1 - 1/(1-s^2)) with u=(r-c)/w,
                     s=(r-c)/(5w), a gaussian with a smooth cutoff giving it
                     exact support [c-5w, c+5w].

    domain "half-line" enforces support strictly inside (0, inf); "line" is
    used by the whole-line delta-identity check.
    """
    center: float
    width: float
    amplitude: float = 1.0
    kind: str = "polynomial"
    domain: str = "half-line"

    __test__ = False  # not a pytest collection target

    def __post_init__(self):
        if self.kind not in ("polynomial", "gaussian"):
            raise ValueError(f"unknown test-function kind {self.kind!r}")
        if self.domain not in ("half-line", "line"):
            raise ValueError(f"unknown domain {self.domain!r}")
        if self.width <= 0.0:
            raise SupportError("test-function width must be positive")
        lo, hi = self.support
        if self.domain == "half-line":
            if self.center <= 0.0:
                raise SupportError("test-function center must be positive")
            if lo <= 0.0:
                raise SupportError(
                    f"support-touches-origin: [{lo}, {hi}] not strictly inside (0, inf)")

    @property
    def half_support(self) -> float:
        return self.width if self.kind == "polynomial" else 5.0 * self.width

    @property
    def support(self) -> tuple[float, float]:
        return (self.center - self.half_support, self.center + self.half_support)

    def __call__(self, r):
        return self.derivative(0, r)

    def derivative(self, n: int, r):
        """n-th derivative, exact inside the support and exactly 0 outside."""
        scalar = np.isscalar(r)
        r = np.atleast_1d(np.asarray(r, dtype=float))
        if self.kind == "polynomial":
            out = self._poly_derivative(n, r)
        else:
            out = self._gauss_derivative(n, r)
        return float(out[0]) if scalar else out

    def _poly_derivative(self, n: int, r: np.ndarray) -> np.ndarray:
        v = (r - self.center) / self.width
        inside = np.abs(v) < 1.0
        poly = _POLY_BUMP.deriv(n) if n else _POLY_BUMP
        out = np.zeros_like(r)
        out[inside] = self.amplitude * poly(v[inside]) / self.width ** n
        return out

    def _gauss_derivative(self, n: int, r: np.ndarray) -> np.ndarray:
        s = (r - self.center) / (5.0 * self.width)
        one_minus_s2 = 1.0 - s * s
        # below the exp-underflow edge the bump and all derivatives vanish
        inside = one_minus_s2 > 2e-3
        out = np.zeros_like(r)
        if not inside.any():
            return out
        ri = r[inside]
        si = s[inside]
        ui = (ri - self.center) / self.width
        g_exp = -0.5 * ui * ui + 1.0 - 1.0 / (1.0 - si * si)
        phi0 = self.amplitude * np.exp(g_exp)
        derivs = [phi0]
        q = 1.0 / (5.0 * self.width)
        for m in range(n):
            acc = np.zeros_like(ri)
            for j in range(m + 1):
                acc += math.comb(m, j) * self._g_deriv(j + 1, ui, si, q) * derivs[m - j]
            derivs.append(acc)
        out[inside] = derivs[n]
        return out

    def _g_deriv(self, k: int, u: np.ndarray, s: np.ndarray, q: float) -> np.ndarray:
        # k-th derivative of the log-profile g = -u^2/2 + 1 - 1/(1-s^2)
        if k == 1:
            gauss = -u / self.width
        elif k == 2:
            gauss = np.full_like(u, -1.0 / self.width ** 2)
        else:
            gauss = np.zeros_like(u)
        fk = math.factorial(k)
        cutoff = -0.5 * fk * q ** k * ((1.0 - s) ** (-(k + 1))
                                       + (-1.0) ** k * (1.0 + s) ** (-(k + 1)))
        return gauss + cutoff


_POLY_BUMP = np.polynomial.Polynomial([1.0, 0.0, -4.0, 0.0, 6.0, 0.0, -4.0, 0.0, 1.0])


class EulerPairingProfile:
    """psi = L phi = 2 r phi' + r^2 phi'' and its derivatives, used when the
    Euler operator is moved onto the test function."""

    def __init__(self, phi: TestFunction):
        self.phi = phi
        self.support = phi.support

    def derivative(self, m: int, r):
        p = self.phi.derivative
        return (2.0 * (np.asarray(r) * p(m + 1, r) + m * p(m, r))
                + np.asarray(r) ** 2 * p(m + 2, r)
                + 2.0 * m * np.asarray(r) * p(m + 1, r)
                + m * (m - 1) * p(m, r))

    def __call__(self, r):
        return self.derivative(0, r)


class PlainPairingProfile:
    """The test function itself, for direct pairings <D, phi>."""

    def __init__(self, phi: TestFunction):
        self.phi = phi
        self.support = phi.support

    def derivative(self, m: int, r):
        return self.phi.derivative(m, r)

    def __call__(self, r):
        return self.phi.derivative(0, r)


# ---------------------------------------------------------------------------
# adaptive quadrature (15-point Gauss-Legendre panels, bisection refinement)
# ---------------------------------------------------------------------------

_GL15_X, _GL15_W = np.polynomial.legendre.leggauss(15)
_GL7_X, _GL7_W = np.polynomial.legendre.leggauss(7)


def _panel(f, a: float, b: float) -> tuple[float, float, float]:
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    f15 = f(mid + half * _GL15_X)
    i15 = half * float(np.dot(_GL15_W, f15))
    i7 = half * float(np.dot(_GL7_W, f(mid + half * _GL7_X)))
    return i15, abs(i15 - i7), float(np.max(np.abs(f15)))


def adaptive_quadrature(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                        atol: float = 1e-12, rtol: float = 1e-10,
                        max_depth: int = 60) -> float:
    """Integrate a smooth vectorized integrand over [a, b].

    Panels are accepted when the embedded GL15-GL7 error estimate falls below
    the (bisection-halved) tolerance or below the roundoff floor set by the
    largest integrand magnitude seen so far; an absolute tolerance tighter
    than eps * max|f| * width is not achievable in double precision.
    """
    if a == b:
        return 0.0
    i_whole, _, f_scale = _panel(f, a, b)
    tol0 = max(atol, rtol * abs(i_whole))
    state = {"f_scale": f_scale}

    def recurse(lo: float, hi: float, tol: float, depth: int) -> float:
        val, err, fmax = _panel(f, lo, hi)
        state["f_scale"] = max(state["f_scale"], fmax)
        floor = 2e-15 * state["f_scale"] * (hi - lo)
        if err <= max(tol, floor):
            return val
        if depth >= max_depth:
            raise QuadratureError(
                f"quadrature-nonconvergence on [{lo}, {hi}]: error {err:.3e} > {tol:.3e}")
        mid = 0.5 * (lo + hi)
        return (recurse(lo, mid, tol / 2.0, depth + 1)
                + recurse(mid, hi, tol / 2.0, depth + 1))

    return recurse(a, b, tol0, 0)


# ---------------------------------------------------------------------------
# candidate decomposition and sifting
# ---------------------------------------------------------------------------

def split_candidate(e: Expr) -> tuple[list[tuple[Expr, Delta]], Expr | None]:
    """Split into [(smooth coefficient, delta node)] plus a smooth remainder."""
    delta_terms: list[tuple[Expr, Delta]] = []
    smooth_terms: list[Expr] = []
    for term in (e.terms if isinstance(e, Sum) else (e,)):
        if not contains_delta(term):
            smooth_terms.append(term)
            continue
        if isinstance(term, Delta):
            delta_terms.append((rat(1), term))
            continue
        if isinstance(term, Product):
            deltas = [f for f in term.factors if isinstance(f, Delta)]
            rest = [f for f in term.factors if not isinstance(f, Delta)]
            if len(deltas) == 1 and not any(contains_delta(f) for f in rest):
                delta_terms.append((mul(*rest), deltas[0]))
                continue
        raise UnsupportedCandidateError(
            f"unsupported delta structure in term {term!r}")
    smooth = add(*smooth_terms) if smooth_terms else None
    return delta_terms, smooth


def _affine_parts(arg: Expr, var: str, bindings: dict[str, float],
                  constants: PhysicalConstants) -> tuple[float, float]:
    """Return (a, b) with arg = a*var + b numerically, a != 0."""
    a_terms: list[Expr] = []
    b_terms: list[Expr] = []
    for term in (arg.terms if isinstance(arg, Sum) else (arg,)):
        if var in free_symbols(term):
            if isinstance(term, Symbol):
                a_terms.append(rat(1))
            else:
                factors = [f for f in term.factors
                           if not (isinstance(f, Symbol) and f.name == var)]
                a_terms.append(mul(*factors) if factors else rat(1))
        else:
            b_terms.append(term)
    if not a_terms:
        raise UnsupportedCandidateError(
            f"delta argument {arg!r} does not involve the integration variable {var!r}")
    a = eval_numeric(add(*a_terms), bindings, constants)
    b = eval_numeric(add(*b_terms), bindings, constants) if b_terms else 0.0
    if a == 0.0:
        raise UnsupportedCandidateError("delta argument has zero slope in the variable")
    return a, b


def sift(coeff: Expr, dl: Delta, profile, var: str = "r",
         bindings: dict[str, float] | None = None,
         constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Exact pairing <coeff * delta^(k)(a var + b), profile>."""
    bindings = bindings or {}
    a, b = _affine_parts(dl.arg, var, bindings, constants)
    root = -b / a
    lo, hi = profile.support
    if root < lo or root > hi:
        return 0.0
    k = dl.order
    total = 0.0
    g = coeff
    gk = [g]
    for _ in range(k):
        gk.append(differentiate(gk[-1], var))
    for j in range(k + 1):
        gj = eval_numeric(gk[j], dict(bindings, **{var: root}), constants)
        total += math.comb(k, j) * gj * float(profile.derivative(k - j, root))
    return total / abs(a) * (-1.0 / a) ** k


# ---------------------------------------------------------------------------
# distributional closed form of the Euler operator
# ---------------------------------------------------------------------------

def differentiate_distribution(e: Expr, var: str) -> Expr:
    """Like symcalc.differentiate but with the delta rule
    d/dr delta^(k)(u) = u' * delta^(k+1)(u)."""
    if isinstance(e, Delta):
        slope = differentiate(e.arg, var)
        return mul(slope, Delta(e.arg, e.order + 1))
    if isinstance(e, Sum):
        return add(*(differentiate_distribution(t, var) for t in e.terms))
    if isinstance(e, Product):
        terms = []
        for idx, f in enumerate(e.factors):
            rest = e.factors[:idx] + e.factors[idx + 1:]
            terms.append(mul(differentiate_distribution(f, var), *rest))
        return add(*terms)
    if contains_delta(e):
        raise UnsupportedCandidateError(
            f"delta inside a non-linear context: {e!r}")
    return differentiate(e, var)


def euler_distributional(e: Expr, var: str = "r") -> Expr:
    """Closed-form L e as a distribution (delta calculus throughout)."""
    r = sym(var)
    inner = simplify(expand(differentiate_distribution(e, var)))
    outer = differentiate_distribution(simplify(expand(mul(pow_(r, 2), inner))), var)
    return simplify(expand(outer))


# ---------------------------------------------------------------------------
# mollified route
# ---------------------------------------------------------------------------

_HERMITE = {  # probabilists' He_k, for gaussian-kernel derivatives
    0: lambda x: np.ones_like(x),
    1: lambda x: x,
    2: lambda x: x * x - 1.0,
    3: lambda x: x ** 3 - 3.0 * x,
    4: lambda x: x ** 4 - 6.0 * x * x + 3.0,
}


def _gaussian_kernel_deriv(k: int, y: np.ndarray, sigma: float) -> np.ndarray:
    if k not in _HERMITE:
        raise UnsupportedCandidateError(f"mollified delta derivative order {k} > 4")
    x = y / sigma
    base = np.exp(-0.5 * x * x) / (sigma * math.sqrt(2.0 * math.pi))
    return (-1.0 / sigma) ** k * _HERMITE[k](x) * base


def mollified_pairing(candidate: Expr, profile, sigma: float, var: str = "r",
                      bindings: dict[str, float] | None = None,
                      constants: PhysicalConstants = DEFAULT_CONSTANTS,
                      atol: float = 1e-12, rtol: float = 1e-10) -> float:
    """<candidate_sigma, profile> with every delta replaced by a normalized
    gaussian of width sigma."""
    bindings = bindings or {}
    delta_terms, smooth = split_candidate(candidate)
    pieces = []
    for coeff, dl in delta_terms:
        a, b = _affine_parts(dl.arg, var, bindings, constants)
        pieces.append((coeff, dl.order, a, b))

    def integrand(r: np.ndarray) -> np.ndarray:
        out = np.zeros_like(r)
        psi = profile.derivative(0, r)
        for coeff, order, a, b in pieces:
            cvals = np.array([eval_numeric(coeff, dict(bindings, **{var: ri}), constants)
                              for ri in r])
            out += cvals * _gaussian_kernel_deriv(order, a * r + b, sigma) * psi
        if smooth is not None:
            svals = np.array([eval_numeric(smooth, dict(bindings, **{var: ri}), constants)
                              for ri in r])
            out += svals * psi
        return out

    # narrow kernels hide between the nodes of a whole-support panel, so the
    # interval is split at the edges of each +-8 sigma spike window
    lo, hi = profile.support
    breaks = {lo, hi}
    for _, _, a, b in pieces:
        root = -b / a
        for edge in (root - 8.0 * sigma / abs(a), root + 8.0 * sigma / abs(a)):
            if lo < edge < hi:
                breaks.add(edge)
    points = sorted(breaks)
    return sum(adaptive_quadrature(integrand, p, q, atol=atol, rtol=rtol)
               for p, q in zip(points[:-1], points[1:]))


def extrapolate_to_zero_width(sigmas: Sequence[float], values: Sequence[float]) -> float:
    """Richardson extrapolation in sigma^2 from the two smallest widths."""
    order = sorted(range(len(sigmas)), key=lambda i: sigmas[i])
    i1, i2 = order[1], order[0]  # second-smallest, smallest
    s1, s2 = sigmas[i1] ** 2, sigmas[i2] ** 2
    v1, v2 = values[i1], values[i2]
    return v2 + (v2 - v1) * s2 / (s1 - s2)


# ---------------------------------------------------------------------------
# weak residual and battery verdicts
# ---------------------------------------------------------------------------

def weak_residual(op: EulerRadial, candidate: Expr, phi: TestFunction,
                  bindings: dict[str, float] | None = None,
                  constants: PhysicalConstants = DEFAULT_CONSTANTS,
                  atol: float = 1e-12, rtol: float = 1e-10) -> float:
    """<L candidate, phi> computed by moving L onto phi and sifting."""
    if not isinstance(op, EulerRadial):
        raise TypeError("weak_residual supports the radial Euler operator only")
    bindings = bindings or {}
    var = op.var
    profile = EulerPairingProfile(phi)
    delta_terms, smooth = split_candidate(candidate)
    total = 0.0
    for coeff, dl in delta_terms:
        total += sift(coeff, dl, profile, var, bindings, constants)
    if smooth is not None:
        def integrand(r: np.ndarray) -> np.ndarray:
            svals = np.array([eval_numeric(smooth, dict(bindings, **{var: ri}), constants)
                              for ri in r])
            return svals * profile.derivative(0, r)
        lo, hi = phi.support
        total += adaptive_quadrature(integrand, lo, hi, atol=atol, rtol=rtol)
    return total


def default_battery(r_n: float = 1.0,
                    centers: Sequence[float] = (0.5, 1.0, 1.5, 2.0),
                    widths: Sequence[float] = (0.1, 0.2, 0.3)) -> list[TestFunction]:
    """12 test functions on the (center, width) grid scaled by r_n; gaussian
    wherever its 5-width support stays inside (0, inf), polynomial otherwise."""
    battery = []
    for c in centers:
        for w in widths:
            center, width = c * r_n, w * r_n
            kind = "gaussian" if center - 5.0 * width > 0.0 else "polynomial"
            battery.append(TestFunction(center, width, 1.0, kind))
    return battery


@dataclass
class WeakResidualReport:
    candidate: Expr
    operator: EulerRadial
    values: list[float]
    verdict: str                      # "solves" | "fails"
    tolerance: float
    sifted_closed_form: Expr | None = None
    closed_form_values: list[float] | None = None
    mollified_values: list[float] | None = None
    mollified_sigmas: list[float] = field(default_factory=list)
    agreement_max_rel: float | None = None

    @property
    def max_abs_value(self) -> float:
        return max(abs(v) for v in self.values)


def check_candidate(op: EulerRadial, candidate: Expr,
                    battery: Sequence[TestFunction] | None = None,
                    bindings: dict[str, float] | None = None,
                    constants: PhysicalConstants = DEFAULT_CONSTANTS,
                    tolerance: float = 1e-9,
                    sigma_extrapolate: Sequence[float] = (1e-3, 5e-4, 2.5e-4, 1.25e-4),
                    atol: float = 1e-12, rtol: float = 1e-10) -> WeakResidualReport:
    """Run the full test-function battery; delta candidates additionally get
    the distributional closed form and the mollified cross-check."""
    bindings = bindings or {}
    if battery is None:
        battery = default_battery(bindings.get("r_n", 1.0))
    values = [weak_residual(op, candidate, phi, bindings, constants, atol, rtol)
              for phi in battery]
    report = WeakResidualReport(
        candidate=candidate, operator=op, values=values,
        verdict="solves" if max(abs(v) for v in values) < tolerance else "fails",
        tolerance=tolerance)
    if contains_delta(candidate):
        closed = euler_distributional(candidate, op.var)
        report.sifted_closed_form = closed
        report.closed_form_values = [
            _pair_distribution(closed, PlainPairingProfile(phi), op.var,
                               bindings, constants, atol, rtol)
            for phi in battery]
        report.mollified_sigmas = list(sigma_extrapolate)
        moll = []
        for phi in battery:
            profile = EulerPairingProfile(phi)
            vals = [mollified_pairing(candidate, profile, s, op.var, bindings,
                                      constants, atol, rtol)
                    for s in sigma_extrapolate]
            moll.append(extrapolate_to_zero_width(sigma_extrapolate, vals))
        report.mollified_values = moll
        report.agreement_max_rel = max(
            _rel_disagreement(a, m) for a, m in zip(values, moll))
    return report


def _pair_distribution(dist: Expr, profile, var: str, bindings, constants,
                       atol: float, rtol: float) -> float:
    """Direct pairing <dist, phi> of a delta-carrying distribution."""
    delta_terms, smooth = split_candidate(dist)
    total = 0.0
    for coeff, dl in delta_terms:
        total += sift(coeff, dl, profile, var, bindings, constants)
    if smooth is not None:
        def integrand(r: np.ndarray) -> np.ndarray:
            svals = np.array([eval_numeric(smooth, dict(bindings, **{var: ri}), constants)
                              for ri in r])
            return svals * profile.derivative(0, r)
        lo, hi = profile.support
        total += adaptive_quadrature(integrand, lo, hi, atol=atol, rtol=rtol)
    return total


def _rel_disagreement(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


# ---------------------------------------------------------------------------
# the x^n-multiplied delta-derivative identity
# ---------------------------------------------------------------------------

def delta_identity_check(n: int, phi: TestFunction,
                         constants: PhysicalConstants = DEFAULT_CONSTANTS
                         ) -> tuple[float, float]:
    """Both sides of <x^n delta^(n)(x), phi> = (-1)^n n! phi(0).

    The left side runs through the generic sifting engine (n integrations by
    parts via the Leibniz expansion of (x^n phi)^(n)); the right side is the
    closed form evaluated directly.  The identity is checked in this
    x^n-multiplied weak form because the bare x^(-n) delta(x) right-hand side
    is not a distribution by itself.
    """
    if not 1 <= n <= 4:
        raise ValueError("delta identity implemented for orders 1..4")
    x = sym("x")
    candidate = mul(pow_(x, n), delta_node(x, n))
    left = 0.0
    delta_terms, _ = split_candidate(candidate)
    for coeff, dl in delta_terms:
        left += sift(coeff, dl, PlainPairingProfile(phi), "x", {}, constants)
    right = (-1.0) ** n * math.factorial(n) * float(phi.derivative(0, 0.0))
    return left, right
