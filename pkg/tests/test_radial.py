import numpy as np
import pytest

from hydrino_audit.radial import (
    DECAY_FAIL,
    NORM_FAIL_ORIGIN,
    ORIGIN_FAIL,
    RadialProblem,
    _classify_infinity,
    _origin_exponent_fit,
    admissibility,
    classify_origin_convergence,
    eigenvalue_scan,
    integrate_radial,
    wronskian_match,
)


def u_closed(n: int, l: int, r: np.ndarray) -> np.ndarray:
    """Unnormalized closed-form hydrogen u = r R_nl in atomic units."""
    if (n, l) == (1, 0):
        return r * np.exp(-r)
    if (n, l) == (2, 0):
        return r * (1 - r / 2) * np.exp(-r / 2)
    if (n, l) == (2, 1):
        return r**2 * np.exp(-r / 2)
    if (n, l) == (3, 0):
        return r * (1 - 2 * r / 3 + 2 * r**2 / 27) * np.exp(-r / 3)
    if (n, l) == (3, 1):
        return r**2 * (1 - r / 6) * np.exp(-r / 3)
    if (n, l) == (3, 2):
        return r**3 * np.exp(-r / 3)
    raise KeyError((n, l))


def _compare_to_closed_form(sol, n, l, lo, hi, tol):
    mask = (sol.grid >= lo) & (sol.grid <= hi)
    num = sol.u_values[mask]
    exact = u_closed(n, l, sol.grid[mask])
    scale = float(np.dot(num, exact) / np.dot(exact, exact))
    amp = np.max(np.abs(exact))
    err = np.max(np.abs(num / scale - exact) / np.maximum(np.abs(exact), 1e-3 * amp))
    assert err < tol, f"(n,l)=({n},{l}): max rel err {err:.3e}"


@pytest.mark.parametrize("n,l", [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)])
def test_inward_matches_closed_form(n, l):
    # rtol below the module default: the oracle comparison needs headroom
    # over the r^(-l) contamination one-sided shooting injects near r = 0
    sol = integrate_radial(RadialProblem(nu=float(n), l=l), "inward-decaying",
                           rtol=1e-12)
    _compare_to_closed_form(sol, n, l, 0.1, 20.0, 1e-7)
    assert sol.infinity_class == "decaying"
    if l == 0:
        # for l >= 1 the one-sided tail below the r^(-l) contamination floor
        # is not certifiable; eigenstate norms go through Wronskian matching
        assert sol.norm_integral.kind == "finite"


def test_ground_state_strict_relative_error():
    sol = integrate_radial(RadialProblem(nu=1.0, l=0), "inward-decaying")
    mask = (sol.grid >= 0.1) & (sol.grid <= 20.0)
    exact = 2 * sol.grid[mask] * np.exp(-sol.grid[mask])
    num = sol.u_values[mask]
    scale = num[0] / exact[0]
    assert np.max(np.abs(num / scale - exact) / np.abs(exact)) < 1e-7


@pytest.mark.parametrize("n,l", [(1, 0), (2, 0), (2, 1)])
def test_outward_matches_closed_form_in_stable_window(n, l):
    # one-sided outward integration accumulates growing-solution contamination
    # past r ~ 6; compare on the well-conditioned window
    sol = integrate_radial(RadialProblem(nu=float(n), l=l), "outward-regular")
    _compare_to_closed_form(sol, n, l, 0.1, 4.0, 1e-7)


def test_excited_state_energy_and_nodes():
    p = RadialProblem(nu=2.0, l=0)
    assert p.energy == pytest.approx(-0.125, rel=1e-15)
    sol = integrate_radial(p, "inward-decaying")
    assert sol.interior_nodes() == 1


@pytest.mark.parametrize("n,l,nodes", [(1, 0, 0), (2, 0, 1), (3, 0, 2),
                                       (3, 1, 1), (3, 2, 0)])
def test_node_counting(n, l, nodes):
    sol = integrate_radial(RadialProblem(nu=float(n), l=l), "inward-decaying",
                           rtol=1e-12)
    assert sol.interior_nodes() == nodes


@pytest.mark.parametrize("l", [0, 1, 2, 3])
def test_frobenius_exponent_outward(l):
    sol = integrate_radial(RadialProblem(nu=2.5, l=l), "outward-regular")
    assert sol.origin_exponent == pytest.approx(l + 1, abs=0.01)
    assert sol.origin_fit_r2 >= 0.999


@pytest.mark.parametrize("l", [1, 2])
def test_frobenius_exponent_second_solution(l):
    # at non-eigen nu the decaying solution carries the irregular r^-l branch
    sol = integrate_radial(RadialProblem(nu=1.5, l=l), "inward-decaying")
    assert sol.origin_exponent == pytest.approx(-l, abs=0.02)


def test_outward_exponent_example():
    sol = integrate_radial(RadialProblem(nu=2.0, l=1), "outward-regular")
    assert sol.origin_exponent == pytest.approx(2.0, abs=0.01)


def test_seed_region_validation():
    from hydrino_audit.radial import SeedRegionError
    with pytest.raises(SeedRegionError):
        integrate_radial(RadialProblem(nu=1.0, l=0, r_min=0.1), "outward-regular")
    with pytest.raises(SeedRegionError):
        integrate_radial(RadialProblem(nu=1.0, l=0, r_max=5.0), "inward-decaying")


def test_overflow_guard_bookkeeping():
    # a steep problem forces renormalization; the returned profile still
    # normalizes cleanly and keeps its decay classification
    from hydrino_audit.radial import OVERFLOW_GUARD
    p = RadialProblem(nu=0.1, l=0, r_max=400.0, grid_points=1000)
    sol = integrate_radial(p, "outward-regular", rtol=1e-8)
    assert np.max(np.abs(sol.u_values)) == pytest.approx(1.0)
    assert sol.infinity_class == "growing"
    assert np.all(np.isfinite(sol.u_values))
    assert np.max(np.abs(sol.u_values)) <= OVERFLOW_GUARD


def test_problem_validation():
    with pytest.raises(ValueError):
        RadialProblem(nu=0.0, l=0)
    with pytest.raises(ValueError):
        RadialProblem(nu=1.0, l=-1)
    with pytest.raises(ValueError):
        RadialProblem(nu=1.0, l=0, grid_points=999)
    with pytest.raises(ValueError):
        RadialProblem(nu=1.0, l=0, r_min=2.0, r_max=1.0)
    with pytest.raises(ValueError):
        integrate_radial(RadialProblem(nu=1.0, l=0), "sideways")


# ---------------------------------------------------------------------------
# norm classifier calibration
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("p,label", [(-2.0, "divergent"), (-1.0, "divergent"),
                                     (-0.6, "divergent"), (-0.4, "convergent"),
                                     (0.0, "convergent"), (1.0, "convergent")])
def test_norm_classifier_synthetic_power_laws(p, label):
    grid = np.geomspace(1e-4, 1.0, 2000)
    u = grid ** p
    slope, _, r2 = _origin_exponent_fit(grid, u, 1e-4)
    assert slope == pytest.approx(p, abs=1e-6)
    if abs(p) > 1e-9:
        assert r2 > 0.999
    assert classify_origin_convergence(slope) == label


def test_infinity_classifier_synthetic_growth():
    grid = np.geomspace(0.1, 30.0, 2000)
    assert _classify_infinity(grid, np.exp(2 * grid) / np.exp(60.0)) == "growing"
    assert _classify_infinity(grid, np.exp(-grid)) == "decaying"


# ---------------------------------------------------------------------------
# Wronskian matching and the eigenvalue scan
# ---------------------------------------------------------------------------

def test_wronskian_at_eigenvalues():
    assert abs(wronskian_match(1.0, 0, 2.0)) < 1e-6
    assert abs(wronskian_match(2.0, 0, 3.0)) < 1e-6


def test_wronskian_between_eigenvalues():
    # frozen from a high-precision Whittaker-function evaluation: the
    # normalized Wronskian saturates at 1.0 at nu = 1.5
    w = wronskian_match(1.5, 0, 2.0)
    assert abs(w) > 1e-2
    assert w == pytest.approx(1.0, abs=1e-6)


def test_wronskian_range_validation():
    with pytest.raises(ValueError):
        wronskian_match(1.0, 0, 50.0)


def test_eigenvalue_scan_structure(audit_config):
    zeros = eigenvalue_scan(0.3, 3.5, 200, l=0,
                            r_match=audit_config.scan_r_match,
                            r_max_factor=audit_config.scan_r_max_factor,
                            rtol=audit_config.scan_rtol)
    assert len(zeros) == 3
    for z, n in zip(zeros, (1.0, 2.0, 3.0)):
        assert z == pytest.approx(n, abs=1e-3)
    assert all(z > 1.0 - 1e-3 for z in zeros)


# ---------------------------------------------------------------------------
# admissibility
# ---------------------------------------------------------------------------

def test_ground_state_admissible():
    v = admissibility(1.0, 0)
    assert v.admissible
    assert not v.failure_modes
    assert abs(v.wronskian) < 1e-6


def test_analytic_excited_state_admissible():
    v = admissibility(3.0, 1)
    assert v.admissible


def test_fractional_nu_not_admissible():
    """Failure modes frozen from the pre-build high-precision oracle: the
    decaying solution at nu = 0.5, l = 0 tends to 1/sqrt(pi) at the origin and
    IS square-integrable; what fails is origin regularity (and the regular
    solution's growth at infinity)."""
    v = admissibility(0.5, 0)
    assert not v.admissible
    assert v.square_integrable is True
    assert v.origin_regular is False
    assert v.decaying_at_infinity is False
    assert v.failure_modes == [ORIGIN_FAIL, DECAY_FAIL]
    assert abs(v.origin_exponent) < 0.05


def test_fractional_nu_l1_norm_divergent():
    # for l >= 1 the irregular r^-l branch does break square-integrability
    v = admissibility(1.5, 1)
    assert not v.admissible
    assert NORM_FAIL_ORIGIN in v.failure_modes
    assert v.origin_exponent == pytest.approx(-1.0, abs=0.02)


def test_admissibility_validation():
    with pytest.raises(ValueError):
        admissibility(-1.0, 0)
