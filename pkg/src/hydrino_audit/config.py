"""Run configuration: tolerances, battery parameters, sample points and
constants overrides, loadable from a TOML file."""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field, fields, replace

from .constants import PhysicalConstants

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


@dataclass(frozen=True)
class AuditConfig:
    # symbolic residual thresholds
    tol_sym: float = 1e-10
    refute_margin: float = 10.0          # refuted needs min|res| > margin*tol_sym
    fd_agreement_tol: float = 1e-4

    # weak-form battery
    weak_solves_tol: float = 1e-9
    battery_centers: tuple[float, ...] = (0.5, 1.0, 1.5, 2.0)
    battery_widths: tuple[float, ...] = (0.1, 0.2, 0.3)
    sigma_display: tuple[float, ...] = (0.05, 0.02, 0.01, 0.005)
    sigma_extrapolate: tuple[float, ...] = (1e-3, 5e-4, 2.5e-4, 1.25e-4)
    quad_atol: float = 1e-12
    quad_rtol: float = 1e-10
    path_agreement_tol: float = 1e-8

    # angular/time sample points (r_n = 1 atomic unit, omega_n = 1)
    r_n: float = 1.0
    sample_thetas: tuple[float, ...] = (math.pi / 3, math.pi / 4)
    sample_phis: tuple[float, ...] = (0.0, math.pi / 2)
    sample_times: tuple[float, ...] = (0.0, math.pi / 2)

    # candidates for the radial Euler checks
    general_solution_expr: str = "c1 + c2/r"
    general_solution_bindings: tuple[tuple[str, float], ...] = (("c1", 1.0), ("c2", 1.0))
    shell_candidate_expr: str = "delta(r - r_n)/r"

    # delta-identity battery (center, width, kind) on the whole line
    delta_identity_orders: tuple[int, ...] = (1, 2, 3)
    line_test_functions: tuple[tuple[float, float, str], ...] = (
        (0.0, 0.3, "gaussian"),
        (0.0, 0.15, "gaussian"),
        (0.0, 1.0, "polynomial"),
        (0.0, 0.5, "polynomial"),
        (0.3, 0.2, "polynomial"),
    )

    # hydrino table
    k_max: int = 200

    # radial admissibility / eigenvalue scan
    radial_rtol: float = 1e-10
    wronskian_zero_tol: float = 1e-6
    scan_nu_min: float = 0.3
    scan_nu_max: float = 3.5
    scan_steps: int = 200
    scan_l: int = 0
    scan_r_match: float = 2.0
    scan_r_max_factor: float = 25.0
    scan_rtol: float = 1e-8

    # uniqueness scan
    uniqueness_samples: int = 100_000

    constants: PhysicalConstants = field(default_factory=PhysicalConstants)

    def snapshot(self) -> dict:
        """Plain-data view embedded in reports (constants listed separately)."""
        out = {}
        for f in fields(self):
            if f.name == "constants":
                continue
            v = getattr(self, f.name)
            out[f.name] = list(v) if isinstance(v, tuple) else v
        return out


_SECTION_KEYS = {
    "tolerances": ("tol_sym", "refute_margin", "fd_agreement_tol", "weak_solves_tol",
                   "quad_atol", "quad_rtol", "path_agreement_tol",
                   "wronskian_zero_tol", "radial_rtol"),
    "battery": ("battery_centers", "battery_widths", "sigma_display",
                "sigma_extrapolate"),
    "samples": ("r_n", "sample_thetas", "sample_phis", "sample_times"),
    "candidates": ("general_solution_expr", "shell_candidate_expr"),
    "hydrino": ("k_max",),
    "radial": ("scan_nu_min", "scan_nu_max", "scan_steps", "scan_l",
               "scan_r_match", "scan_r_max_factor", "scan_rtol"),
    "uniqueness": ("uniqueness_samples",),
}

_TUPLE_KEYS = {"battery_centers", "battery_widths", "sigma_display",
               "sigma_extrapolate", "sample_thetas", "sample_phis", "sample_times"}


def load_config(path: str | None = None) -> AuditConfig:
    """Defaults merged with the TOML file at ``path`` (if given)."""
    cfg = AuditConfig()
    if path is None:
        return cfg
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    updates = {}
    for section, keys in _SECTION_KEYS.items():
        block = data.get(section, {})
        for key, value in block.items():
            if key not in keys:
                raise KeyError(f"unknown config key {section}.{key}")
            updates[key] = tuple(value) if key in _TUPLE_KEYS else value
    if "constants" in data:
        allowed = {"alpha", "hbar", "electron_mass", "light_speed",
                   "elementary_charge", "rydberg_energy", "stability_bound",
                   "bohr_radius"}
        overrides = data["constants"]
        unknown = set(overrides) - allowed
        if unknown:
            raise KeyError(f"unknown constants override(s): {sorted(unknown)}")
        updates["constants"] = PhysicalConstants(**overrides)
    return replace(cfg, **updates)
