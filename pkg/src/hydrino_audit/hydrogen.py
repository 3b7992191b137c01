"""Orbit quantization, Bohr comparison, hydrino level table, stability bound.

The quantization 2 pi r = n lambda plus de Broglie gives the orbital velocity
n*hbar/(m_e r); combining with the circular Coulomb force balance
m_e v^2 / r = alpha hbar c / r^2 yields r = n^2 a_H in closed form.  The
"cqm" mode is the n = 1 case (one wavelength per circumference), which is why
it reproduces only the ground state.  The wave's phase velocity is
lambda * f = hbar/(m_e r) in both modes.

Internally the defect-function scan runs in atomic units (hbar = m_e = e = 1,
lengths in a_H, velocities in alpha*c) to avoid underflow at SI scales.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .constants import DEFAULT_CONSTANTS, EV_IN_JOULE, PhysicalConstants


@dataclass(frozen=True)
class QuantizationMode:
    kind: str            # "cqm" | "bohr"
    n: int = 1

    def __post_init__(self):
        if self.kind not in ("cqm", "bohr"):
            raise ValueError(f"unknown quantization kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("orbit label n must be >= 1")
        if self.kind == "cqm" and self.n != 1:
            raise ValueError("cqm mode fixes one wavelength per circumference (n = 1)")

    @classmethod
    def cqm(cls) -> "QuantizationMode":
        return cls("cqm", 1)

    @classmethod
    def bohr(cls, n: int) -> "QuantizationMode":
        return cls("bohr", n)


@dataclass(frozen=True)
class OrbitSolution:
    radius: float              # m
    phase_velocity: float      # m/s, hbar/(m_e r)
    angular_frequency: float   # rad/s, phase_velocity / radius
    kinetic_energy: float      # eV
    total_energy: float        # eV, negative for bound orbits


@dataclass(frozen=True)
class HydrinoLevel:
    k: int
    q: Fraction                # 1/k
    radius: float              # q * a_H, m
    binding_energy: float      # W_1 / q^2 = W_1 k^2, eV
    orbital_velocity: float    # k * alpha * c, m/s
    subluminal: bool


def solve_orbit(mode: QuantizationMode,
                constants: PhysicalConstants = DEFAULT_CONSTANTS) -> OrbitSolution:
    """Closed-form unique positive root of force balance + quantization."""
    n = mode.n
    c = constants
    radius = n * n * c.hbar / (c.electron_mass * c.light_speed * c.alpha)
    phase_velocity = c.hbar / (c.electron_mass * radius)
    orbital_velocity = n * phase_velocity
    kinetic = 0.5 * c.electron_mass * orbital_velocity ** 2 / EV_IN_JOULE
    return OrbitSolution(
        radius=radius,
        phase_velocity=phase_velocity,
        angular_frequency=phase_velocity / radius,
        kinetic_energy=kinetic,
        total_energy=-kinetic,
    )


@dataclass(frozen=True)
class UniquenessScan:
    root_count: int
    roots: tuple[float, ...]   # SI radii


def uniqueness_scan(mode: QuantizationMode,
                    r_range: tuple[float, float] | None = None,
                    samples: int = 100_000,
                    constants: PhysicalConstants = DEFAULT_CONSTANTS) -> UniquenessScan:
    """Count roots of the quantization-minus-force-balance defect on a log grid.

    Defect in atomic units: g(x) = n/x - 1/sqrt(x) (quantization velocity minus
    force-balance velocity), whose only root is x = n^2.
    """
    if samples < 1_000:
        raise ValueError("uniqueness_scan needs at least 10^3 samples")
    a_h = constants.bohr_radius
    if r_range is None:
        r_range = (a_h / 1000.0, 1000.0 * a_h)
    lo, hi = r_range[0] / a_h, r_range[1] / a_h
    n = mode.n
    x = np.geomspace(lo, hi, samples)
    g = n / x - 1.0 / np.sqrt(x)
    sign = np.sign(g)
    flips = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    roots = []
    for idx in flips:
        a, b = x[idx], x[idx + 1]
        fa = n / a - 1.0 / math.sqrt(a)
        for _ in range(80):
            m = 0.5 * (a + b)
            fm = n / m - 1.0 / math.sqrt(m)
            if fa * fm <= 0:
                b = m
            else:
                a, fa = m, fm
        roots.append(0.5 * (a + b) * a_h)
    exact_zeros = np.nonzero(sign == 0)[0]
    for idx in exact_zeros:
        roots.append(float(x[idx]) * a_h)
    roots.sort()
    return UniquenessScan(root_count=len(roots), roots=tuple(roots))


def hydrino_table(k_max: int,
                  constants: PhysicalConstants = DEFAULT_CONSTANTS) -> list[HydrinoLevel]:
    """Levels for q = 1/k, k = 1..k_max (integer reciprocals only)."""
    if not 1 <= k_max <= 10_000:
        raise ValueError("k_max must lie in [1, 10^4]")
    c = constants
    levels = []
    for k in range(1, k_max + 1):
        velocity = k * c.alpha * c.light_speed
        levels.append(HydrinoLevel(
            k=k,
            q=Fraction(1, k),
            radius=c.bohr_radius / k,
            binding_energy=c.rydberg_energy * k * k,
            orbital_velocity=velocity,
            subluminal=velocity < c.light_speed,
        ))
    return levels


def stability_bound_check(level: HydrinoLevel,
                          constants: PhysicalConstants = DEFAULT_CONSTANTS) -> str:
    """'exceeds-bound' iff the binding energy exceeds the configured bound."""
    if level.binding_energy > constants.stability_bound:
        return "exceeds-bound"
    return "within-bound"
