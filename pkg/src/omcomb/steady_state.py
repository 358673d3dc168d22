"""Algebraic steady state of the probe-free system and its stability.

With both probes off, setting the time derivatives to zero and eliminating
the mechanical amplitude gives a real cubic in the intracavity intensity
x = |alpha0|^2:

    x * [ (delta_a - C x)^2 + kappa^2 ] = eps_c^2,
    C = 2 g^2 omega_b / (gamma^2 + omega_b^2),

the usual radiation-pressure bistability curve.  Each non-negative real root
is reconstructed into a branch (alpha0, beta0) and classified as dynamically
stable or not from the eigenvalues of the linearization.

Roots are found by the closed-form (trigonometric/Cardano) solution of the
cubic followed by one Newton polish per root; the closed forms alone lose
digits when roots nearly coalesce.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .model import ParameterError, SystemParams, validate

#: Relative tolerance of the Newton polish on cubic roots.
POLISH_RTOL = 1e-14

#: A branch is stable when max Re(eigenvalue) < -STABILITY_MARGIN * max(kappa, gamma).
STABILITY_MARGIN = 1e-12


@dataclass(frozen=True)
class SteadyBranch:
    alpha0: complex
    beta0: complex
    intensity: float      # |alpha0|^2
    stable: bool


def bistability_cubic(p: SystemParams) -> tuple[float, float, float, float]:
    """Coefficients (c3, c2, c1, c0) of the intensity cubic
    c3 x^3 + c2 x^2 + c1 x + c0 = 0."""
    c = 2.0 * p.g * p.g * p.omega_b / (p.gamma * p.gamma + p.omega_b * p.omega_b)
    return (c * c, -2.0 * p.delta_a * c, p.delta_a ** 2 + p.kappa ** 2, -p.eps_c ** 2)


def _real_cubic_roots(a: float, b: float, c: float, d: float) -> list[float]:
    """All real roots of a x^3 + b x^2 + c x + d = 0 in closed form.

    Handles the degenerate a == 0 (and b == 0) cases so callers can pass the
    intensity cubic for g = 0 unchanged.
    """
    if a == 0.0:
        if b == 0.0:
            if c == 0.0:
                return []
            return [-d / c]
        disc = c * c - 4.0 * b * d
        if disc < 0.0:
            return []
        s = math.sqrt(disc)
        return [(-c - s) / (2.0 * b), (-c + s) / (2.0 * b)]

    # depressed cubic t^3 + p t + q, x = t - b/(3a)
    shift = b / (3.0 * a)
    pp = (3.0 * a * c - b * b) / (3.0 * a * a)
    qq = (2.0 * b ** 3 - 9.0 * a * b * c + 27.0 * a * a * d) / (27.0 * a ** 3)
    disc = (qq / 2.0) ** 2 + (pp / 3.0) ** 3
    if disc > 0.0:
        s = math.sqrt(disc)
        u = math.copysign(abs(-qq / 2.0 + s) ** (1.0 / 3.0), -qq / 2.0 + s)
        v = math.copysign(abs(-qq / 2.0 - s) ** (1.0 / 3.0), -qq / 2.0 - s)
        roots = [u + v - shift]
    elif disc == 0.0:
        if qq == 0.0:
            roots = [-shift]
        else:
            u = math.copysign(abs(qq / 2.0) ** (1.0 / 3.0), qq / 2.0)
            roots = [-2.0 * u - shift, u - shift]
    else:
        # three distinct real roots: trigonometric form
        r = math.sqrt(-pp ** 3 / 27.0)
        phi = math.acos(max(-1.0, min(1.0, -qq / (2.0 * r))))
        m = 2.0 * math.sqrt(-pp / 3.0)
        roots = [m * math.cos((phi + 2.0 * math.pi * k) / 3.0) - shift for k in range(3)]

    def poly(x: float) -> float:
        return ((a * x + b) * x + c) * x + d

    def dpoly(x: float) -> float:
        return (3.0 * a * x + 2.0 * b) * x + c

    polished = []
    for x in roots:
        for _ in range(40):
            f, df = poly(x), dpoly(x)
            if df == 0.0:
                break
            step = f / df
            x_new = x - step
            if abs(step) <= POLISH_RTOL * max(abs(x_new), 1e-300):
                x = x_new
                break
            x = x_new
        polished.append(x)
    return sorted(polished)


def jacobian(p: SystemParams, alpha0: complex, beta0: complex) -> np.ndarray:
    """Real 4x4 Jacobian of the probe-free flow in (Re a, Im a, Re b, Im b)."""
    x1, x2 = alpha0.real, alpha0.imag
    x3 = beta0.real
    dbar = p.delta_a + 2.0 * p.g * x3
    return np.array([
        [-p.kappa, dbar, 2.0 * p.g * x2, 0.0],
        [-dbar, -p.kappa, -2.0 * p.g * x1, 0.0],
        [0.0, 0.0, -p.gamma, p.omega_b],
        [-2.0 * p.g * x1, -2.0 * p.g * x2, -p.omega_b, -p.gamma],
    ])


def _is_stable(p: SystemParams, alpha0: complex, beta0: complex) -> bool:
    ev = np.linalg.eigvals(jacobian(p, alpha0, beta0))
    return float(ev.real.max()) < -STABILITY_MARGIN * max(p.kappa, p.gamma)


def solve_steady(p: SystemParams) -> list[SteadyBranch]:
    """Every steady branch with the probes treated as off, sorted by intensity.

    For each root x of the intensity cubic the branch is reconstructed as
    alpha0 = eps_c e^{i phi_c} / (i (delta_a - C x) + kappa) and
    beta0 = -i g x / (gamma + i omega_b).
    """
    validate(p)
    c3, c2, c1, c0 = bistability_cubic(p)
    roots = [x for x in _real_cubic_roots(c3, c2, c1, c0) if x >= 0.0]
    cc = 2.0 * p.g * p.g * p.omega_b / (p.gamma * p.gamma + p.omega_b * p.omega_b)
    branches = []
    for x in roots:
        delta_eff = p.delta_a - cc * x
        alpha0 = p.eps_c * cmath.exp(1j * p.phi_c) / (1j * delta_eff + p.kappa)
        beta0 = -1j * p.g * x / (p.gamma + 1j * p.omega_b)
        branches.append(SteadyBranch(
            alpha0=alpha0, beta0=beta0, intensity=x,
            stable=_is_stable(p, alpha0, beta0)))
    if not branches:
        raise ParameterError("no non-negative steady-state intensity root found")
    return branches


def vacuum_branch(branches: list[SteadyBranch]) -> SteadyBranch:
    """The branch reached from vacuum under sudden turn-on: the lowest
    intensity (downstream consumers default to it)."""
    return branches[0]


def residual(p: SystemParams, branch: SteadyBranch) -> float:
    """Norm of the probe-free right-hand sides at the branch point."""
    a, b = branch.alpha0, branch.beta0
    ra = (-(1j * p.delta_a + p.kappa) * a - 1j * p.g * a * (b + b.conjugate())
          + p.eps_c * cmath.exp(1j * p.phi_c))
    rb = -(1j * p.omega_b + p.gamma) * b - 1j * p.g * (abs(a) ** 2)
    return abs(ra) + abs(rb)
