"""First-order (linearized) probe response around the probe-free steady state.

Writing alpha = alpha0 + a+ e^{-i delta t} + (a-)* e^{+i delta t} and
beta = beta0 + b+ e^{-i delta t} + (b-)* e^{+i delta t}, substituting into
the equations of motion and dropping everything beyond first order in the
probe leaves a 4x4 complex linear system for (a+, a-, b+, b-).  The system
is assembled and solved directly -- no transcribed response formulas -- so
sign conventions cannot drift relative to the integrator.

These closed solutions serve as independent verification for the full
nonlinear pipeline in the weak-probe regime, and conversely the pipeline
validates them; agreement is checked from both sides in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import OmcombError, SystemParams, validate
from .steady_state import solve_steady, vacuum_branch

#: Probe-to-control amplitude ratio above which first order is unreliable.
WEAK_PROBE_LIMIT = 1e-2


class SingularResponseError(OmcombError, ArithmeticError):
    """The linearized system is singular (undamped exact resonance)."""


@dataclass(frozen=True)
class LinearResponse:
    """First-order cavity sideband coefficients for one probe tone.

    ``a_plus`` multiplies e^{-i delta t}; ``a_minus`` is the literal
    coefficient of e^{+i delta t} (i.e. the conjugated lower sideband).
    ``residual_rel`` is the relative residual of the linearized equations at
    the returned solution.  ``weak_probe`` is False when the probe amplitude
    is too large for first order to be trusted.
    """

    delta: float
    a_plus: complex
    a_minus: complex
    residual_rel: float
    weak_probe: bool = True


def _linear_system(p: SystemParams, delta: float) -> np.ndarray:
    branch = vacuum_branch(solve_steady(p))
    a0 = branch.alpha0
    dbar = p.delta_a + 2.0 * p.g * branch.beta0.real
    g = p.g
    m = np.array([
        [1j * (dbar - delta) + p.kappa, 0.0, 1j * g * a0, 1j * g * a0],
        [0.0, p.kappa - 1j * (dbar + delta), -1j * g * np.conj(a0), -1j * g * np.conj(a0)],
        [1j * g * np.conj(a0), 1j * g * a0, 1j * (p.omega_b - delta) + p.gamma, 0.0],
        [-1j * g * np.conj(a0), -1j * g * a0, 0.0, p.gamma - 1j * (p.omega_b + delta)],
    ], dtype=np.complex128)
    return m


def linear_response(p: SystemParams, delta: float, eps_probe: float,
                    weak_probe: bool = True) -> LinearResponse:
    """Solve the linearized response at probe detuning delta.

    The system is solved for a unit drive and scaled by eps_probe afterwards,
    so the response is exactly linear in the probe amplitude (and exactly
    zero for eps_probe = 0).
    """
    validate(p)
    if eps_probe < 0.0:
        raise SingularResponseError("probe amplitude must be non-negative")
    m = _linear_system(p, delta)
    rhs = np.array([1.0, 0.0, 0.0, 0.0], dtype=np.complex128)
    try:
        sol = np.linalg.solve(m, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularResponseError(f"singular linearized system at delta={delta!r}") from exc
    if not np.all(np.isfinite(sol.view(np.float64))):
        raise SingularResponseError(f"singular linearized system at delta={delta!r}")
    scale = np.abs(m).max() * np.abs(sol).max() + np.abs(rhs).max()
    res = np.abs(m @ sol - rhs).max() / scale
    a_plus = complex(sol[0]) * eps_probe
    a_minus_conj = complex(sol[1]) * eps_probe   # this is a-, coefficient pre-conjugation
    return LinearResponse(
        delta=delta,
        a_plus=a_plus,
        a_minus=a_minus_conj.conjugate(),
        residual_rel=float(res),
        weak_probe=weak_probe,
    )


def two_probe_linear_response(p: SystemParams) -> list[LinearResponse]:
    """Independent first-order responses at delta_p and delta_f.

    At first order the two probes do not mix (their cross products are second
    order), so each response is computed with the other probe ignored.  The
    ``weak_probe`` flag is cleared on both results when either amplitude
    ratio exceeds WEAK_PROBE_LIMIT.
    """
    validate(p)
    ok = (p.eps_p <= WEAK_PROBE_LIMIT * p.eps_c
          and p.eps_f <= WEAK_PROBE_LIMIT * p.eps_c)
    return [
        linear_response(p, p.delta_p, p.eps_p, weak_probe=ok),
        linear_response(p, p.delta_f, p.eps_f, weak_probe=ok),
    ]
