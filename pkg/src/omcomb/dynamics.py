"""Time integration of the mean-field equations of motion.

The model is an optical cavity mode alpha coupled to a mechanical mode beta,
written in a frame rotating at the control frequency:

    d(alpha)/dt = -(i delta_a + kappa) alpha - i g alpha (beta + beta*)
                  + eps_c e^{i phi_c} + eps_p e^{-i(delta_p t - phi_p)}
                  + eps_f e^{-i(delta_f t - phi_f)}
    d(beta)/dt  = -(i omega_b + gamma) beta - i g |alpha|^2

Integration is classical fixed-step 4th-order Runge-Kutta.  The inner loop
is compiled with numba when available and falls back to plain Python
otherwise; both paths evaluate identical floating-point expressions, and
repeated runs with identical inputs are bit-for-bit reproducible.

Sample times are always computed as ``index * dt`` from integer step
indices, never by accumulating ``t += dt``, so the drive phases carry no
floating-point drift over long transients.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .model import OmcombError, ParameterError, SystemParams, validate

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]
        return lambda f: f

#: Resolution guard: the step must resolve the fastest oscillation,
#: dt * omega_b < RESOLUTION_LIMIT.
RESOLUTION_LIMIT = 0.1

#: Default number of RK4 steps per mechanical period 2*pi/omega_b.
DEFAULT_STEPS_PER_PERIOD = 200

#: Default transient length in units of 1/gamma (the slowest rate).
DEFAULT_SETTLE_PERIODS = 20.0


class DivergenceError(OmcombError, ArithmeticError):
    """The integration produced a non-finite state."""

    def __init__(self, t: float):
        self.t = t
        super().__init__(f"integration diverged (non-finite state) at t = {t:.6e} s")


@dataclass(frozen=True)
class FieldState:
    """Cavity amplitude alpha (sqrt photon), mechanical amplitude beta
    (sqrt phonon) and the time they refer to."""

    alpha: complex
    beta: complex
    t: float = 0.0

    def is_finite(self) -> bool:
        return all(math.isfinite(v) for v in
                   (self.alpha.real, self.alpha.imag, self.beta.real, self.beta.imag))


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled time series; sample i sits at ``t0 + i * dt``."""

    t0: float
    dt: float
    alpha: np.ndarray   # complex128, shape (N,)
    beta: np.ndarray    # complex128, shape (N,)

    def __len__(self) -> int:
        return self.alpha.shape[0]

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self))

    def state(self, i: int) -> FieldState:
        return FieldState(complex(self.alpha[i]), complex(self.beta[i]),
                          self.t0 + i * self.dt)


def rhs(state: FieldState, t: float, p: SystemParams) -> tuple[complex, complex]:
    """Exact algebraic right-hand sides for both modes at time t."""
    a, b = state.alpha, state.beta
    drive = (p.eps_c * cmath.exp(1j * p.phi_c)
             + p.eps_p * cmath.exp(-1j * (p.delta_p * t - p.phi_p))
             + p.eps_f * cmath.exp(-1j * (p.delta_f * t - p.phi_f)))
    dalpha = -(1j * p.delta_a + p.kappa) * a - 1j * p.g * a * (b + b.conjugate()) + drive
    dbeta = -(1j * p.omega_b + p.gamma) * b - 1j * p.g * (a.real * a.real + a.imag * a.imag)
    return dalpha, dbeta


@njit(cache=True)
def _rk4_core(alpha, beta, i0, n_steps, rec_offset, dt,
              delta_a, kappa, gamma, omega_b, g,
              ec, ep, ef, dp, df, out_alpha, out_beta):
    """Advance (alpha, beta) by n_steps of RK4 starting at step index i0.

    Samples with local index j >= rec_offset are stored in the out arrays.
    Returns (alpha, beta, fail_step); fail_step is -1 on success, else the
    step index at which the state became non-finite.
    """
    half = 0.5 * dt
    sixth = dt / 6.0
    for j in range(n_steps):
        t = (i0 + j) * dt
        if j >= rec_offset:
            out_alpha[j - rec_offset] = alpha
            out_beta[j - rec_offset] = beta

        d1 = ec + ep * np.exp(-1j * dp * t) + ef * np.exp(-1j * df * t)
        k1a = -(1j * delta_a + kappa) * alpha - 1j * g * alpha * (beta + np.conj(beta)) + d1
        k1b = -(1j * omega_b + gamma) * beta - 1j * g * (alpha.real * alpha.real + alpha.imag * alpha.imag)

        th = t + half
        dh = ec + ep * np.exp(-1j * dp * th) + ef * np.exp(-1j * df * th)
        a2 = alpha + half * k1a
        b2 = beta + half * k1b
        k2a = -(1j * delta_a + kappa) * a2 - 1j * g * a2 * (b2 + np.conj(b2)) + dh
        k2b = -(1j * omega_b + gamma) * b2 - 1j * g * (a2.real * a2.real + a2.imag * a2.imag)

        a3 = alpha + half * k2a
        b3 = beta + half * k2b
        k3a = -(1j * delta_a + kappa) * a3 - 1j * g * a3 * (b3 + np.conj(b3)) + dh
        k3b = -(1j * omega_b + gamma) * b3 - 1j * g * (a3.real * a3.real + a3.imag * a3.imag)

        t1 = t + dt
        d4 = ec + ep * np.exp(-1j * dp * t1) + ef * np.exp(-1j * df * t1)
        a4 = alpha + dt * k3a
        b4 = beta + dt * k3b
        k4a = -(1j * delta_a + kappa) * a4 - 1j * g * a4 * (b4 + np.conj(b4)) + d4
        k4b = -(1j * omega_b + gamma) * b4 - 1j * g * (a4.real * a4.real + a4.imag * a4.imag)

        alpha = alpha + sixth * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        beta = beta + sixth * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)

        if not (np.isfinite(alpha.real) and np.isfinite(alpha.imag)
                and np.isfinite(beta.real) and np.isfinite(beta.imag)):
            return alpha, beta, j
    return alpha, beta, -1


def _drive_prefactors(p: SystemParams) -> tuple[complex, complex, complex]:
    ec = p.eps_c * cmath.exp(1j * p.phi_c)
    ep = p.eps_p * cmath.exp(1j * p.phi_p)
    ef = p.eps_f * cmath.exp(1j * p.phi_f)
    return ec, ep, ef


def _check_dt(p: SystemParams, dt: float) -> None:
    if dt <= 0.0:
        raise ParameterError(f"dt must be positive, got {dt!r}")
    if dt * p.omega_b >= RESOLUTION_LIMIT:
        raise ParameterError(
            f"dt too coarse: dt*omega_b = {dt * p.omega_b:.3g} >= {RESOLUTION_LIMIT}")


def integrate(p: SystemParams, init: FieldState, t_end: float, dt: float,
              record_from: float | None = None) -> Trajectory:
    """Integrate from ``init`` to ``t_end`` with fixed step dt.

    The number of steps is ``round((t_end - init.t) / dt)`` and samples are
    recorded endpoint-exclusively at every step time >= record_from (default:
    record everything).  Distinct calls share no mutable state and may run
    concurrently.
    """
    validate(p)
    _check_dt(p, dt)
    if not init.is_finite():
        raise ParameterError("initial state is not finite")
    if record_from is None:
        record_from = init.t
    if record_from > t_end:
        raise ParameterError("record_from must be <= t_end")

    n_steps = int(round((t_end - init.t) / dt))
    if n_steps < 1:
        raise ParameterError("t_end must lie at least one step after init.t")
    # init.t is an integer number of steps by construction in this package;
    # arbitrary offsets are honoured through i0.
    i0 = int(round(init.t / dt))
    rec_offset = max(0, int(math.ceil((record_from - init.t) / dt - 1e-9)))
    rec_offset = min(rec_offset, n_steps)
    n_rec = n_steps - rec_offset

    out_alpha = np.empty(n_rec, dtype=np.complex128)
    out_beta = np.empty(n_rec, dtype=np.complex128)
    ec, ep, ef = _drive_prefactors(p)
    alpha, beta, fail = _rk4_core(
        complex(init.alpha), complex(init.beta), i0, n_steps, rec_offset, dt,
        p.delta_a, p.kappa, p.gamma, p.omega_b, p.g,
        ec, ep, ef, p.delta_p, p.delta_f, out_alpha, out_beta)
    if fail >= 0:
        raise DivergenceError((i0 + fail) * dt)
    return Trajectory(t0=(i0 + rec_offset) * dt, dt=dt,
                      alpha=out_alpha, beta=out_beta)


def final_state(p: SystemParams, init: FieldState, t_end: float, dt: float) -> FieldState:
    """State at t_end without recording samples (same stepping as integrate)."""
    validate(p)
    _check_dt(p, dt)
    n_steps = int(round((t_end - init.t) / dt))
    i0 = int(round(init.t / dt))
    empty = np.empty(0, dtype=np.complex128)
    ec, ep, ef = _drive_prefactors(p)
    alpha, beta, fail = _rk4_core(
        complex(init.alpha), complex(init.beta), i0, n_steps, n_steps, dt,
        p.delta_a, p.kappa, p.gamma, p.omega_b, p.g,
        ec, ep, ef, p.delta_p, p.delta_f, empty, empty)
    if fail >= 0:
        raise DivergenceError((i0 + fail) * dt)
    return FieldState(alpha, beta, (i0 + n_steps) * dt)


def settle(p: SystemParams,
           settle_periods: float = DEFAULT_SETTLE_PERIODS,
           steps_per_period: int = DEFAULT_STEPS_PER_PERIOD) -> FieldState:
    """Integrate from vacuum (alpha = beta = 0) until transients have decayed.

    The transient length is settle_periods / gamma: the mechanical ring-down
    is by far the slowest process, and 20 amplitude e-folds push the residual
    transient below 1e-8.  Returns the state ready to seed a recording run.
    """
    validate(p)
    dt = p.mechanical_period / steps_per_period
    n_steps = int(math.ceil((settle_periods / p.gamma) / dt))
    return final_state(p, FieldState(0.0, 0.0, 0.0), n_steps * dt, dt)

