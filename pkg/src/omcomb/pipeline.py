"""Settle -> record -> project -> output -> metrics, as one composable step."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dynamics, spectrum
from .model import ParameterError, SystemParams, validate
from .spectrum import CombMetrics, CombSpectrum


@dataclass(frozen=True)
class SolverSettings:
    """Numerical knobs shared by every production run."""

    steps_per_period: int = dynamics.DEFAULT_STEPS_PER_PERIOD
    settle_periods: float = dynamics.DEFAULT_SETTLE_PERIODS
    record_periods: int = spectrum.DEFAULT_RECORD_PERIODS
    k_max: int | None = None          # defaults to 12 * n
    threshold_rel: float = spectrum.DEFAULT_THRESHOLD_REL

    def check(self) -> "SolverSettings":
        if self.steps_per_period < 1:
            raise ParameterError("steps_per_period must be >= 1")
        if self.settle_periods <= 0.0:
            raise ParameterError("settle_periods must be positive")
        if self.record_periods < 1:
            raise ParameterError("record_periods must be >= 1")
        if self.k_max is not None and self.k_max < 0:
            raise ParameterError("k_max must be >= 0")
        if not (0.0 < self.threshold_rel < 1.0):
            raise ParameterError("threshold_rel must lie in (0, 1)")
        return self


@dataclass(frozen=True)
class SimulationResult:
    params: SystemParams
    solver: SolverSettings
    trajectory: dynamics.Trajectory
    spectrum: CombSpectrum            # output amplitudes filled
    metrics: CombMetrics
    fft_max_dev_rel: float            # projection vs FFT diagnostic agreement


def simulate(params: SystemParams,
             solver: SolverSettings | None = None) -> SimulationResult:
    """Run the full pipeline from vacuum to comb metrics.

    Deterministic: identical inputs give bit-identical trajectories, spectra
    and file outputs.  Distinct calls share no mutable state.
    """
    p = validate(params)
    solver = (solver or SolverSettings()).check()

    state0 = dynamics.settle(p, solver.settle_periods, solver.steps_per_period)
    dt = p.mechanical_period / solver.steps_per_period
    t_end = state0.t + solver.record_periods * p.drive_period
    traj = dynamics.integrate(p, state0, t_end, dt)

    comb = spectrum.project_harmonics(traj, p, solver.k_max)
    comb = spectrum.output_spectrum(comb, p)
    metrics = spectrum.comb_metrics(comb, solver.threshold_rel, omega_b=p.omega_b)

    k_max = (len(comb.lines) - 1) // 2
    fft_amps = spectrum.fft_line_amplitudes(traj, p, k_max)
    scale = float(np.abs(comb.amp_alpha).max())
    dev = float(np.abs(fft_amps - comb.amp_alpha).max() / scale) if scale > 0.0 else 0.0

    return SimulationResult(params=p, solver=solver, trajectory=traj,
                            spectrum=comb, metrics=metrics, fft_max_dev_rel=dev)
