"""Comb-line extraction, output spectrum, line classification and metrics.

The periodic steady state of the three-tone driven system carries all of its
spectral content on the grid k * omega_b/n (k integer, frequencies relative
to the control tone).  Line amplitudes are recovered by exact harmonic
projection over an integer number of fundamental periods,

    amp_alpha(k) = (1/T) * integral alpha(t) e^{+i k (omega_b/n) t} dt,

evaluated as the uniform-sample mean over the recorded window.  Because the
window is commensurate with the drive, the projection frequencies land
exactly on DFT bins and the extraction is leakage-free; a plain FFT of the
same window is provided as a diagnostic and must agree bin for bin.

Sign convention: a term c * e^{-i omega t} in the time signal appears as a
positive-k line (k = omega / omega_fund), i.e. upper sidebands carry k > 0.

The output field spectrum follows the input-output relation: for each line,
amp_out(k) = drive(k) - sqrt(2 kappa) * amp_alpha(k), where drive(k) is
nonzero only on the three driven lines (k = 0 control, k = n probe-1,
k = 1 probe-2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .dynamics import Trajectory
from .model import TWO_PI, OmcombError, SystemParams, validate

#: Default projection order cap, in multiples of n (covers orders up to +-12).
DEFAULT_KMAX_ORDERS = 12

#: Default recording length in fundamental periods.
DEFAULT_RECORD_PERIODS = 4

#: Default presence threshold for comb metrics (relative amplitude).
DEFAULT_THRESHOLD_REL = 1e-4

#: Leakage is probed at the off-grid frequency omega_b * sqrt(2)/7.
LEAKAGE_TEST_FACTOR = math.sqrt(2.0) / 7.0

#: Presence-reference guard: runs whose generated lines all sit below this
#: fraction of the strongest output line are treated as having no comb.
REFERENCE_FLOOR_REL = 1e-8

KIND_CONTROL = "control"
KIND_INTEGER = "integer-order"
KIND_FRACTION = "fraction-order"
KIND_SUM = "sum"
KIND_DIFFERENCE = "difference"
KIND_DRIVE_P = "drive-probe-p"
KIND_DRIVE_F = "drive-probe-f"

LINE_KINDS = (KIND_CONTROL, KIND_INTEGER, KIND_FRACTION, KIND_SUM,
              KIND_DIFFERENCE, KIND_DRIVE_P, KIND_DRIVE_F)


class NonCommensurateWindowError(OmcombError, ValueError):
    """The trajectory window is not an integer number of fundamental periods."""


class EmptySpectrumError(OmcombError, ValueError):
    """No lines, or all line amplitudes vanish."""


def classify_line(k: int, n: int) -> str:
    """Classification of the line at frequency k * omega_b / n.

    k = 0 is the control line; multiples of n are integer-order sidebands
    (order k/n); |k| < n are fraction-order sidebands; every other k is a
    nonlinear mixing product, tagged by the minimal-j decomposition
    |k| = j*n +- r with j >= 1 and 1 <= r <= n-1 (see decompositions()).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if k == 0:
        return KIND_CONTROL
    if k % n == 0:
        return KIND_INTEGER
    if abs(k) < n:
        return KIND_FRACTION
    cands = decompositions(k, n)
    return cands[0][0]


def decompositions(k: int, n: int) -> tuple[tuple[str, int, int], ...]:
    """Mixing-product decompositions of |k| = j*n +- r, minimal j first.

    Only defined for |k| > n with k not a multiple of n.  Both candidates are
    returned because the two families overlap in frequency; only the
    frequency itself is physical.
    """
    q, s = divmod(abs(k), n)
    if s == 0 or q == 0:
        return ()
    return ((KIND_SUM, q, s), (KIND_DIFFERENCE, q + 1, n - s))


@dataclass(frozen=True)
class CombLine:
    """One comb line at frequency k * omega_fund relative to the control."""

    k: int
    amp_alpha: complex
    kind: str
    amp_out: complex | None = None
    drive: complex = 0.0 + 0.0j

    def order(self, n: int) -> Fraction:
        return Fraction(self.k, n)


@dataclass(frozen=True)
class CombSpectrum:
    """Line amplitudes on the comb grid for one recorded window.

    ``leakage_floor`` is the residual projection at the off-grid test
    frequency after removing every comb line, relative to the largest line:
    it quantifies how much spectral content does *not* live on the grid.
    ``mean_square_alpha`` is the time average of |alpha|^2 over the window,
    kept so the Parseval identity can be checked at any point downstream.
    """

    n: int
    omega_fund: float
    lines: tuple[CombLine, ...]
    leakage_floor: float
    mean_square_alpha: float

    @property
    def ks(self) -> np.ndarray:
        return np.array([ln.k for ln in self.lines])

    @property
    def amp_alpha(self) -> np.ndarray:
        return np.array([ln.amp_alpha for ln in self.lines])

    @property
    def amp_out(self) -> np.ndarray:
        if any(ln.amp_out is None for ln in self.lines):
            raise EmptySpectrumError("output spectrum not filled yet")
        return np.array([ln.amp_out for ln in self.lines])

    @property
    def drives(self) -> np.ndarray:
        return np.array([ln.drive for ln in self.lines])

    def line(self, k: int) -> CombLine:
        idx = k + (len(self.lines) - 1) // 2
        ln = self.lines[idx]
        if ln.k != k:
            raise KeyError(k)
        return ln

    def parseval_error(self) -> float:
        """Relative mismatch between sum_k |amp_alpha|^2 and <|alpha|^2>."""
        s = float(np.sum(np.abs(self.amp_alpha) ** 2))
        if self.mean_square_alpha == 0.0:
            return abs(s)
        return abs(s - self.mean_square_alpha) / self.mean_square_alpha


def _window_geometry(traj: Trajectory, p: SystemParams) -> tuple[int, int]:
    """(samples per fundamental period, number of periods m) or raise."""
    n_samples = len(traj)
    if n_samples < 2:
        raise NonCommensurateWindowError("trajectory must hold at least 2 samples")
    spf_float = p.drive_period / traj.dt
    spf = int(round(spf_float))
    if spf < 2 or abs(spf_float - spf) > 1e-6 * spf_float:
        raise NonCommensurateWindowError(
            f"dt does not divide the fundamental period: T_f/dt = {spf_float!r}")
    m, rem = divmod(n_samples, spf)
    if rem != 0 or m < 1:
        raise NonCommensurateWindowError(
            f"window must span an integer number of fundamental periods "
            f"({n_samples} samples, {spf} per period)")
    return spf, m


def project_harmonics(traj: Trajectory, p: SystemParams,
                      k_max: int | None = None) -> CombSpectrum:
    """Project the cavity trajectory onto comb lines k in [-k_max, k_max].

    The window must span an exact integer number m >= 1 of fundamental
    periods with a sample count that is an integer multiple of the samples
    per period; this is the anti-leakage contract and violations are
    rejected.  Projections at distinct k are independent sums and safe to
    parallelize.
    """
    validate(p)
    _window_geometry(traj, p)
    if k_max is None:
        k_max = DEFAULT_KMAX_ORDERS * p.n
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    if 2 * k_max + 1 > len(traj):
        raise NonCommensurateWindowError("k_max exceeds the window's Nyquist range")

    w_f = p.omega_b / p.n
    t = traj.times
    ks = np.arange(-k_max, k_max + 1)
    phase = np.exp(1j * np.outer(ks * w_f, t))
    amps = phase @ traj.alpha / len(traj)

    recon = amps @ np.conj(phase)
    resid = traj.alpha - recon
    w_test = p.omega_b * LEAKAGE_TEST_FACTOR
    leak = np.abs(np.mean(resid * np.exp(1j * w_test * t)))
    amp_scale = float(np.abs(amps).max())
    leakage_floor = float(leak / amp_scale) if amp_scale > 0.0 else 0.0

    lines = tuple(
        CombLine(k=int(k), amp_alpha=complex(a), kind=classify_line(int(k), p.n))
        for k, a in zip(ks, amps))
    return CombSpectrum(
        n=p.n,
        omega_fund=w_f,
        lines=lines,
        leakage_floor=leakage_floor,
        mean_square_alpha=float(np.mean(np.abs(traj.alpha) ** 2)),
    )


def fft_line_amplitudes(traj: Trajectory, p: SystemParams,
                        k_max: int | None = None) -> np.ndarray:
    """Diagnostic: the same line amplitudes extracted with a plain FFT.

    For a commensurate window every comb line k sits exactly on DFT bin
    k * m, so this must agree bin for bin with project_harmonics (up to
    roundoff).  Returned in the same k order, [-k_max, ..., +k_max].
    """
    validate(p)
    spf, m = _window_geometry(traj, p)
    if k_max is None:
        k_max = DEFAULT_KMAX_ORDERS * p.n
    n_samples = len(traj)
    if 2 * k_max + 1 > n_samples:
        raise NonCommensurateWindowError("k_max exceeds the window's Nyquist range")
    w_f = p.omega_b / p.n
    bins = np.fft.ifft(traj.alpha)
    ks = np.arange(-k_max, k_max + 1)
    idx = (ks * m) % n_samples
    return bins[idx] * np.exp(1j * ks * w_f * traj.t0)


def drive_amplitudes(p: SystemParams, k_max: int) -> dict[int, complex]:
    """Input drive amplitude on each comb line (phases folded in)."""
    drives: dict[int, complex] = {}

    def add(k: int, amp: complex) -> None:
        if abs(k) <= k_max:
            drives[k] = drives.get(k, 0.0 + 0.0j) + amp

    add(0, p.eps_c * np.exp(1j * p.phi_c))
    if p.eps_p != 0.0:
        w_f = p.omega_b / p.n
        k_p_float = p.delta_p / w_f
        k_p = int(round(k_p_float))
        if abs(k_p_float - k_p) > 1e-9 * max(1.0, abs(k_p_float)):
            raise NonCommensurateWindowError(
                f"delta_p is not on the comb grid: delta_p/omega_fund = {k_p_float!r}")
        add(k_p, p.eps_p * np.exp(1j * p.phi_p))
    if p.eps_f != 0.0:
        add(1, p.eps_f * np.exp(1j * p.phi_f))
    return drives


def output_spectrum(comb: CombSpectrum, p: SystemParams) -> CombSpectrum:
    """Fill the output-field amplitudes via the input-output relation."""
    validate(p)
    if p.n != comb.n:
        raise ValueError("params and spectrum disagree on n")
    k_max = (len(comb.lines) - 1) // 2
    drives = drive_amplitudes(p, k_max)
    root_2k = math.sqrt(2.0 * p.kappa)
    lines = tuple(
        replace(ln,
                drive=drives.get(ln.k, 0.0 + 0.0j),
                amp_out=drives.get(ln.k, 0.0 + 0.0j) - root_2k * ln.amp_alpha)
        for ln in comb.lines)
    return replace(comb, lines=lines)


@dataclass(frozen=True)
class CombMetrics:
    """Repetition frequency, span and cutoff orders of the emitted comb.

    A line is present when |amp_out(k)| >= threshold_rel * reference.  The
    reference is the strongest *generated* line (largest |amp_out| among
    lines with no drive on them), guarded from below by REFERENCE_FLOOR_REL
    times the strongest line overall; referencing the raw maximum would
    compare every sideband against the promptly reflected pump, which sits
    orders of magnitude above all generated light and would hide the comb
    entirely.
    """

    f_rep: float                      # rad/s
    f_range: tuple[float, float]      # rad/s, (low, high) relative to control
    cutoff_pos: Fraction              # highest present order, units of omega_b
    cutoff_neg: Fraction              # lowest present order
    threshold_rel: float
    reference: float                  # absolute amplitude the threshold was taken against
    present_ks: tuple[int, ...]
    n: int

    @property
    def cutoff_pos_float(self) -> float:
        return float(self.cutoff_pos)

    @property
    def cutoff_neg_float(self) -> float:
        return float(self.cutoff_neg)


def comb_metrics(comb: CombSpectrum, threshold_rel: float = DEFAULT_THRESHOLD_REL,
                 omega_b: float | None = None) -> CombMetrics:
    """Presence-thresholded comb metrics from a filled output spectrum."""
    if not (0.0 < threshold_rel < 1.0):
        raise ValueError(f"threshold_rel must lie in (0, 1), got {threshold_rel!r}")
    if not comb.lines:
        raise EmptySpectrumError("spectrum holds no lines")
    amp = np.abs(comb.amp_out)
    global_max = float(amp.max())
    if global_max == 0.0:
        raise EmptySpectrumError("all output lines vanish")
    driven = np.abs(comb.drives) > 0.0
    generated_max = float(amp[~driven].max()) if np.any(~driven) else 0.0
    reference = max(generated_max, REFERENCE_FLOOR_REL * global_max)

    ks = comb.ks
    present = ks[amp >= threshold_rel * reference]
    present = np.sort(present)
    if omega_b is None:
        omega_b = comb.omega_fund * comb.n

    cutoff_pos = Fraction(int(present.max()), comb.n)
    cutoff_neg = Fraction(int(present.min()), comb.n)
    if len(present) > 1:
        min_gap = int(np.diff(present).min())
        f_rep = comb.omega_fund * min_gap
    else:
        f_rep = 0.0
    f_range = (float(cutoff_neg) * omega_b, float(cutoff_pos) * omega_b)
    return CombMetrics(
        f_rep=f_rep,
        f_range=f_range,
        cutoff_pos=cutoff_pos,
        cutoff_neg=cutoff_neg,
        threshold_rel=threshold_rel,
        reference=reference,
        present_ks=tuple(int(k) for k in present),
        n=comb.n,
    )


SPECTRUM_CSV_COLUMNS = ("k", "order_num", "order_den", "freq_hz",
                        "re_out", "im_out", "abs_out", "abs_out_db", "kind")


def spectrum_rows(comb: CombSpectrum) -> list[dict]:
    """CSV-ready rows, one per line, sorted by k; dB relative to the largest line."""
    amp_out = comb.amp_out
    mags = np.abs(amp_out)
    ref = float(mags.max())
    rows = []
    for ln, s, mag in zip(comb.lines, amp_out, mags):
        if mag > 0.0 and ref > 0.0:
            db = 20.0 * math.log10(mag / ref)
        else:
            db = float("-inf")
        rows.append({
            "k": ln.k,
            "order_num": ln.k,
            "order_den": comb.n,
            "freq_hz": ln.k * comb.omega_fund / TWO_PI,
            "re_out": float(s.real),
            "im_out": float(s.imag),
            "abs_out": float(mag),
            "abs_out_db": db,
            "kind": ln.kind,
        })
    return rows


def write_spectrum_csv(comb: CombSpectrum, path) -> None:
    """Write the fixed-schema spectrum CSV (column order as in
    SPECTRUM_CSV_COLUMNS; floats via repr so repeated runs are byte-identical)."""
    rows = spectrum_rows(comb)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(SPECTRUM_CSV_COLUMNS) + "\n")
        for row in rows:
            cells = []
            for col in SPECTRUM_CSV_COLUMNS:
                v = row[col]
                cells.append(repr(v) if isinstance(v, float) else str(v))
            fh.write(",".join(cells) + "\n")
