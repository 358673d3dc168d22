"""Acceptance gate: every criterion at its stated tolerance.

Each test prints one `[criterion NN] ... PASS/FAIL` line (run pytest with
``-s`` to see them all; failures always surface the line).  Figure-regime
runs use full production parameters and default solver settings.
"""

import math

import numpy as np
import pytest

from omcomb import (FieldState, final_state, linear_response, simulate,
                    solve_steady, vacuum_branch, with_updates)

PRODUCTION_PRESETS = ("baseline", "fig2a", "fig2b", "fig3a", "fig3b", "fig3c",
                      "fig4a", "fig4b", "fig4c")


def report(num: int, name: str, ok: bool, detail: str = "") -> None:
    line = f"[criterion {num:>2}] {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  ({detail})"
    print(line)
    assert ok, line


def line_mag(result, k: int) -> float:
    return abs(result.spectrum.line(k).amp_out)


def test_criterion_01_weak_probe_keeps_only_first_order_sidebands(run_cache):
    result = run_cache("fig2a")
    present = set(result.metrics.present_ks)
    required = {0, 1, -1}
    s_minus1 = line_mag(result, -1)
    others = [abs(ln.amp_out) for ln in result.spectrum.lines
              if ln.k not in (0, 1, -1)]
    worst = max(others)
    # no other order within 20 dB of the k = -1 line
    ok = required <= present and worst <= 0.1 * s_minus1
    margin_db = 20 * math.log10(worst / s_minus1) if worst > 0 else float("-inf")
    report(1, "weak single probe: orders {0,+1,-1} only", ok,
           f"present={sorted(present)}, nearest other order at {margin_db:.1f} dB vs -1 line")


def test_criterion_02_strong_probe_cutoff_orders(run_cache):
    result = run_cache("fig2b")
    m = result.metrics
    pos, neg = int(m.cutoff_pos), int(m.cutoff_neg)
    ok = 7 <= pos <= 9 and -7 <= neg <= -5
    report(2, "strong single probe: cutoffs +8/-6 within +-1", ok,
           f"measured cutoffs ({pos}, {neg})")


def test_criterion_03_amplitude_decreases_with_order(run_cache):
    result = run_cache("fig2b")
    present = result.metrics.present_ks
    violations = {}
    for sign in (+1, -1):
        ks = sorted((k for k in present if sign * k >= 1), key=abs)
        mags = [line_mag(result, k) for k in ks]
        violations[sign] = sum(1 for a, b in zip(mags, mags[1:]) if b >= a)
    ok = violations[+1] <= 1 and violations[-1] <= 1
    report(3, "strong single probe: amplitude monotone in |order|", ok,
           f"violations +side={violations[+1]}, -side={violations[-1]}")


def test_criterion_04_fraction_lines_appear_without_disturbing_integers(run_cache):
    ref = run_cache("fig2a")
    ok = True
    details = []
    for name, n in (("fig3a", 10), ("fig3b", 5), ("fig3c", 2)):
        result = run_cache(name)
        present = set(result.metrics.present_ks)
        frac_ok = {1, -1} <= present   # k = +-1 are the +-omega_b/n lines
        devs = []
        for j in (0, 1, -1):
            s_ref = line_mag(ref, j)
            s_new = line_mag(result, j * n)
            devs.append(abs(s_new - s_ref) / s_ref)
        ok = ok and frac_ok and max(devs) < 0.05
        details.append(f"n={n}: +-1/n present={frac_ok}, max integer-line shift={max(devs):.2e}")
    report(4, "weak fraction tone: +-1/n lines appear, integer lines <5% shift",
           ok, "; ".join(details))


def test_criterion_05_half_fraction_comb_equally_spaced(run_cache):
    result = run_cache("fig3c")
    present = set(result.metrics.present_ks)
    required = {-2, -1, 0, 1, 2}   # orders -1, -1/2, 0, +1/2, +1
    spacing_ok = required <= present
    f_rep = result.metrics.f_rep
    expected = result.params.omega_b / 2
    rep_ok = abs(f_rep - expected) <= 1e-12 * expected
    report(5, "n=2: comb {-1,-1/2,0,+1/2,+1} with f_rep = omega_b/2",
           spacing_ok and rep_ok,
           f"required present={spacing_ok}, f_rep/omega_b={f_rep / result.params.omega_b:.6f}")


def test_criterion_06_two_strong_tones_range_and_repetition(run_cache):
    result = run_cache("fig4b")
    m = result.metrics
    f_rep = m.f_rep
    expected_rep = result.params.omega_b / 10
    rep_ok = abs(f_rep - expected_rep) <= 1e-12 * expected_rep
    lo, hi = float(m.cutoff_neg), float(m.cutoff_pos)
    range_ok = (-3.7 <= lo <= -3.1) and (5.1 <= hi <= 5.7)
    report(6, "two strong tones: range [-3.4,+5.4] omega_b +-0.3, f_rep = omega_b/10",
           rep_ok and range_ok,
           f"measured range [{lo:+.1f},{hi:+.1f}] omega_b, f_rep/omega_b={f_rep / result.params.omega_b:.3f}")


def test_criterion_07_mixing_sidebands_present(run_cache):
    result = run_cache("fig4a")
    present = set(result.metrics.present_ks)
    required = {2, 9, 11, 18, 19, 21}
    required = required | {-k for k in required}
    missing = sorted(required - present)
    report(7, "moderate fraction tone: mixing orders +-{2,9,11,18,19,21}/10 present",
           not missing, f"missing={missing}" if missing else "all present")


@pytest.fixture(scope="module")
def weak_probe_deviations(baseline):
    devs = {}
    for ratio in (1e-2, 1e-3, 1e-4):
        p = with_updates(baseline, eps_p=ratio * baseline.eps_c)
        result = simulate(p)
        lin = linear_response(p, p.delta_p, p.eps_p)
        sim_line = result.spectrum.line(p.n).amp_alpha
        devs[ratio] = abs(sim_line - lin.a_plus) / abs(lin.a_plus)
    return devs


def test_criterion_08_linearization_oracle(weak_probe_deviations):
    devs = weak_probe_deviations
    # pinned tolerances at the two stated ratios; deviation is integrator-floor
    # limited (~1e-6) below ratio 1e-3, so proportional shrinkage is checked on
    # the segment where the nonlinear correction is resolvable.
    within_tol = devs[1e-3] < 1e-3 and devs[1e-4] < 1e-3
    shrinkage = devs[1e-2] >= 3 * devs[1e-3]
    report(8, "weak-probe pipeline matches linear response", within_tol and shrinkage,
           f"rel dev: {devs[1e-4]:.2e} @1e-4, {devs[1e-3]:.2e} @1e-3, {devs[1e-2]:.2e} @1e-2")


def test_criterion_09_decoupled_cavity_closed_form(baseline):
    p = with_updates(baseline, g=0.0, eps_p=9e9, eps_f=0.9e9, n=10)
    result = simulate(p)
    comb = result.spectrum
    mags = np.abs(comb.amp_out)
    above = [ln.k for ln, mag in zip(comb.lines, mags) if mag >= 1e-10 * mags.max()]
    count_ok = sorted(above) == [0, 1, 10]
    w_f = p.omega_b / p.n
    worst = 0.0
    for k, drive in ((0, p.eps_c), (1, p.eps_f), (10, p.eps_p)):
        expected = drive - math.sqrt(2 * p.kappa) * drive / (1j * (p.delta_a - k * w_f) + p.kappa)
        got = comb.line(k).amp_out
        worst = max(worst, abs(got - expected) / abs(expected))
    report(9, "g=0: exactly 3 output lines matching closed form", count_ok and worst < 1e-6,
           f"lines={sorted(above)}, worst rel err={worst:.2e}")


def test_criterion_10_steady_state_consistency(baseline):
    br = vacuum_branch(solve_steady(baseline))
    dt = baseline.mechanical_period / 200
    n = math.ceil((20.0 / baseline.gamma) / dt)
    end = final_state(baseline, FieldState(0.0, 0.0, 0.0), n * dt, dt)
    dev = abs(abs(end.alpha) ** 2 - br.intensity) / br.intensity
    report(10, "algebraic steady state vs long-time integration", dev < 1e-6,
           f"|alpha0|^2 rel dev={dev:.2e}")


def test_criterion_11_parseval_and_leakage_on_every_production_run(run_cache):
    worst_parseval = worst_leak = 0.0
    for name in PRODUCTION_PRESETS:
        result = run_cache(name)
        worst_parseval = max(worst_parseval, result.spectrum.parseval_error())
        worst_leak = max(worst_leak, result.spectrum.leakage_floor)
    ok = worst_parseval < 1e-6 and worst_leak < 1e-8
    report(11, "Parseval identity and off-grid leakage bounds", ok,
           f"worst parseval={worst_parseval:.2e}, worst leakage={worst_leak:.2e}")


def test_criterion_12_integrator_order(baseline):
    p = with_updates(baseline, eps_p=3e12, eps_f=6e11, n=10)
    ends = {}
    for spp in (100, 200, 400, 3200):
        dt = p.mechanical_period / spp
        ends[spp] = final_state(p, FieldState(0.0, 0.0, 0.0), 3 * spp * dt, dt)
    ref = ends.pop(3200)
    errs = [abs(e.alpha - ref.alpha) + abs(e.beta - ref.beta)
            for spp, e in sorted(ends.items())]
    slopes = [math.log2(errs[i] / errs[i + 1]) for i in range(len(errs) - 1)]
    ok = all(3.7 <= s <= 4.3 for s in slopes)
    report(12, "RK4 self-convergence order in [3.7, 4.3]", ok,
           f"slopes={[f'{s:.2f}' for s in slopes]}")


def test_criterion_13_cli_byte_determinism(tmp_path_factory):
    from omcomb.cli import main
    base = tmp_path_factory.mktemp("determinism")
    for sub in ("first", "second"):
        rc = main(["run", "--preset", "fig2a", "--out", str(base / sub)])
        assert rc == 0
    same_csv = ((base / "first" / "spectrum.csv").read_bytes()
                == (base / "second" / "spectrum.csv").read_bytes())
    same_metrics = ((base / "first" / "metrics.txt").read_bytes()
                    == (base / "second" / "metrics.txt").read_bytes())
    report(13, "repeated CLI runs byte-identical", same_csv and same_metrics,
           f"spectrum.csv identical={same_csv}, metrics.txt identical={same_metrics}")
