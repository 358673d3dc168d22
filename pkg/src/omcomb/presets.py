"""Named parameter presets (config-file units: Hz and 1e9 s^-1).

The baseline rates follow a standard membrane-in-cavity experiment:
omega_b/2pi = 51.8 MHz, kappa/2pi = 15 MHz, gamma/2pi = 41 kHz,
g/2pi = 1 kHz, control drive 3e12 s^-1, control red-detuned by omega_b.
The figure presets step the two probe amplitudes and the fraction integer n
through the regimes studied with this system: a single weak probe (fig2a),
a single control-strength probe (fig2b), a weak fraction tone at n = 10, 5,
2 on top of the weak probe (fig3a-c), and an increasingly strong fraction
tone on top of the strong probe (fig4a-c).
"""

from __future__ import annotations

from .model import SystemParams, params_from_config

BASELINE: dict = {
    "omega_b_hz": 51.8e6,
    "kappa_hz": 15e6,
    "gamma_hz": 41e3,
    "g_hz": 1e3,
    "delta_a_hz": 51.8e6,
    "eps_c": 3e3,
    "eps_p": 0.0,
    "eps_f": 0.0,
    "n": 1,
}

PRESETS: dict[str, dict] = {
    "baseline": dict(BASELINE),
    "fig2a": {**BASELINE, "eps_p": 9.0},
    "fig2b": {**BASELINE, "eps_p": 3e3},
    "fig3a": {**BASELINE, "eps_p": 9.0, "eps_f": 0.9, "n": 10},
    "fig3b": {**BASELINE, "eps_p": 9.0, "eps_f": 0.9, "n": 5},
    "fig3c": {**BASELINE, "eps_p": 9.0, "eps_f": 0.9, "n": 2},
    "fig4a": {**BASELINE, "eps_p": 3e3, "eps_f": 90.0, "n": 10},
    "fig4b": {**BASELINE, "eps_p": 3e3, "eps_f": 600.0, "n": 10},
    "fig4c": {**BASELINE, "eps_p": 3e3, "eps_f": 1.2e3, "n": 10},
}


def preset_params(name: str) -> SystemParams:
    """SystemParams for a named preset."""
    try:
        doc = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return params_from_config(doc)


def baseline_params(**overrides) -> SystemParams:
    """Baseline SystemParams (probes off) with optional native-unit overrides."""
    p = params_from_config(BASELINE)
    if overrides:
        from .model import with_updates
        p = with_updates(p, **overrides)
    return p
