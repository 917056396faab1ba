"""Oracle-vs-closed-form equivalence suites.

Each family sweeps a temperature grid and reports the maximum relative
deviation between the exact-diagonalization route and the corresponding
closed form:

* fluctuation susceptibility of the two-site cluster vs the dimer formula,
* reduced-pair concurrence vs the closed concurrence,
* |<B>| of the thermal state (optimal directions) vs the closed Bell curve,
* the direction-set optimum vs |<B>| (certifies the fixed set is optimal),
* the dimer+monomer cluster at J' = 0 vs dimer + Curie superposition.

A J'-sweep table probes how fast the decoupling approximation degrades when
the dimer-monomer coupling is switched on.
"""

from dataclasses import dataclass

import numpy as np

from . import dimer, spin_chain, two_qubit
from .constants import MU_B_OVER_K_B

DEFAULT_TOLERANCE = 1e-10


def relative_deviation(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0.0 else 0.0


@dataclass
class FamilyResult:
    """Outcome of one equivalence family."""

    name: str
    max_deviation: float
    tolerance: float
    n_points: int

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


def temperature_grid(t_min: float = 10.0, t_max: float = 1000.0, count: int = 20) -> np.ndarray:
    return np.logspace(np.log10(t_min), np.log10(t_max), count)


def run_equivalence_suite(
    j_over_kb: float = -693.15,
    g: float = 2.21,
    grid=None,
    tolerance: float = DEFAULT_TOLERANCE,
    fault: float = 0.0,
) -> list:
    """Dimer oracle vs closed forms on a temperature grid.

    ``fault`` skews the oracle susceptibility by the given relative amount;
    it exists so the harness can prove it detects discrepancies.
    """
    if grid is None:
        grid = temperature_grid()
    params = dimer.ModelParams(j_over_kb=j_over_kb, g=g, curie_c=0.0)
    spec = spin_chain.dimer_spec(j_over_kb, g)
    devs = {"susceptibility": 0.0, "concurrence": 0.0, "bell": 0.0, "chsh_optimum": 0.0}
    for temperature in grid:
        t = float(temperature)
        rho = spin_chain.thermal_state(spec, t)
        chi_oracle = spin_chain.fluctuation_susceptibility(spec, t) * (1.0 + fault)
        devs["susceptibility"] = max(
            devs["susceptibility"],
            relative_deviation(chi_oracle, dimer.chi_dimer(params, t)),
        )
        devs["concurrence"] = max(
            devs["concurrence"],
            relative_deviation(
                spin_chain.pair_concurrence(spec, t, (0, 1)),
                dimer.concurrence_closed(params, t),
            ),
        )
        bell_oracle = abs(two_qubit.bell_expectation(rho))
        devs["bell"] = max(
            devs["bell"], relative_deviation(bell_oracle, dimer.bell_closed(params, t))
        )
        devs["chsh_optimum"] = max(
            devs["chsh_optimum"],
            relative_deviation(two_qubit.chsh_maximum(rho), bell_oracle),
        )
    return [
        FamilyResult(name=name, max_deviation=dev, tolerance=tolerance, n_points=len(grid))
        for name, dev in devs.items()
    ]


def run_decoupling_suite(
    j_over_kb: float = -693.15,
    g: float = 2.21,
    grid=None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> list:
    """Dimer+monomer cluster at J' = 0 vs the superposition closed form."""
    if grid is None:
        grid = temperature_grid()
    curie_free_spin = g * g * MU_B_OVER_K_B / 4.0
    params = dimer.ModelParams(j_over_kb=j_over_kb, g=g, curie_c=curie_free_spin)
    dimer_params = dimer.ModelParams(j_over_kb=j_over_kb, g=g, curie_c=0.0)
    spec = spin_chain.dimer_plus_monomer_spec(j_over_kb, 0.0, g)
    dev_chi = 0.0
    dev_pair = 0.0
    dev_monomer = 0.0
    for temperature in grid:
        t = float(temperature)
        dev_chi = max(
            dev_chi,
            relative_deviation(
                spin_chain.fluctuation_susceptibility(spec, t),
                dimer.chi_total(params, t),
            ),
        )
        dev_pair = max(
            dev_pair,
            relative_deviation(
                spin_chain.pair_concurrence(spec, t, (0, 1)),
                dimer.concurrence_closed(dimer_params, t),
            ),
        )
        # uncoupled monomer must share no entanglement with the dimer
        dev_monomer = max(dev_monomer, spin_chain.pair_concurrence(spec, t, (1, 2)))
    return [
        FamilyResult("decoupled_susceptibility", dev_chi, tolerance, len(grid)),
        FamilyResult("decoupled_pair_concurrence", dev_pair, tolerance, len(grid)),
        FamilyResult("decoupled_monomer_concurrence", dev_monomer, tolerance, len(grid)),
    ]


def jprime_sweep(
    j_over_kb: float = -693.15,
    g: float = 2.21,
    ratios=(0.0, 0.001, 0.01, 0.05, 0.1),
    temperature: float = 100.0,
) -> list:
    """Rows (ratio, T, oracle pair concurrence, closed concurrence, |dev|)."""
    params = dimer.ModelParams(j_over_kb=j_over_kb, g=g, curie_c=0.0)
    closed = dimer.concurrence_closed(params, temperature)
    rows = []
    for ratio in ratios:
        spec = spin_chain.dimer_plus_monomer_spec(j_over_kb, ratio * j_over_kb, g)
        oracle = spin_chain.pair_concurrence(spec, temperature, (0, 1))
        rows.append((float(ratio), float(temperature), oracle, closed, abs(oracle - closed)))
    return rows
