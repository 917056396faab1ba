"""Spin-dimer susceptibility modelling and thermal-entanglement analysis.

Models the magnetic susceptibility of exchange-coupled spin-1/2 dimers with
a paramagnetic monomer background, extracts entanglement quantifiers
(witness, concurrence, Bell-CHSH mean value) and critical temperatures from
susceptibility data, and validates every closed form against an
exact-diagonalization oracle for small spin-1/2 clusters.
"""

from .constants import MU_B_OVER_K_B, reduced_susceptibility, susceptibility_from_reduced
from .dimer import (
    ModelParams,
    ThresholdSet,
    bell_closed,
    bell_from_chi,
    chi_dimer,
    chi_monomer,
    chi_total,
    concurrence_closed,
    concurrence_from_chi,
    reduced_chi_dimer,
    thermal_dimer_state,
    thresholds,
)
from .fitting import FitResult, SusceptibilityDataset, fit, residuals, synth_dataset
from .io import parse_dataset, write_dataset
from .quantum import (
    EigenDecomposition,
    hermitian_eig,
    kron,
    partial_trace,
    spin_operator,
)
from .spin_chain import (
    SpinChainSpec,
    build_hamiltonian,
    dimer_plus_monomer_spec,
    dimer_spec,
    fluctuation_susceptibility,
    pair_concurrence,
    thermal_state,
)
from .two_qubit import (
    DEFAULT_BELL_DIRECTIONS,
    BellDirections,
    bell_expectation,
    chsh_maximum,
    concurrence,
    witness_from_chi,
)

__version__ = "0.1.0"

__all__ = [
    "MU_B_OVER_K_B",
    "reduced_susceptibility",
    "susceptibility_from_reduced",
    "ModelParams",
    "ThresholdSet",
    "bell_closed",
    "bell_from_chi",
    "chi_dimer",
    "chi_monomer",
    "chi_total",
    "concurrence_closed",
    "concurrence_from_chi",
    "reduced_chi_dimer",
    "thermal_dimer_state",
    "thresholds",
    "FitResult",
    "SusceptibilityDataset",
    "fit",
    "residuals",
    "synth_dataset",
    "parse_dataset",
    "write_dataset",
    "EigenDecomposition",
    "hermitian_eig",
    "kron",
    "partial_trace",
    "spin_operator",
    "SpinChainSpec",
    "build_hamiltonian",
    "dimer_plus_monomer_spec",
    "dimer_spec",
    "fluctuation_susceptibility",
    "pair_concurrence",
    "thermal_state",
    "DEFAULT_BELL_DIRECTIONS",
    "BellDirections",
    "bell_expectation",
    "chsh_maximum",
    "concurrence",
    "witness_from_chi",
]
