"""Discrete one-way LOCC tests for maximally entangled states.

Constructs the SIC, MUB, and Clifford-orbit measurement schemes, certifies
the operator identities and optimality bounds they satisfy, and simulates the
two-party protocol shot by shot.
"""

__version__ = "0.1.0"

from .clifford import (CliffordGroup, character_moments, clifford_cardinality,
                       clifford_generators, clifford_povm, enumerate_clifford,
                       pair_product_count, verify_clifford_group,
                       verify_clifford_identity, weyl, weyl_group)
from .linalg import (conjugate, eigen_hermitian, frobenius_distance,
                     numerical_rank, tensor_product, vectorize)
from .mub import (MubFamily, mub_check, mub_povm, mub_prime, pvm_count_bound,
                  verify_mub_identity)
from .protocol import (BipartiteState, FidelityPoint, ProtocolTranscript,
                       analytic_acceptance, double_isotropic_state,
                       isotropic_state, run_protocol, sweep_fidelity)
from .report import Check, VerificationReport
from .sic import (Fiducial, FiducialSearchConfig, FiducialSearchError,
                  SicCertificate, get_fiducial, known_fiducial, search_fiducial,
                  sic_check, verify_sic_identity, weyl_orbit)
from .testops import (CompletenessError, RankOnePovm, TestOperator,
                      acceptance_probability, invariant_test_double,
                      invariant_test_single, max_entangled,
                      permute_subsystems, realized_test)

__all__ = [
    "BipartiteState", "Check", "CliffordGroup", "CompletenessError",
    "Fiducial", "FiducialSearchConfig", "FiducialSearchError", "FidelityPoint",
    "MubFamily", "ProtocolTranscript", "RankOnePovm", "SicCertificate",
    "TestOperator", "VerificationReport", "acceptance_probability",
    "analytic_acceptance", "character_moments", "clifford_cardinality",
    "clifford_generators", "clifford_povm", "conjugate",
    "double_isotropic_state", "eigen_hermitian", "enumerate_clifford",
    "frobenius_distance", "get_fiducial", "invariant_test_double",
    "invariant_test_single", "isotropic_state", "known_fiducial",
    "max_entangled", "mub_check", "mub_povm", "mub_prime", "numerical_rank",
    "pair_product_count", "permute_subsystems", "pvm_count_bound",
    "realized_test", "run_protocol", "search_fiducial", "sic_check",
    "sweep_fidelity", "tensor_product", "vectorize", "verify_clifford_group",
    "verify_clifford_identity", "verify_mub_identity", "verify_sic_identity",
    "weyl", "weyl_group", "weyl_orbit",
]
