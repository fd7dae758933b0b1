"""Shot-by-shot simulation of the one-way LOCC test.

Alice samples an outcome of her rank-one POVM, transmits it, and Bob applies
the two-valued check onto the conjugate vector. Only the two Bernoulli draws
are sampled; Bob's conditional state is computed exactly from the density
operator. Randomness comes from numpy's Philox generator (a published
counter-based 64-bit generator), so transcripts are reproducible bit-for-bit
from the seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import require_finite, require_hermitian
from .testops import (RankOnePovm, TestOperator, acceptance_probability,
                      max_entangled, permute_subsystems, realized_test)

ZERO_OUTCOME_TOL = 1e-15
MARGINAL_TOL = 1e-9


@dataclass(eq=False)
class BipartiteState:
    """Density operator under test, on dimension d^2 (single) or d^4 (double)."""

    local_dim: int
    rho: np.ndarray
    party_structure: str = "single"

    def __post_init__(self):
        self.rho = require_finite(np.asarray(self.rho, dtype=complex), "state")
        if self.party_structure not in ("single", "double"):
            raise ValueError(f"unknown party_structure {self.party_structure!r}")
        n = self.local_dim ** (2 if self.party_structure == "single" else 4)
        if self.rho.shape != (n, n):
            raise ValueError(f"expected {n}x{n} density matrix, got {self.rho.shape}")
        require_hermitian(self.rho, name="state")
        if abs(np.trace(self.rho).real - 1) > 1e-10:
            raise ValueError("state trace must be 1")
        if np.linalg.eigvalsh(self.rho)[0] < -1e-10:
            raise ValueError("state must be positive semi-definite")


@dataclass(eq=False)
class ProtocolTranscript:
    shots: int
    seed: int
    alice_outcome_counts: np.ndarray
    accept_count: int
    estimate: float
    analytic: float

    @property
    def stderr(self) -> float:
        """Binomial standard error around the analytic acceptance probability."""
        return float(np.sqrt(max(self.analytic * (1 - self.analytic), 0.0) / self.shots))

    @property
    def consistent_3sigma(self) -> bool:
        # the 1e-12 slack absorbs fp rounding of the analytic trace at the
        # degenerate endpoints where the binomial sigma vanishes
        return abs(self.estimate - self.analytic) <= 3 * self.stderr + 1e-12

    def to_dict(self) -> dict:
        return {
            "shots": self.shots, "seed": self.seed,
            "outcome_histogram": [int(c) for c in self.alice_outcome_counts],
            "accept_count": self.accept_count,
            "estimate": self.estimate, "analytic": self.analytic,
            "stderr": self.stderr, "consistent_3sigma": self.consistent_3sigma,
        }


@dataclass(eq=False)
class FidelityPoint:
    fidelity: float
    analytic: float
    estimate: float
    stderr: float


def isotropic_state(d: int, fidelity: float) -> BipartiteState:
    """Maximally entangled state mixed with isotropic noise at the given fidelity."""
    if not 0 <= fidelity <= 1:
        raise ValueError(f"fidelity must lie in [0, 1], got {fidelity}")
    phi = max_entangled(d)
    p = np.outer(phi, phi.conj())
    rho = fidelity * p + (1 - fidelity) * (np.eye(d * d) - p) / (d * d - 1)
    return BipartiteState(d, rho, "single")


def double_isotropic_state(d: int, fidelity: float) -> BipartiteState:
    """Product of two isotropic states on the pairs (A1,B1), (A2,B2), canonical order."""
    rho1 = isotropic_state(d, fidelity).rho
    prod = np.kron(rho1, rho1)
    rho = permute_subsystems(prod, [d, d, d, d], [0, 2, 1, 3])
    return BipartiteState(d, rho, "double")


def analytic_acceptance(t: TestOperator, s: BipartiteState) -> float:
    """Exact acceptance probability Tr(T rho)."""
    if (t.local_dim, t.party_structure) != (s.local_dim, s.party_structure):
        raise ValueError("test and state live on different systems")
    return acceptance_probability(t, s.rho)


def outcome_distribution(m: RankOnePovm, s: BipartiteState) -> tuple[np.ndarray, np.ndarray]:
    """Alice's outcome probabilities and Bob's conditional acceptance per outcome.

    Outcomes with probability below 1e-15 are assigned conditional rejection,
    which keeps the zero-probability branch free of 0/0.
    """
    dim = m.dim
    if s.rho.shape[0] != dim * dim:
        raise ValueError(f"POVM dimension {dim} does not match state on {s.rho.shape[0]}")
    r = s.rho.reshape(dim, dim, dim, dim)
    sigma = np.einsum("ia,abcd,ic->ibd", m.vectors.conj(), r, m.vectors)
    tr = np.einsum("ibb->i", sigma).real
    q = np.clip(m.weights * tr, 0, None)
    if abs(q.sum() - 1) > MARGINAL_TOL:
        raise ValueError(f"outcome probabilities sum to {q.sum()}, POVM/state inconsistent")
    accept_num = np.einsum("ib,ibd,id->i", m.vectors, sigma, m.vectors.conj()).real
    live = q > ZERO_OUTCOME_TOL
    accept = np.zeros_like(q)
    accept[live] = np.clip(accept_num[live] / tr[live], 0, 1)
    return q, accept


def run_protocol(m: RankOnePovm, s: BipartiteState, shots: int, seed: int) -> ProtocolTranscript:
    """Simulate the two-step protocol for a number of shots, deterministically in seed."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    q, accept = outcome_distribution(m, s)
    analytic = acceptance_probability(
        realized_test(m, double=(s.party_structure == "double")), s.rho)
    rng = np.random.Generator(np.random.Philox(seed))
    u_alice = rng.random(shots)
    u_bob = rng.random(shots)
    cum = np.cumsum(q / q.sum())
    outcomes = np.minimum(np.searchsorted(cum, u_alice, side="right"), m.n_elements - 1)
    accepts = u_bob < accept[outcomes]
    counts = np.bincount(outcomes, minlength=m.n_elements)
    n_accept = int(accepts.sum())
    return ProtocolTranscript(shots, seed, counts, n_accept, n_accept / shots, analytic)


def sweep_fidelity(m: RankOnePovm, d: int, grid: list[float], shots: int,
                   seed: int) -> list[FidelityPoint]:
    """Monte Carlo acceptance across a fidelity grid, one derived seed per row."""
    if m.dim != d:
        raise ValueError("sweep expects a single-system POVM on dimension d")
    rows = []
    for idx, fid in enumerate(grid):
        child = int(np.random.SeedSequence([seed, idx]).generate_state(1, np.uint64)[0])
        t = run_protocol(m, isotropic_state(d, fid), shots, child)
        rows.append(FidelityPoint(float(fid), t.analytic, t.estimate, t.stderr))
    return rows
