"""Weyl operators, Clifford group enumeration, and the group-orbit POVM.

The Clifford group is enumerated as phase-canonicalized unitaries closed
under multiplication (breadth-first closure over a generating set), so every
structural claim about it is checked by direct matrix arithmetic rather than
symplectic bookkeeping.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .linalg import frobenius_distance, vectorize
from .report import Check, VerificationReport
from .testops import (RankOnePovm, TestOperator, invariant_test_double,
                      realized_test)

UNITARY_TOL = 1e-10
NORMALIZER_TOL = 1e-10
PIVOT_TIE_TOL = 1e-9
HASH_GRID = 1e-6
DEFAULT_SIZE_CAP = 10000


def weyl(d: int, i: int, j: int) -> np.ndarray:
    """Displacement operator X^i Z^j on C^d, with X the cyclic shift and Z the clock."""
    i, j = i % d, j % d
    k = np.arange(d)
    m = np.zeros((d, d), dtype=complex)
    m[(k + i) % d, k] = np.exp(2j * np.pi * ((j * k) % d) / d)
    return m


def all_weyl(d: int) -> np.ndarray:
    """All d^2 Weyl operators stacked in row-major label order (i, j)."""
    return np.stack([weyl(d, i, j) for i in range(d) for j in range(d)])


def pair_product_count(n: int, d: int) -> int:
    """Number of ordered pairs (x, y) in Z_d^2 with x*y = n (mod d), by enumeration."""
    if not 0 <= n % d < d:
        raise ValueError("index out of range")
    n = n % d
    return sum(1 for x in range(d) for y in range(d) if (x * y) % d == n)


def clifford_cardinality(d: int) -> int:
    """Order of the phase-quotiented Clifford group via the pair-count sum.

    For prime d the result is cross-checked against d^3 (d^2 - 1).
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    counts = [pair_product_count(n, d) for n in range(d)]
    total = d * d * sum(counts[n] * counts[(n + 1) % d] for n in range(d))
    if is_prime(d):
        closed = d ** 3 * (d * d - 1)
        if total != closed:
            raise AssertionError(f"pair-count sum {total} != prime closed form {closed} at d={d}")
    return total


def is_prime(d: int) -> bool:
    if d < 2:
        return False
    return all(d % k for k in range(2, int(d ** 0.5) + 1))


def canonicalize_phase(u: np.ndarray, tie_tol: float = PIVOT_TIE_TOL) -> np.ndarray:
    """Fix the global phase: the first entry of largest magnitude becomes real positive.

    Idempotent: applying twice returns the same matrix.
    """
    u = np.asarray(u, dtype=complex)
    mags = np.abs(u).reshape(-1)
    pivot = int(np.flatnonzero(mags >= mags.max() - tie_tol)[0])
    z = u.reshape(-1)[pivot]
    if z.imag == 0 and z.real > 0:
        return u
    out = u * (z.conjugate() / abs(z))
    out.reshape(-1)[pivot] = abs(z)  # kill the fp phase residue at the pivot
    return out


def quantized_key(u: np.ndarray, grid: float = HASH_GRID) -> bytes:
    """Hash key from entries quantized to a fixed grid (stable across tiny fp noise)."""
    re = np.rint(u.real / grid).astype(np.int64)
    im = np.rint(u.imag / grid).astype(np.int64)
    return re.tobytes() + im.tobytes()


def normalizes_weyl_group(u: np.ndarray, d: int, tol: float = NORMALIZER_TOL) -> bool:
    """True if U W U^dag is a phase times a Weyl operator for every Weyl label."""
    w = all_weyl(d)
    conj = np.einsum("ij,kjm,lm->kil", u, w, u.conj())
    coeffs = np.einsum("kij,lij->kl", conj, w.conj()) / d
    return bool(np.all(np.max(np.abs(coeffs), axis=1) >= 1 - tol))


def clifford_generators(d: int) -> list[np.ndarray]:
    """Generating set {X, Z, F, S} for the Clifford group of prime dimension d.

    F is the discrete Fourier matrix; S is the diagonal quadratic-phase gate
    (diag(1, i) at d=2). Each generator is verified to normalize the Weyl group.
    """
    if not is_prime(d):
        raise ValueError(f"generators are provided for prime d only, got {d}")
    k = np.arange(d)
    x = weyl(d, 1, 0)
    z = weyl(d, 0, 1)
    f = np.exp(2j * np.pi * np.outer(k, k) / d) / np.sqrt(d)
    if d == 2:
        s = np.diag([1, 1j]).astype(complex)
    else:
        inv2 = pow(2, -1, d)
        s = np.diag(np.exp(2j * np.pi * ((k * (k + 1) * inv2) % d) / d))
    gens = [x, z, f, s]
    for g in gens:
        if np.max(np.abs(g.conj().T @ g - np.eye(d))) > UNITARY_TOL:
            raise AssertionError("generator is not unitary")
        if not normalizes_weyl_group(g, d):
            raise AssertionError("generator fails the Weyl normalizer test")
    return gens


@dataclass(eq=False)
class CliffordGroup:
    """Finite set of phase-canonicalized unitaries closed under multiplication."""

    d: int
    elements: np.ndarray
    index: dict = field(repr=False, default_factory=dict)

    def __post_init__(self):
        self.elements = np.asarray(self.elements, dtype=complex)
        if not self.index:
            self.index = {quantized_key(u): i for i, u in enumerate(self.elements)}

    def __len__(self) -> int:
        return self.elements.shape[0]

    def contains(self, u: np.ndarray, atol: float = 1e-8) -> bool:
        c = canonicalize_phase(u)
        i = self.index.get(quantized_key(c))
        return i is not None and np.allclose(self.elements[i], c, atol=atol)


def weyl_group(d: int) -> CliffordGroup:
    """The d^2 canonicalized Weyl operators as a group (negative-control subgroup)."""
    elements = np.stack([canonicalize_phase(w) for w in all_weyl(d)])
    return CliffordGroup(d, elements)


def enumerate_clifford(d: int, size_cap: int = DEFAULT_SIZE_CAP) -> CliffordGroup:
    """Breadth-first closure of the canonicalized generator products.

    Terminates only when the element count matches the cardinality formula and
    every element passes the Weyl normalizer test; any mismatch (hash collision,
    missing generator) raises.
    """
    if not is_prime(d):
        raise ValueError(f"enumeration is supported for prime d only, got {d}")
    expected = clifford_cardinality(d)
    if expected > size_cap:
        raise ValueError(f"expected group size {expected} exceeds cap {size_cap}")
    gens = clifford_generators(d)
    identity = canonicalize_phase(np.eye(d, dtype=complex))
    elements = [identity]
    index = {quantized_key(identity): 0}
    frontier = [identity]
    while frontier:
        fresh = []
        for u in frontier:
            for g in gens:
                v = canonicalize_phase(u @ g)
                key = quantized_key(v)
                if key not in index:
                    index[key] = len(elements)
                    elements.append(v)
                    fresh.append(v)
                    if len(elements) > size_cap:
                        raise RuntimeError(f"closure exceeded size cap {size_cap}")
        frontier = fresh
    if len(elements) != expected:
        raise RuntimeError(
            f"closure stabilized at {len(elements)} elements, formula gives {expected}; "
            "canonicalization collision or missing generator")
    group = CliffordGroup(d, np.stack(elements), index)
    _verify_normalizer(group)
    return group


def _verify_normalizer(group: CliffordGroup, tol: float = NORMALIZER_TOL,
                       batch: int = 512) -> None:
    d = group.d
    w = all_weyl(d)
    for start in range(0, len(group), batch):
        block = group.elements[start:start + batch]
        conj = np.einsum("nij,kjm,nlm->nkil", block, w, block.conj())
        coeffs = np.einsum("nkij,lij->nkl", conj, w.conj()) / d
        if not np.all(np.max(np.abs(coeffs), axis=2) >= 1 - tol):
            raise RuntimeError("an enumerated element fails the Weyl normalizer test")


def clifford_povm(group: CliffordGroup) -> RankOnePovm:
    """Uniform POVM {(d^2/|G|) |U/sqrt(d)><U/sqrt(d)|} over the group orbit.

    The kets are the vectorized unitaries; completeness follows from
    irreducibility of the natural action and is verified, not assumed.
    """
    d = group.d
    n = len(group)
    vecs = group.elements.reshape(n, d * d) / np.sqrt(d)
    weights = np.full(n, d * d / n)
    return RankOnePovm(d * d, weights, vecs)


def character_moments(group: CliffordGroup) -> tuple[float, float]:
    """Mean |trace|^2 and mean |trace|^4 over the group (phase invariant).

    The first moment is 1 iff the natural action is irreducible; the second
    counts the irreducible components of the action paired with its conjugate,
    so the value 2 certifies exactly two invariant subspaces.
    """
    traces = np.abs(np.einsum("nii->n", group.elements))
    return float(np.mean(traces ** 2)), float(np.mean(traces ** 4))


def verify_clifford_group(d: int, group: CliffordGroup | None = None) -> tuple[VerificationReport, CliffordGroup]:
    """Group-level certification: cardinality, orbit-POVM completeness, character moments."""
    if group is None:
        group = enumerate_clifford(d)
    povm = clifford_povm(group)
    c1, c2 = character_moments(group)
    checks = [
        Check.from_deviation("cardinality_dev", abs(len(group) - clifford_cardinality(d)), 0),
        Check.from_deviation("completeness_defect", povm.completeness_defect(), 1e-10),
        Check.from_deviation("char_moment1_dev", abs(c1 - 1), 1e-8),
        Check.from_deviation("char_moment2_dev", abs(c2 - 2), 1e-8),
    ]
    report = VerificationReport("clifford", d, checks,
                                metadata={"elements": len(group), "c1": c1, "c2": c2})
    return report, group


def verify_clifford_identity(d: int, group: CliffordGroup | None = None) -> VerificationReport:
    """Certify that the group-orbit POVM realizes the two-pair invariant test.

    Restricted to d in {2, 3}: the realized operator lives on dimension d^4.
    """
    if d not in (2, 3):
        raise ValueError("identity verification is supported for d = 2 and 3 only")
    tol = 1e-10 if d == 2 else 1e-9
    report, group = verify_clifford_group(d, group)
    povm = clifford_povm(group)
    realized = realized_test(povm, double=True)
    target = invariant_test_double(d)
    dist = frobenius_distance(realized.matrix, target.matrix)
    trace_dev = abs(np.trace(realized.matrix).real - d * d)
    checks = report.checks + [
        Check.from_deviation("t_identity_dev", dist, tol),
        Check.from_deviation("trace_dev", trace_dev, 1e-9),
    ]
    return VerificationReport("clifford", d, checks, metadata=report.metadata)


def save_group_cache(group: CliffordGroup, path: str) -> None:
    """Write (or update) the JSON group cache, keyed by dimension."""
    store = {"schema": 1, "entries": {}}
    if os.path.exists(path):
        with open(path) as fh:
            store = json.load(fh)
    mats = [[[ [z.real, z.imag] for z in row] for row in u] for u in group.elements]
    store.setdefault("entries", {})[str(group.d)] = {
        "d": group.d, "count": len(group), "elements": mats}
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w") as fh:
        json.dump(store, fh)


def load_group_cache(d: int, path: str) -> CliffordGroup | None:
    """Reload an enumerated group; returns None on miss or failed validation."""
    if not os.path.exists(path):
        return None
    with open(path) as fh:
        store = json.load(fh)
    entry = store.get("entries", {}).get(str(d))
    if entry is None:
        return None
    raw = np.asarray(entry["elements"])
    elements = raw[..., 0] + 1j * raw[..., 1]
    if entry["count"] != elements.shape[0] or entry["count"] != clifford_cardinality(d):
        return None
    group = CliffordGroup(d, elements)
    try:
        _verify_normalizer(group)
    except RuntimeError:
        return None
    return group
