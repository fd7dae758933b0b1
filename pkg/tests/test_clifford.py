import numpy as np
import pytest

from entverify.clifford import (CliffordGroup, all_weyl, canonicalize_phase,
                                character_moments, clifford_cardinality,
                                clifford_generators, clifford_povm,
                                enumerate_clifford, is_prime, load_group_cache,
                                normalizes_weyl_group, pair_product_count,
                                quantized_key, save_group_cache,
                                verify_clifford_group,
                                verify_clifford_identity, weyl, weyl_group)
from entverify.linalg import frobenius_distance
from entverify.testops import invariant_test_double, realized_test


def brute_force_pair_count(n, d):
    return sum(1 for x in range(d) for y in range(d) if (x * y) % d == n % d)


def test_weyl_d2_matrices():
    assert np.allclose(weyl(2, 0, 1), np.diag([1, -1]))
    assert np.allclose(weyl(2, 1, 0), np.array([[0, 1], [1, 0]]))
    # X @ Z by hand
    assert np.allclose(weyl(2, 1, 1), np.array([[0, -1], [1, 0]]))


def test_weyl_identity_label():
    for d in (2, 3, 5):
        assert np.allclose(weyl(d, 0, 0), np.eye(d))


def test_weyl_unitary():
    for d in (2, 3, 5):
        for w in all_weyl(d):
            assert np.allclose(w.conj().T @ w, np.eye(d), atol=1e-12)


def test_pair_count_small_cases():
    assert pair_product_count(0, 2) == 3  # (0,0),(0,1),(1,0)
    assert pair_product_count(1, 2) == 1  # (1,1)


@pytest.mark.parametrize("d", (2, 3, 4, 5, 6, 7, 8))
def test_pair_count_matches_brute_force(d):
    for n in range(d):
        assert pair_product_count(n, d) == brute_force_pair_count(n, d)


@pytest.mark.parametrize("d", (3, 5, 7))
def test_pair_count_prime_closed_form(d):
    # x=0 or y=0 gives 2d-1 pairs for n=0; for n!=0, x is any unit, y fixed
    assert pair_product_count(0, d) == 2 * d - 1
    for n in range(1, d):
        assert pair_product_count(n, d) == d - 1


def test_cardinality_values():
    assert clifford_cardinality(2) == 24
    assert clifford_cardinality(3) == 216
    assert clifford_cardinality(5) == 3000
    assert clifford_cardinality(4) == 768  # nu(.,4) = (8,2,4,2)


@pytest.mark.parametrize("d", (2, 3, 5, 7))
def test_cardinality_prime_formula(d):
    assert clifford_cardinality(d) == d ** 3 * (d * d - 1)


def test_generators_d2():
    x, z, f, s = clifford_generators(2)
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert np.allclose(f, h)
    # F X F^dag lands on Z up to phase, S X S^dag on XZ up to phase
    fxf = f @ x @ f.conj().T
    assert np.allclose(canonicalize_phase(fxf), canonicalize_phase(z), atol=1e-12)
    sxs = s @ x @ s.conj().T
    assert np.allclose(canonicalize_phase(sxs), canonicalize_phase(x @ z), atol=1e-12)


@pytest.mark.parametrize("d", (2, 3, 5))
def test_generators_normalize_weyl(d):
    for g in clifford_generators(d):
        assert normalizes_weyl_group(g, d)


def test_non_clifford_fails_normalizer_test():
    t_gate = np.diag([1, np.exp(1j * np.pi / 4)])
    assert not normalizes_weyl_group(t_gate, 2)


def test_generators_rejects_composite():
    with pytest.raises(ValueError):
        clifford_generators(4)


def test_canonicalize_idempotent(rng):
    for d in (2, 3):
        for w in all_weyl(d):
            u = w * np.exp(1j * rng.uniform(0, 2 * np.pi))
            c = canonicalize_phase(u)
            assert np.array_equal(canonicalize_phase(c), c)


def test_canonicalize_quotients_phase(rng):
    u = clifford_generators(3)[2]
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, 5))
    keys = {quantized_key(canonicalize_phase(u * p)) for p in phases}
    assert len(keys) == 1


@pytest.mark.parametrize("d,size", [(2, 24), (3, 216)])
def test_enumeration_size(d, size):
    assert len(enumerate_clifford(d)) == size


def test_enumeration_closure_random_products(rng):
    for d in (2, 3):
        group = enumerate_clifford(d)
        n = len(group)
        for _ in range(200):
            u = group.elements[rng.integers(n)]
            v = group.elements[rng.integers(n)]
            assert group.contains(u @ v)


def test_enumeration_elements_normalize_weyl():
    group = enumerate_clifford(2)
    w10 = weyl(2, 1, 0)
    labels = all_weyl(2)
    for u in group.elements:
        conj = u @ w10 @ u.conj().T
        coeffs = np.einsum("ij,kij->k", conj, labels.conj()) / 2
        assert np.max(np.abs(coeffs)) > 1 - 1e-10


def test_enumeration_rejects_composite_and_cap():
    with pytest.raises(ValueError):
        enumerate_clifford(4)
    with pytest.raises(ValueError):
        enumerate_clifford(5, size_cap=100)


def test_povm_d2():
    m = clifford_povm(enumerate_clifford(2))
    assert m.n_elements == 24
    assert np.allclose(m.weights, 1 / 6)
    assert m.completeness_defect() < 1e-10
    assert np.allclose(np.linalg.norm(m.vectors, axis=1), 1)


def test_povm_d3_weights():
    m = clifford_povm(enumerate_clifford(3))
    assert m.n_elements == 216
    assert np.allclose(m.weights, 1 / 24)


@pytest.mark.parametrize("d", (2, 3))
def test_character_moments_clifford(d):
    c1, c2 = character_moments(enumerate_clifford(d))
    assert abs(c1 - 1) < 1e-8
    assert abs(c2 - 2) < 1e-8


@pytest.mark.parametrize("d", (2, 3))
def test_character_moments_weyl_subgroup(d):
    # |Tr W(i,j)|^2 is d^2 at the identity label and 0 elsewhere
    c1, c2 = character_moments(weyl_group(d))
    assert abs(c1 - 1) < 1e-12
    assert abs(c2 - d * d) < 1e-10


def test_verify_identity_d2():
    report = verify_clifford_identity(2)
    assert report.overall
    assert report.check("t_identity_dev").measured < 1e-10
    assert report.check("trace_dev").measured < 1e-9


def test_verify_identity_d3():
    report = verify_clifford_identity(3)
    assert report.overall
    assert report.check("t_identity_dev").measured < 1e-9


def test_verify_identity_rejects_large_d():
    with pytest.raises(ValueError):
        verify_clifford_identity(5)


def test_weyl_subgroup_negative_control():
    m = clifford_povm(weyl_group(2))
    t = realized_test(m, double=True)
    dist = frobenius_distance(t.matrix, invariant_test_double(2).matrix)
    assert dist > 0.1


def test_group_pair_invariance(rng):
    group = enumerate_clifford(2)
    t = realized_test(clifford_povm(group), double=True).matrix
    n = len(group)
    for _ in range(20):
        g1 = group.elements[rng.integers(n)]
        g2 = group.elements[rng.integers(n)]
        k = np.kron(np.kron(g1, g2.conj()), np.kron(g1.conj(), g2))
        assert frobenius_distance(k @ t @ k.conj().T, t) < 1e-9


def test_verify_group_d5_checks():
    report, group = verify_clifford_group(5)
    assert report.overall
    assert len(group) == 3000


def test_group_cache_roundtrip(tmp_path):
    path = str(tmp_path / "clifford-cache.json")
    group = enumerate_clifford(2)
    save_group_cache(group, path)
    loaded = load_group_cache(2, path)
    assert loaded is not None
    assert len(loaded) == 24
    assert np.allclose(loaded.elements, group.elements)
    assert load_group_cache(3, path) is None


def test_is_prime():
    assert [d for d in range(2, 20) if is_prime(d)] == [2, 3, 5, 7, 11, 13, 17, 19]
