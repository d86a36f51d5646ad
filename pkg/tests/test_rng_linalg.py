import numpy as np
import pytest

from robustcircle.linalg import jacobi_eigh, jacobi_svd
from robustcircle.rng import MASK64, MULTIPLIER, XorShiftStar, mix, splitmix64


def test_xorshift_step_matches_reference_rule():
    rng = XorShiftStar(123)
    x = rng._state
    for _ in range(5):
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        assert rng.next_u64() == (x * MULTIPLIER) & MASK64


def test_seed_reproducibility():
    a, b = XorShiftStar(7), XorShiftStar(7)
    assert [a.next_u64() for _ in range(100)] == [b.next_u64() for _ in range(100)]
    assert XorShiftStar(7).next_u64() != XorShiftStar(8).next_u64()


def test_zero_seed_has_nonzero_state():
    rng = XorShiftStar(0)
    assert len({rng.next_u64() for _ in range(10)}) == 10


def test_splitmix_known_value():
    # first output of the reference splitmix64 seeded with 0
    assert splitmix64(0) == 0xE220A8397B1DCDAF


def test_mix_gives_distinct_streams():
    seeds = {mix(2024, i) for i in range(1000)}
    assert len(seeds) == 1000
    assert mix(1, 2) != mix(2, 1)


def test_uniform_range_and_moments():
    rng = XorShiftStar(1)
    u = rng.uniforms(100000)
    assert u.min() >= 0.0 and u.max() < 1.0
    assert abs(u.mean() - 0.5) < 0.005


def test_below_is_in_range_and_roughly_uniform():
    rng = XorShiftStar(2)
    counts = np.bincount([rng.below(7) for _ in range(70000)], minlength=7)
    assert counts.sum() == 70000 and len(counts) == 7
    assert np.all(np.abs(counts - 10000) < 500)


def test_normals_moments():
    z = XorShiftStar(3).normals(100000)
    assert abs(z.mean()) < 0.01
    assert abs(z.std() - 1.0) < 0.01


def test_triplet_distinct_and_uniform():
    rng = XorShiftStar(4)
    hits = np.zeros(6)
    for _ in range(30000):
        t = rng.triplet(6)
        assert len(set(t)) == 3 and all(0 <= i < 6 for i in t)
        hits[list(t)] += 1
    # every index appears in half of the triplets
    assert np.all(np.abs(hits / 30000 - 0.5) < 0.02)


def test_triplet_minimum_size():
    assert sorted(XorShiftStar(0).triplet(3)) == [0, 1, 2]


@pytest.mark.parametrize("n", [3, 4])
def test_jacobi_eigh_against_numpy(n):
    g = np.random.default_rng(n)
    for _ in range(20):
        M = g.normal(size=(n, n))
        S = M + M.T
        w, V = jacobi_eigh(S)
        assert np.all(np.diff(w) >= 0)
        np.testing.assert_allclose(w, np.linalg.eigvalsh(S), atol=1e-12)
        np.testing.assert_allclose(V.T @ V, np.eye(n), atol=1e-13)
        np.testing.assert_allclose(S @ V, V * w, atol=1e-12)


def test_jacobi_eigh_diagonal_input():
    w, V = jacobi_eigh(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_array_equal(w, [1.0, 2.0, 3.0])
    np.testing.assert_allclose(np.abs(V), np.eye(3)[:, [1, 2, 0]])


def test_jacobi_svd_against_numpy():
    g = np.random.default_rng(9)
    for _ in range(20):
        A = g.normal(size=(50, 4))
        s, V = jacobi_svd(A)
        assert np.all(np.diff(s) <= 0)
        np.testing.assert_allclose(s, np.linalg.svd(A, compute_uv=False), rtol=1e-12)
        np.testing.assert_allclose(V.T @ V, np.eye(4), atol=1e-13)
        np.testing.assert_allclose(np.linalg.norm(A @ V, axis=0), s, rtol=1e-12)


def test_jacobi_svd_rank_deficient():
    g = np.random.default_rng(10)
    A = g.normal(size=(30, 3))
    A = np.column_stack([A, A[:, 0] + A[:, 1]])
    s, V = jacobi_svd(A)
    assert s[-1] < 1e-12 * s[0]
    assert np.linalg.norm(A @ V[:, -1]) < 1e-12 * s[0]
