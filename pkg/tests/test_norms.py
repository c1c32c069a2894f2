import numpy as np
import pytest

from schmidt_norms import fixtures
from schmidt_norms.linalg import (
    BipartiteOperator,
    Frame,
    min_eig_hermitian,
    operator_norm,
    tensor,
)
from schmidt_norms.norms import (
    SeeSawConfig,
    block_positive_decomposition,
    compress,
    dec_norm_value,
    max_order_norm_upper,
    maxk_space_norm_bounds,
    min_order_norm,
    omin_norm,
    sk_norm,
)
from schmidt_norms.rand import RandomConfig, complex_gaussian, random_unitary


def _cfg(seed, restarts=8, max_iters=120):
    return SeeSawConfig(restarts=restarts, max_iters=max_iters,
                        rng=RandomConfig(seed=seed))


def _random_op(dims, rng):
    d = dims[0] * dims[1]
    return BipartiteOperator(dims=dims, mat=complex_gaussian(rng, (d, d)))


def test_sk_of_entangled_projector():
    # rank-one projector onto the n-dim maximally entangled vector: value k/n
    n = 3
    phi = fixtures.maximally_entangled(n)
    proj = BipartiteOperator(dims=(n, n), mat=np.outer(phi.amplitudes,
                                                       phi.amplitudes.conj()))
    for k in (1, 2, 3):
        est = sk_norm(proj, k, _cfg(0))
        assert est.value == pytest.approx(k / n, abs=1e-6)


def test_sk_full_k_is_operator_norm():
    rng = RandomConfig(seed=1).generator()
    for _ in range(10):
        op = _random_op((2, 3), rng)
        est = sk_norm(op, 2, _cfg(2, restarts=1))
        assert est.direction == "exact"
        assert est.value == pytest.approx(operator_norm(op.mat), abs=1e-10)


def test_sk_monotone_in_k_and_ceiling():
    rng = RandomConfig(seed=3).generator()
    for _ in range(5):
        op = _random_op((3, 3), rng)
        vals = [sk_norm(op, k, _cfg(4)).value for k in (1, 2, 3)]
        assert vals[0] <= vals[1] + 1e-8
        assert vals[1] <= vals[2] + 1e-8
        ceiling = operator_norm(op.mat)
        for v in vals:
            assert v <= ceiling + 1e-10


def test_sk_local_unitary_invariance():
    rng = RandomConfig(seed=5).generator()
    op = _random_op((2, 3), rng)
    base = sk_norm(op, 1, _cfg(6, restarts=12)).value
    for _ in range(3):
        u1, u2 = random_unitary(2, rng), random_unitary(3, rng)
        v1, v2 = random_unitary(2, rng), random_unitary(3, rng)
        rotated = BipartiteOperator(
            dims=(2, 3), mat=tensor(u1, u2) @ op.mat @ tensor(v1, v2))
        val = sk_norm(rotated, 1, _cfg(6, restarts=12)).value
        assert val == pytest.approx(base, abs=2e-6)


def test_sk_history_nondecreasing():
    rng = RandomConfig(seed=7).generator()
    op = _random_op((3, 3), rng)
    est = sk_norm(op, 2, _cfg(8))
    assert len(est.history) == 8
    for hist in est.history:
        assert np.all(np.diff(np.asarray(hist)) >= 0)


def test_sk_witness_attains_value():
    rng = RandomConfig(seed=9).generator()
    op = _random_op((3, 3), rng)
    est = sk_norm(op, 1, _cfg(10))
    v, w = est.witness.vectors
    attained = abs(v.amplitudes.conj() @ op.mat @ w.amplitudes)
    assert attained == pytest.approx(est.value, abs=1e-9)


def test_compress_identity_frame_is_permutation():
    rng = RandomConfig(seed=11).generator()
    op = _random_op((2, 3), rng)
    c = compress(op, Frame(vectors=np.eye(3)))
    assert operator_norm(c) == pytest.approx(operator_norm(op.mat), abs=1e-10)
    assert np.trace(c) == pytest.approx(np.trace(op.mat), abs=1e-10)


def test_compress_rank_one_frame_entries():
    op = fixtures.example51(3)
    e0 = np.zeros((1, 3))
    e0[0, 0] = 1.0
    c = compress(op, Frame(vectors=e0))
    want = op.blocks()[:, 0, :, 0]
    assert np.max(np.abs(c - want)) < 1e-12


def test_omin_between_minorder_and_sk():
    rng = RandomConfig(seed=12).generator()
    for _ in range(5):
        op = _random_op((2, 3), rng)
        k = 1 + int(rng.integers(2))
        mo = min_order_norm(op, k, _cfg(13)).value
        om = omin_norm(op, k, _cfg(13)).value
        sk = sk_norm(op, k, _cfg(13)).value
        assert mo <= om + 1e-6
        assert om <= sk + 1e-6
        assert om <= 2 * mo + 1e-6


def test_hierarchy_with_dec_and_upper():
    rng = RandomConfig(seed=14).generator()
    for _ in range(3):
        op = _random_op((2, 3), rng)
        k = 2
        cfg = _cfg(15, restarts=6)
        mo = min_order_norm(op, k, cfg).value
        om = omin_norm(op, k, cfg).value
        parts = block_positive_decomposition(op, k, cfg)
        dec = dec_norm_value(op, parts, k, cfg).value
        upper = max_order_norm_upper(op, k, cfg).value
        assert mo <= om + 1e-6
        assert om <= dec + 1e-6
        assert dec <= upper + 1e-6


def test_hermitian_minorder_equals_omin():
    # on Hermitian operators every compression is Hermitian, so the
    # numerical radius equals the operator norm
    rng = RandomConfig(seed=16).generator()
    a = complex_gaussian(rng, (6, 6))
    op = BipartiteOperator(dims=(2, 3), mat=(a + a.conj().T) / 2)
    mo = min_order_norm(op, 2, _cfg(17)).value
    om = omin_norm(op, 2, _cfg(17)).value
    assert mo == pytest.approx(om, abs=1e-6)


def test_minorder_full_k_is_numerical_radius():
    from schmidt_norms.linalg import numerical_radius
    rng = RandomConfig(seed=18).generator()
    op = _random_op((3, 3), rng)
    est = min_order_norm(op, 3, _cfg(19, restarts=1))
    assert est.value == pytest.approx(numerical_radius(op.mat), abs=1e-8)


def test_block_positive_decomposition_reconstructs():
    rng = RandomConfig(seed=20).generator()
    op = _random_op((2, 3), rng)
    parts = block_positive_decomposition(op, 2, _cfg(21, restarts=6))
    total = sum(lam * p.mat for lam, p in parts)
    assert np.max(np.abs(total - op.mat)) < 1e-9
    for _, p in parts:
        assert min_eig_hermitian(p.mat) > -np.inf  # parts are Hermitian
        assert np.max(np.abs(p.mat - p.mat.conj().T)) < 1e-10


def test_dec_norm_rejects_bad_decomposition():
    op = fixtures.example51(3)
    bad = [(1.0, BipartiteOperator(dims=(3, 3), mat=np.eye(9)))]
    with pytest.raises(ValueError):
        dec_norm_value(op, bad, 2, _cfg(22, restarts=2))


def test_maxk_space_bounds_sandwich():
    rng = RandomConfig(seed=23).generator()
    op = _random_op((2, 3), rng)
    lower, upper = maxk_space_norm_bounds(op, 1, _cfg(24, restarts=4), samples=6)
    assert lower.direction == "lower"
    assert upper.direction == "upper"
    assert lower.value <= upper.value + 1e-9
    assert lower.value >= operator_norm(op.mat) - 1e-9


def test_maxk_space_full_k_exact():
    rng = RandomConfig(seed=25).generator()
    op = _random_op((2, 3), rng)
    lower, upper = maxk_space_norm_bounds(op, 2, _cfg(26, restarts=2))
    assert lower.direction == "exact" and upper.direction == "exact"
    assert lower.value == pytest.approx(operator_norm(op.mat), abs=1e-10)
    assert upper.value == pytest.approx(lower.value, abs=1e-12)


def test_k_validation():
    op = fixtures.example51(3)
    for bad in (0, 4, -1):
        with pytest.raises(ValueError):
            sk_norm(op, bad, _cfg(27, restarts=1))
        with pytest.raises(ValueError):
            omin_norm(op, bad, _cfg(27, restarts=1))
