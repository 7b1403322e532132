import itertools

import numpy as np
import pytest

import sparseshare as ss


def test_optimum_at_q89():
    pt = ss.optimal_tradeoff_point(0.95, 0.9, 89, 2)
    assert pt.relative == pytest.approx(0.23347595139987406, abs=1e-12)
    assert ss.optimal_tradeoff_point(0.95, 0.9, 89, 5).relative == pytest.approx(
        0.28415703133768254, abs=1e-12
    )


def test_pmf_hits_sparsity_and_matches_enumeration():
    pmf = ss.solve_optimal_pmf(0.8, 0.6, 11, 3)
    assert pmf.p1 == pytest.approx(0.70667190857590191, abs=1e-12)
    assert ss.share_sparsity(pmf, 0.8) == pytest.approx(0.6, abs=1e-14)
    closed = ss.analytic_leakage(pmf, 0.8, 0.6)
    for share in range(3):
        assert ss.brute_force_mi(pmf, 0.8, share) == pytest.approx(closed, abs=1e-12)
    assert ss.brute_force_mi(pmf, 0.8, 1, alphas=[10, 4, 7]) == pytest.approx(closed, abs=1e-12)
    assert ss.stationarity_residual(pmf) < 1e-8


def test_infeasible_target_raises():
    lo, hi = ss.feasible_sd_range(0.95, 89, 5)
    assert hi < 0.99
    with pytest.raises(ss.InfeasibleError):
        ss.solve_optimal_pmf(0.95, 0.99, 89, 5)
    with pytest.raises(ValueError):
        ss.optimal_tradeoff_point(0.95, 0.99, 89, 5)


def test_matrix_roundtrip_and_product():
    dense = np.array([[0, 3, 0], [90, 0, -1]])
    m = ss.SparseMatrix(89, dense)
    assert m.shape == (2, 3)
    assert m.triplets() == [(0, 1, 3), (1, 0, 1), (1, 2, 88)]
    ident = ss.SparseMatrix(89, np.eye(3, dtype=np.int64))
    assert (m @ ident) == m
    np.testing.assert_array_equal(m.to_dense(), np.array([[0, 3, 0], [1, 0, 88]]))


def test_every_three_workers_decode():
    n, q = 5, 89
    a = ss.sample_source_matrix(q, 0.95, 20, 15, seed=1)
    b = ss.sample_source_matrix(q, 0.9, 15, 25, seed=2)
    sa = ss.encode(a, ss.solve_optimal_pmf(0.95, 0.9, q, n), seed=3)
    sb = ss.encode(b, ss.solve_optimal_pmf(0.9, 0.85, q, n), seed=4)
    assert len(sa) == n
    expected = a @ b
    for picks in itertools.combinations(range(n), 3):
        assert ss.multiply(sa, sb, picks) == expected
    assert ss.multiply(sa, sb, range(n)) == expected


def test_tampered_worker_fails_cross_check():
    q = 89
    a = ss.sample_source_matrix(q, 0.9, 6, 6, seed=5)
    sa = ss.encode(a, ss.solve_optimal_pmf(0.9, 0.8, q, 4), seed=6)
    evals = [ss.evaluate_task(sa[i], sa[i], i + 1) for i in range(4)]
    evals[3] = ss.evaluate_task(sa[3], sa[2], 4)
    with pytest.raises(ss.DecodeError):
        ss.reconstruct_product(evals, cross_check=True)


def test_simulation_is_deterministic():
    cfg = ss.SimConfig()
    cfg.n, cfg.seed, cfg.stragglers = 4, 9, [0]
    first, second = ss.run_simulation(cfg), ss.run_simulation(cfg)
    assert first.decode_ok and first.baseline_decode_ok
    assert 0 not in first.used_workers
    assert str(first) == str(second)
    assert first.cost_sparse < first.cost_dense_baseline
