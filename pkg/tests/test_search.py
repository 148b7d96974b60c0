import csv
import io
import math

import numpy as np
import pytest

from spreadlab.bounds import spread_lower_bound, two_eigenvalue_bound, verify_bounds
from spreadlab.errors import NilpotentMatrixError
from spreadlab.search import (
    SWEEP_COLUMNS,
    SearchConfig,
    minimize_spread,
    normalized_spread,
    restart_rng,
    sample_cn,
    sweep_csv,
    sweep_experiment,
)
from spreadlab.spectral import perron_root


def spread_2x2(A) -> float:
    """Closed form for [[0, b], [c, d]]: roots (d +- sqrt(d^2 + 4bc)) / 2."""
    b, c, d = A[0, 1], A[1, 0], A[1, 1]
    disc = d * d + 4 * b * c
    r = (d + math.sqrt(disc)) / 2
    return math.sqrt(disc) / r


class TestSampling:
    @pytest.mark.parametrize("density", [1.0, 0.5, 0.2])
    def test_contract(self, rng, density):
        for n in range(2, 9):
            M = sample_cn(n, rng, density)
            assert M.data[0, 0] == 0.0
            assert (M.data >= 0).all()
            assert abs(perron_root(M) - 1.0) <= 1e-9
            assert M.in_cn

    def test_deterministic(self):
        a = sample_cn(6, restart_rng(7, 2), 0.5)
        b = sample_cn(6, restart_rng(7, 2), 0.5)
        np.testing.assert_array_equal(a.data, b.data)

    def test_restart_streams_differ(self):
        assert restart_rng(7, 0).random() != restart_rng(7, 1).random()

    def test_negative_seed_accepted(self):
        restart_rng(-1, 0).random()

    def test_low_density_gives_up(self):
        with pytest.raises(NilpotentMatrixError):
            sample_cn(4, np.random.default_rng(0), density=1e-12)

    def test_n2_closed_form(self, rng):
        for _ in range(500):
            A = sample_cn(2, rng).data
            s = spread_2x2(A)
            assert abs(normalized_spread(A) - s) <= 1e-12
            assert s >= 1.0 - 1e-12


class TestNormalizedSpread:
    def test_scale_free(self, rng):
        A = rng.random((5, 5))
        assert abs(normalized_spread(A) - normalized_spread(7.5 * A)) <= 1e-12

    def test_nilpotent_is_inf(self):
        assert normalized_spread(np.array([[0.0, 1.0], [0.0, 0.0]])) == math.inf


class TestConfig:
    @pytest.mark.parametrize(
        "kw", [dict(n=1), dict(n=3, restarts=0), dict(n=3, density=0.0), dict(n=3, density=1.5), dict(n=3, method="bfgs")]
    )
    def test_rejects(self, kw):
        with pytest.raises(ValueError):
            SearchConfig(**kw)


class TestMinimize:
    @pytest.mark.parametrize("method", ["nelder_mead", "anneal", "random"])
    def test_threads_do_not_change_result(self, method):
        base = dict(n=4, seed=3, restarts=3, iters_per_restart=150, method=method)
        one = minimize_spread(SearchConfig(**base, threads=1))
        three = minimize_spread(SearchConfig(**base, threads=3))
        assert one.best_spread == three.best_spread
        assert one.best_restart == three.best_restart
        assert one.trace == three.trace
        np.testing.assert_array_equal(one.best_matrix.data, three.best_matrix.data)

    def test_env_threads(self, monkeypatch):
        cfg = SearchConfig(n=3, seed=1, restarts=2, iters_per_restart=50)
        monkeypatch.setenv("SPREADLAB_THREADS", "1")
        ref = minimize_spread(cfg)
        monkeypatch.setenv("SPREADLAB_THREADS", "2")
        assert minimize_spread(cfg).best_spread == ref.best_spread

    def test_incumbent_n5(self):
        res = minimize_spread(SearchConfig(n=5, seed=0, restarts=2, iters_per_restart=200))
        assert res.best_spread <= 5 / 8 + 1e-6
        assert res.best_spread >= spread_lower_bound(5) - 1e-9
        assert not res.alert

    @pytest.mark.parametrize("n,target", [(2, 1.0), (3, 0.75)])
    def test_small_n_attained(self, n, target):
        res = minimize_spread(SearchConfig(n=n, seed=0, restarts=2, iters_per_restart=200))
        assert abs(res.best_spread - target) <= 1e-3

    def test_result_is_a_member(self):
        res = minimize_spread(SearchConfig(n=4, seed=9, restarts=2, iters_per_restart=200, method="random"))
        M = res.best_matrix
        assert M.data[0, 0] == 0.0 and M.exact is not None
        assert abs(perron_root(M) - 1.0) <= 1e-9
        assert verify_bounds(M).ok
        assert res.gap == res.best_spread - res.theoretical_bound

    def test_to_dict(self):
        doc = minimize_spread(SearchConfig(n=3, restarts=1, iters_per_restart=20)).to_dict()
        assert doc["best_matrix"].startswith("3\n")
        assert doc["alert"] is False


@pytest.fixture(scope="module")
def rows():
    return sweep_experiment(2, 5, SearchConfig(n=2, seed=11, restarts=2, iters_per_restart=100))


class TestSweep:
    def test_row_per_n(self, rows):
        assert [r["n"] for r in rows] == [2, 3, 4, 5]
        assert all(r["error"] == "" and r["violations"] == "" for r in rows)

    def test_dn_invariant(self, rows):
        for r in rows:
            assert r["theoretical_bound_general"] <= r["theoretical_bound_D_n"]
            assert r["best_spread"] >= r["theoretical_bound_general"] - 1e-9

    def test_csv_shape(self, rows):
        text = sweep_csv(rows)
        parsed = list(csv.DictReader(io.StringIO(text)))
        assert tuple(parsed[0]) == SWEEP_COLUMNS
        assert len(parsed) == 4
        assert float(parsed[3]["theoretical_bound_D_n"]) == two_eigenvalue_bound(5)
        assert text.endswith("\n") and "\r" not in text

    def test_error_is_recorded(self, monkeypatch):
        import spreadlab.search as search

        def boom(config):
            raise NilpotentMatrixError("forced")

        monkeypatch.setattr(search, "minimize_spread", boom)
        (row,) = sweep_experiment(3, 3, SearchConfig(n=3))
        assert row["error"].startswith("NilpotentMatrixError")
