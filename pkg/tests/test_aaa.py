import numpy as np
import pytest

from aaalqo import aaa_eval, aaa_eval_grid, aaa_fit, conjugate_close


class TestFit:
    def test_recovers_first_order_rational(self):
        rng = np.random.default_rng(1)
        pts = 1j * np.logspace(-1, 2, 20) + rng.uniform(0, 1, 20)
        vals = 1.0 / (pts + 1.0)
        model = aaa_fit(pts, vals, tol=1e-10)
        assert model.converged
        assert model.n <= 3
        err = np.abs(aaa_eval_grid(model, pts) - vals)
        assert np.max(err) <= 1e-10 * np.max(np.abs(vals))

    def test_degree_three_rational(self):
        rng = np.random.default_rng(2)
        pts = 1j * np.logspace(-1, 2, 30) + rng.uniform(0, 1, 30)
        vals = (pts ** 2 + 2.0) / ((pts + 1.0) * (pts + 2.0) * (pts + 4.0))
        model = aaa_fit(pts, vals, tol=1e-10)
        assert model.converged
        assert model.n <= 4
        err = np.abs(aaa_eval_grid(model, pts) - vals)
        assert np.max(err) <= 1e-10 * np.max(np.abs(vals))

    def test_constant_zero_data(self):
        pts = 1j * np.linspace(1, 5, 6)
        model = aaa_fit(pts, np.zeros(6), tol=1e-8)
        assert model.converged
        assert model.n == 0
        assert np.all(aaa_eval_grid(model, pts) == 0.0)

    def test_interpolates_support(self):
        rng = np.random.default_rng(3)
        pts = rng.normal(size=20) + 1j * rng.uniform(1, 5, 20)
        vals = rng.normal(size=20) + 1j * rng.normal(size=20)
        model = aaa_fit(pts, vals, tol=1e-13, nmax=4)
        assert model.n == 4
        assert not model.converged
        idx = [int(np.argmin(np.abs(pts - x))) for x in model.xi]
        for k, i in enumerate(idx):
            assert model.xi[k] == pts[i]
            assert model.h[k] == vals[i]
            assert aaa_eval(model, model.xi[k]) == model.h[k]

    def test_support_points_distinct_and_from_input(self):
        rng = np.random.default_rng(4)
        pts = rng.normal(size=15) + 1j * rng.uniform(1, 5, 15)
        vals = np.tanh(pts.real) + 1j / (pts + 3.0)
        model = aaa_fit(pts, vals, tol=1e-9)
        assert len(set(model.xi)) == model.n
        assert all(x in set(pts) for x in model.xi)

    def test_history_tracks_iterations(self):
        rng = np.random.default_rng(5)
        pts = 1j * np.logspace(-1, 2, 20) + rng.uniform(0, 1, 20)
        vals = 1.0 / (pts + 1.0) + 1.0 / (pts + 3.0)
        model = aaa_fit(pts, vals, tol=1e-12)
        sizes = [rec[0] for rec in model.history]
        errs = [rec[1] for rec in model.history]
        assert sizes[0] == 0
        assert sizes == sorted(sizes)
        assert sizes[-1] == model.n
        assert errs[-1] <= 1e-12 * np.max(np.abs(vals))

    def test_validation(self):
        with pytest.raises(ValueError):
            aaa_fit(np.array([1.0j]), np.array([1.0]), tol=1e-8)
        pts = 1j * np.linspace(1, 3, 4)
        with pytest.raises(ValueError):
            aaa_fit(pts, np.ones(4), tol=0.0)


class TestConjugateSymmetry:
    def test_real_symmetric_fit(self):
        pts, pairing = conjugate_close(1j * np.logspace(-1, 2, 15))
        vals = 1.0 / (pts + 1.0) + 2.0 / (pts ** 2 + pts + 4.0)
        model = aaa_fit(pts, vals, tol=1e-10, pairing=pairing)
        assert model.converged
        # support closed under conjugation with exactly conjugate weights
        for k, x in enumerate(model.xi):
            mate = int(np.argmin(np.abs(model.xi - np.conj(x))))
            assert model.xi[mate] == np.conj(x)
            assert model.w[mate] == np.conj(model.w[k])
        for s in [0.7j, 2.5j, 30.0j]:
            a = aaa_eval(model, np.conj(s))
            b = np.conj(aaa_eval(model, s))
            assert a == pytest.approx(b, rel=1e-12)
