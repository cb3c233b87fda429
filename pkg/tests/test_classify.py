"""Training machinery: normalization, sampling, logistic fit and inference."""

import numpy as np
import pytest
from scipy import stats

from wordle_amuse import classify
from wordle_amuse.errors import FitError, InputDataError


class TestZScore:
    def test_population_sd_convention(self):
        norm = classify.zscore_fit(np.array([[1.0], [2.0], [3.0]]))
        z = classify.zscore_apply(norm, np.array([[1.0], [2.0], [3.0]]))
        assert z.ravel() == pytest.approx([-1.2247448, 0.0, 1.2247448], abs=1e-6)

    def test_train_stats_applied_to_held_out(self):
        train = np.array([[0.0], [10.0]])
        norm = classify.zscore_fit(train)
        z = classify.zscore_apply(norm, np.array([[5.0], [20.0]]))
        assert z.ravel() == pytest.approx([0.0, 3.0])

    def test_constant_feature_named(self):
        X = np.column_stack([np.ones(5), np.arange(5.0)])
        with pytest.raises(FitError, match="width"):
            classify.zscore_fit(X, ["width", "height"])

    def test_unit_input_is_fixed_point(self, rng):
        X = rng.normal(size=(200, 3))
        X = (X - X.mean(axis=0)) / X.std(axis=0)
        norm = classify.zscore_fit(X)
        assert np.allclose(classify.zscore_apply(norm, X), X, atol=1e-9)

    def test_not_idempotent_in_general(self, rng):
        X = rng.normal(5.0, 3.0, size=(50, 2))
        norm = classify.zscore_fit(X)
        once = classify.zscore_apply(norm, X)
        twice = classify.zscore_apply(norm, once)
        assert not np.allclose(once, twice)


class TestBalancedSubsample:
    def test_counts_at_skewed_proportions(self, rng):
        # a 75/25 class split of 8000/2667 keeps 2667 of each class
        labels = np.array([0] * 8000 + [1] * 2667)
        idx = classify.balanced_subsample_indices(labels, seed=0)
        sub = labels[idx]
        assert (sub == 1).sum() == 2667
        assert (sub == 0).sum() == 2667

    def test_already_balanced_unchanged_up_to_order(self):
        labels = [0, 1, 0, 1]
        idx = classify.balanced_subsample_indices(labels, seed=3)
        assert sorted(idx) == [0, 1, 2, 3]

    def test_deterministic(self):
        labels = [0] * 50 + [1] * 20
        a = classify.balanced_subsample_indices(labels, seed=9)
        b = classify.balanced_subsample_indices(labels, seed=9)
        assert np.array_equal(a, b)

    def test_single_class_is_an_error(self):
        with pytest.raises(InputDataError):
            classify.balanced_subsample_indices([1, 1, 1], seed=0)

    def test_item_wrapper(self):
        class Item:
            def __init__(self, label):
                self.label = label
        items = [Item(0) for _ in range(10)] + [Item(1) for _ in range(4)]
        out = classify.balanced_subsample(items, seed=1)
        assert sum(it.label for it in out) == 4
        assert len(out) == 8


class TestSplit:
    def test_ten_items(self):
        tr, va, te = classify.split_indices(10, seed=0)
        assert (len(tr), len(va), len(te)) == (6, 2, 2)

    def test_partition(self, rng):
        for n in (5, 17, 100, 1001):
            tr, va, te = classify.split_indices(n, seed=4)
            merged = np.concatenate([tr, va, te])
            assert sorted(merged) == list(range(n))

    def test_deterministic(self):
        assert all(np.array_equal(a, b) for a, b in
                   zip(classify.split_indices(50, seed=7),
                       classify.split_indices(50, seed=7)))

    def test_too_small(self):
        with pytest.raises(InputDataError):
            classify.split_indices(4)

    def test_bad_fractions(self):
        with pytest.raises(InputDataError):
            classify.split_indices(10, fractions=(0.5, 0.5, 0.5))

    def test_extreme_fractions_stay_disjoint(self):
        tr, va, te = classify.split_indices(5, fractions=(0.98, 0.01, 0.01), seed=0)
        assert len(va) >= 1 and len(te) >= 1
        assert sorted(np.concatenate([tr, va, te])) == list(range(5))


def synthetic_logistic(rng, n, beta, intercept=0.0):
    X = rng.normal(size=(n, len(beta)))
    p = classify.sigmoid(intercept + X @ np.asarray(beta))
    y = (rng.random(n) < p).astype(float)
    return X, y


class TestFitLogistic:
    def test_intercept_only_balanced(self):
        X = np.zeros((40, 0))
        y = np.array([0.0, 1.0] * 20)
        model = classify.fit_logistic(X, y)
        assert model.converged
        assert model.intercept == pytest.approx(0.0, abs=1e-10)
        assert model.predict_proba(np.zeros((3, 0))) == pytest.approx([0.5] * 3)

    def test_separable_data_with_small_l2(self):
        X = np.linspace(-2, 2, 60)[:, None]
        y = (X.ravel() > 0).astype(float)
        model = classify.fit_logistic(X, y, l2=1e-6, max_iter=500)
        report = classify.evaluate(model, X, y)
        assert report.accuracy == 1.0

    def test_perfect_separation_reported_not_raised(self):
        X = np.linspace(-2, 2, 60)[:, None]
        y = (X.ravel() > 0).astype(float)
        model = classify.fit_logistic(X, y, l2=0.0)
        assert not model.converged
        assert "separat" in model.diagnostics

    def test_coefficient_recovery_within_3_se(self, rng):
        beta = np.array([0.8, -0.5, 0.3])
        X, y = synthetic_logistic(rng, 20_000, beta, intercept=0.2)
        model = classify.fit_logistic(X, y)
        inference = classify.coefficient_inference(model, X, y)
        for j, name in enumerate(model.feature_names):
            row = inference.by_name(name)
            assert abs(row.estimate - beta[j]) < 3 * row.std_error

    def test_gradient_matches_finite_differences(self, rng):
        X1 = np.column_stack([np.ones(30), rng.normal(size=(30, 3))])
        y = (rng.random(30) < 0.5).astype(float)
        beta = rng.normal(size=4) * 0.5
        for l2 in (0.0, 0.7):
            _, grad = classify.penalized_loglik_and_grad(beta, X1, y, l2)
            h = 1e-6
            for j in range(4):
                e = np.zeros(4)
                e[j] = h
                up, _ = classify.penalized_loglik_and_grad(beta + e, X1, y, l2)
                dn, _ = classify.penalized_loglik_and_grad(beta - e, X1, y, l2)
                fd = (up - dn) / (2 * h)
                assert abs(fd - grad[j]) / max(1.0, abs(grad[j])) < 1e-6

    def test_label_validation(self):
        with pytest.raises(InputDataError):
            classify.fit_logistic(np.zeros((4, 1)), np.array([0, 1, 2, 0]))


class TestInference:
    def test_requires_unregularized_converged_fit(self, rng):
        X, y = synthetic_logistic(rng, 200, [0.5])
        model = classify.fit_logistic(X, y, l2=1.0)
        with pytest.raises(FitError):
            classify.coefficient_inference(model, X, y)

    def test_duplicate_column_names_collinear_features(self, rng):
        base = rng.normal(size=(300, 1))
        X = np.column_stack([base, base])
        y = (rng.random(300) < classify.sigmoid(base.ravel())).astype(float)
        model = classify.fit_logistic(X, y, feature_names=("left", "right"),
                                      max_iter=20)
        with pytest.raises(FitError, match="left"):
            classify.coefficient_inference(model, X, y)

    def test_intercept_only_standard_error(self):
        n = 400
        X = np.zeros((n, 0))
        y = np.array([0.0, 1.0] * (n // 2))
        model = classify.fit_logistic(X, y)
        inference = classify.coefficient_inference(model, X, y)
        assert inference.rows[0].std_error == pytest.approx(2 / np.sqrt(n), rel=1e-9)

    def test_stars_match_r_significance_codes(self):
        assert classify.significance_stars(1e-5) == "***"
        assert classify.significance_stars(0.005) == "**"
        assert classify.significance_stars(0.03) == "*"
        assert classify.significance_stars(0.07) == "."
        assert classify.significance_stars(0.5) == ""

    def test_bonferroni_column(self, rng):
        X, y = synthetic_logistic(rng, 500, [0.5, 0.0])
        model = classify.fit_logistic(X, y)
        inference = classify.coefficient_inference(model, X, y)
        for row in inference.rows:
            assert row.p_bonferroni == pytest.approx(min(1.0, row.p_value * 2))


class TestLikelihoodRatio:
    def test_same_model_gives_zero(self, rng):
        X, y = synthetic_logistic(rng, 300, [0.4, -0.2])
        model = classify.fit_logistic(X, y, feature_names=("a", "b"))
        res = classify.likelihood_ratio_test(model, model, X, X, y)
        assert res.statistic == pytest.approx(0.0, abs=1e-9)
        assert res.dof == 0
        assert res.p_value == 1.0

    def test_statistic_nonnegative(self, rng):
        for _ in range(10):
            X, y = synthetic_logistic(rng, 200, [0.3, 0.0, 0.0])
            full = classify.fit_logistic(X, y, feature_names=("a", "b", "c"))
            nested = classify.fit_logistic(X[:, :1], y, feature_names=("a",))
            res = classify.likelihood_ratio_test(full, nested, X, X[:, :1], y)
            assert res.statistic >= 0.0
            assert res.dof == 2

    def test_not_nested_is_an_error(self, rng):
        X, y = synthetic_logistic(rng, 100, [0.3, 0.1])
        full = classify.fit_logistic(X[:, :1], y, feature_names=("a",))
        other = classify.fit_logistic(X[:, 1:], y, feature_names=("b",))
        with pytest.raises(InputDataError):
            classify.likelihood_ratio_test(full, other, X[:, :1], X[:, 1:], y)

    def test_regularized_models_rejected(self, rng):
        X, y = synthetic_logistic(rng, 100, [0.3])
        m = classify.fit_logistic(X, y, l2=0.5, feature_names=("a",))
        with pytest.raises(FitError):
            classify.likelihood_ratio_test(m, m, X, X, y)


class TestAffineInvariance:
    def test_raw_vs_zscored_probabilities_agree(self, rng):
        X, y = synthetic_logistic(rng, 800, [0.6, -0.4, 0.2], intercept=-0.3)
        X = X * np.array([3.0, 0.5, 10.0]) + np.array([5.0, -2.0, 100.0])
        raw = classify.fit_logistic(X, y, tol=1e-10)
        norm = classify.zscore_fit(X)
        z = classify.fit_logistic(classify.zscore_apply(norm, X), y, tol=1e-10)
        p_raw = raw.predict_proba(X)
        p_z = z.predict_proba(classify.zscore_apply(norm, X))
        assert np.max(np.abs(p_raw - p_z)) < 1e-6


class TestEvaluateAndMarginal:
    def test_constant_half_probability_model(self):
        model = classify.LogisticModel(feature_names=("a",), intercept=0.0,
                                       coef=np.zeros(1), l2=0.0, converged=True,
                                       n_iter=0, log_likelihood=0.0)
        X = np.zeros((10, 1))
        y = np.array([0, 1] * 5)
        report = classify.evaluate(model, X, y)
        assert report.accuracy == 0.5
        assert report.base_rate == 0.5

    def test_zero_coefficient_zero_effect(self, rng):
        model = classify.LogisticModel(feature_names=("a",), intercept=0.3,
                                       coef=np.zeros(1), l2=0.0, converged=True,
                                       n_iter=0, log_likelihood=0.0)
        X = rng.normal(size=(50, 1))
        assert classify.marginal_effect(model, None, X, "a") == 0.0

    def test_sigmoid_arithmetic_at_mean(self):
        w = 0.16
        model = classify.LogisticModel(feature_names=("a", "b"), intercept=0.0,
                                       coef=np.array([w, 0.0]), l2=0.0,
                                       converged=True, n_iter=0, log_likelihood=0.0)
        X = np.zeros((1, 2))
        effect = classify.marginal_effect(model, None, X, "a")
        expected = classify.sigmoid(np.array([w]))[0] - 0.5
        assert effect == pytest.approx(expected, abs=1e-12)
        assert effect == pytest.approx(0.040, abs=1e-3)

    def test_empty_evaluation_set(self):
        model = classify.LogisticModel(feature_names=(), intercept=0.0,
                                       coef=np.zeros(0), l2=0.0, converged=True,
                                       n_iter=0, log_likelihood=0.0)
        with pytest.raises(InputDataError):
            classify.evaluate(model, np.zeros((0, 0)), np.zeros(0))


class TestMLP:
    def test_zero_init_zero_epochs_predicts_base_rate(self, rng):
        X = rng.normal(size=(100, 4))
        y = np.array([0, 1] * 50, dtype=float)
        model, report = classify.fit_mlp(X, y, epochs=0, init="zeros")
        assert report.accuracy == pytest.approx(report.base_rate)

    def test_learns_xor(self, rng):
        base = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)
        X = np.tile(base, (100, 1)) + rng.normal(0, 0.05, size=(400, 2))
        y = np.tile(np.array([0.0, 1.0, 1.0, 0.0]), 100)
        for seed in range(5):
            model, _ = classify.fit_mlp(X, y, architecture="NFEAT-10-10-1",
                                        seed=seed, epochs=400, lr=0.05,
                                        batch_size=32)
            acc = classify.evaluate(model, X, y).accuracy
            assert acc >= 0.95, f"seed {seed}: accuracy {acc}"

    def test_gradients_match_finite_differences(self, rng):
        X = rng.normal(size=(3, 4))
        y = np.array([0.0, 1.0, 1.0])
        weights, biases = classify._mlp_init(4, [5, 3], seed=2, init="he")
        _, gw, gb = classify.mlp_loss_and_grads(weights, biases, X, y)
        h = 1e-6
        worst = 0.0
        for params, grads in ((weights, gw), (biases, gb)):
            for layer in range(len(params)):
                flat = params[layer].ravel()
                gflat = grads[layer].ravel()
                for k in range(flat.size):
                    orig = flat[k]
                    flat[k] = orig + h
                    up, _, _ = classify.mlp_loss_and_grads(weights, biases, X, y)
                    flat[k] = orig - h
                    dn, _, _ = classify.mlp_loss_and_grads(weights, biases, X, y)
                    flat[k] = orig
                    fd = (up - dn) / (2 * h)
                    worst = max(worst, abs(fd - gflat[k]) / max(1e-8, abs(gflat[k])))
        assert worst < 1e-4

    def test_nan_loss_aborts_with_diagnostics(self):
        X = np.array([[np.nan, 1.0]])
        y = np.array([1.0])
        with pytest.raises(FitError, match="NaN"):
            classify.fit_mlp(X, y, epochs=1)

    def test_architecture_validation(self):
        with pytest.raises(InputDataError):
            classify._parse_architecture("10-10-1")
        assert classify._parse_architecture("NFEAT-100-10-1") == [100, 10]

    def test_deterministic_given_seed(self, rng):
        X = rng.normal(size=(80, 3))
        y = (rng.random(80) < 0.5).astype(float)
        m1, _ = classify.fit_mlp(X, y, seed=4, epochs=20)
        m2, _ = classify.fit_mlp(X, y, seed=4, epochs=20)
        assert all(np.array_equal(a, b) for a, b in zip(m1.weights, m2.weights))


class TestAuxLengthRegression:
    def test_self_regression_is_perfect(self, rng):
        lengths = rng.integers(1, 7, size=100).astype(float)
        X = lengths[:, None]
        assert classify.fit_aux_length_regression(X, lengths) == pytest.approx(1.0)

    def test_exact_linear_relationship(self, rng):
        X = rng.normal(size=(200, 3))
        lengths = X @ np.array([1.0, -2.0, 0.5]) + 4.0
        r2 = classify.fit_aux_length_regression(X, lengths)
        assert r2 == pytest.approx(1.0, abs=1e-9)

    def test_pure_noise_r2_near_zero(self, rng):
        X = rng.normal(size=(10_000, 12))
        lengths = rng.normal(size=10_000)
        assert classify.fit_aux_length_regression(X, lengths) < 0.05

    def test_collinear_design_warns_not_fails(self, rng, caplog):
        base = rng.normal(size=(50, 1))
        X = np.column_stack([base, base])
        lengths = base.ravel() * 2.0
        r2 = classify.fit_aux_length_regression(X, lengths)
        assert r2 == pytest.approx(1.0, abs=1e-9)
