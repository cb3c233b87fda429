"""Training machinery for the amusement classifier.

Everything here is written against plain NumPy arrays and is deterministic
given explicit seeds: balanced subsampling, train/val/test splitting,
z-score normalization, logistic regression fitted by iteratively reweighted
least squares (with Wald inference on the unregularized fit), nested-model
likelihood-ratio tests, a small feedforward-network baseline, and the
auxiliary game-length regression.

Conventions fixed here: the logistic objective is the log-likelihood minus
(l2/2)*||w||^2 with the intercept never penalized; z-scores use the
population standard deviation; classification thresholds at 0.5.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, TypeVar

import numpy as np
from scipy import stats

from .errors import FitError, InputDataError

logger = logging.getLogger(__name__)

T = TypeVar("T")

# Pr(>|z|) significance codes
SIGNIFICANCE_CODES = ((0.001, "***"), (0.01, "**"), (0.05, "*"), (0.1, "."))

_DIVERGENCE_NORM = 30.0  # |coef| beyond this on z-scored features means separation


def significance_stars(p: float) -> str:
    for cutoff, stars in SIGNIFICANCE_CODES:
        if p < cutoff:
            return stars
    return ""


# ---------------------------------------------------------------------------
# normalization


@dataclass(frozen=True)
class Normalizer:
    """Per-feature mean and population sd, fit on the training split only."""

    mean: np.ndarray
    sd: np.ndarray
    feature_names: tuple[str, ...] | None = None


def zscore_fit(X: np.ndarray, feature_names: Sequence[str] | None = None) -> Normalizer:
    X = np.asarray(X, dtype=np.float64)
    mean = X.mean(axis=0)
    sd = X.std(axis=0)  # population sd
    for j, s in enumerate(sd):
        if s <= 0.0:
            name = feature_names[j] if feature_names else f"column {j}"
            raise FitError(f"constant feature: {name}")
    names = tuple(feature_names) if feature_names is not None else None
    return Normalizer(mean=mean, sd=sd, feature_names=names)


def zscore_apply(norm: Normalizer, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    return (X - norm.mean) / norm.sd


# ---------------------------------------------------------------------------
# dataset handling


def balanced_subsample_indices(labels: Sequence[int], seed: int) -> np.ndarray:
    """Row indices of a 50/50 subsample: the whole minority class plus an
    equally sized majority draw without replacement.  Sorted, so the output
    order is input order."""
    y = np.asarray(labels)
    ones = np.flatnonzero(y == 1)
    zeros = np.flatnonzero(y == 0)
    if len(ones) == 0 or len(zeros) == 0:
        raise InputDataError("balanced subsample needs both classes present")
    minority, majority = (ones, zeros) if len(ones) <= len(zeros) else (zeros, ones)
    rng = np.random.default_rng(seed)
    picked = rng.choice(majority, size=len(minority), replace=False)
    return np.sort(np.concatenate([minority, picked]))


def balanced_subsample(items: Sequence[T], seed: int,
                       label_fn: Callable[[T], int] = lambda it: it.label) -> list[T]:
    idx = balanced_subsample_indices([label_fn(it) for it in items], seed)
    return [items[i] for i in idx]


def split_indices(n: int, fractions: tuple[float, float, float] = (0.6, 0.2, 0.2),
                  seed: int = 0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Disjoint train/val/test index arrays from a seeded shuffle."""
    if len(fractions) != 3 or any(f <= 0 for f in fractions):
        raise InputDataError(f"need three positive fractions, got {fractions}")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise InputDataError(f"fractions sum to {sum(fractions)}, expected 1")
    if n < 5:
        raise InputDataError(f"dataset of {n} items is too small to split")
    perm = np.random.default_rng(seed).permutation(n)
    # rounded sizes, clamped so all three splits stay non-empty and disjoint
    n_train = min(max(1, int(round(fractions[0] * n))), n - 2)
    n_val = min(max(1, int(round(fractions[1] * n))), n - n_train - 1)
    return perm[:n_train], perm[n_train:n_train + n_val], perm[n_train + n_val:]


def split_dataset(items: Sequence[T], fractions=(0.6, 0.2, 0.2), seed: int = 0
                  ) -> tuple[list[T], list[T], list[T]]:
    tr, va, te = split_indices(len(items), fractions, seed)
    return [items[i] for i in tr], [items[i] for i in va], [items[i] for i in te]


# ---------------------------------------------------------------------------
# logistic regression (IRLS) + inference


def sigmoid(eta: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(eta, -500, 500)))


@dataclass(frozen=True)
class LogisticModel:
    feature_names: tuple[str, ...]
    intercept: float
    coef: np.ndarray
    l2: float
    converged: bool
    n_iter: int
    log_likelihood: float
    diagnostics: str = ""

    def linear(self, X: np.ndarray) -> np.ndarray:
        return self.intercept + np.asarray(X, dtype=np.float64) @ self.coef

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return sigmoid(self.linear(X))


def log_likelihood(beta: np.ndarray, X1: np.ndarray, y: np.ndarray) -> float:
    """Bernoulli log-likelihood at beta; X1 carries the intercept column."""
    eta = X1 @ beta
    # log(1 + exp(eta)) computed stably
    return float(y @ eta - np.logaddexp(0.0, eta).sum())


def penalized_loglik_and_grad(beta: np.ndarray, X1: np.ndarray, y: np.ndarray,
                              l2: float) -> tuple[float, np.ndarray]:
    """Objective maximized by fit_logistic, and its gradient.

    The penalty (l2/2)*||beta[1:]||^2 leaves the intercept free.
    """
    p = sigmoid(X1 @ beta)
    value = log_likelihood(beta, X1, y)
    grad = X1.T @ (y - p)
    if l2 > 0:
        value -= 0.5 * l2 * float(beta[1:] @ beta[1:])
        grad = grad.copy()
        grad[1:] -= l2 * beta[1:]
    return value, grad


def _with_intercept(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise InputDataError(f"design matrix must be 2-D, got shape {X.shape}")
    return np.column_stack([np.ones(X.shape[0]), X])


def fit_logistic(X: np.ndarray, y: np.ndarray, l2: float = 0.0,
                 tol: float = 1e-8, max_iter: int = 100,
                 feature_names: Sequence[str] | None = None) -> LogisticModel:
    """Maximize the (optionally ridge-penalized) logistic likelihood by IRLS.

    Newton steps with step-halving; converged when the gradient's infinity
    norm drops below ``tol``.  Perfect separation at l2=0 is reported as
    non-convergence with a diverging-norm diagnostic, never as an exception.
    """
    X1 = _with_intercept(X)
    y = np.asarray(y, dtype=np.float64)
    if not np.isfinite(X1).all():
        raise InputDataError("design matrix contains non-finite values")
    if set(np.unique(y)) - {0.0, 1.0}:
        raise InputDataError("labels must be 0/1")
    if l2 < 0:
        raise InputDataError(f"l2 must be non-negative, got {l2}")
    n, p1 = X1.shape
    beta = np.zeros(p1)
    value, grad = penalized_loglik_and_grad(beta, X1, y, l2)
    it = 0
    while it < max_iter and np.abs(grad).max() >= tol:
        prob = sigmoid(X1 @ beta)
        w = np.clip(prob * (1.0 - prob), 1e-12, None)
        H = (X1 * w[:, None]).T @ X1
        if l2 > 0:
            H[1:, 1:] += l2 * np.eye(p1 - 1)
        try:
            step = np.linalg.solve(H, grad)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(H, grad, rcond=None)[0]
        # step-halving keeps the objective monotone (up to float noise)
        slack = 1e-10 * (1.0 + abs(value))
        new_beta = beta + step
        new_value, new_grad = penalized_loglik_and_grad(new_beta, X1, y, l2)
        halvings = 0
        while new_value < value - slack and halvings < 30:
            step *= 0.5
            halvings += 1
            new_beta = beta + step
            new_value, new_grad = penalized_loglik_and_grad(new_beta, X1, y, l2)
        beta, value, grad = new_beta, new_value, new_grad
        it += 1
    converged = bool(np.abs(grad).max() < tol)

    diagnostics = ""
    norm = float(np.abs(beta).max())
    if l2 == 0.0 and norm > _DIVERGENCE_NORM:
        converged = False
        diagnostics = (f"coefficient norm diverging (max |beta| = {norm:.1f} after "
                       f"{it} iterations); data may be perfectly separated")
    elif not converged:
        diagnostics = (f"gradient norm {np.abs(grad).max():.2e} above tol after "
                       f"{max_iter} iterations")
    names = tuple(feature_names) if feature_names is not None else tuple(
        f"x{j}" for j in range(p1 - 1))
    if len(names) != p1 - 1:
        raise InputDataError(f"{len(names)} feature names for {p1 - 1} columns")
    return LogisticModel(
        feature_names=names,
        intercept=float(beta[0]),
        coef=beta[1:].copy(),
        l2=l2,
        converged=converged,
        n_iter=it,
        log_likelihood=log_likelihood(beta, X1, y),
        diagnostics=diagnostics,
    )


@dataclass(frozen=True)
class InferenceRow:
    name: str
    estimate: float
    std_error: float
    z_value: float
    p_value: float
    stars: str
    p_bonferroni: float


@dataclass(frozen=True)
class InferenceTable:
    rows: tuple[InferenceRow, ...]

    def by_name(self, name: str) -> InferenceRow:
        for row in self.rows:
            if row.name == name:
                return row
        raise KeyError(name)


def _collinear_names(X1: np.ndarray, names: Sequence[str]) -> list[str]:
    """Feature names loading on the null space of the information matrix."""
    _, s, vt = np.linalg.svd(X1, full_matrices=False)
    bad: set[str] = set()
    tol = s[0] * max(X1.shape) * np.finfo(float).eps * 1e3
    for k in range(len(s)):
        if s[k] <= tol:
            for j in np.flatnonzero(np.abs(vt[k]) > 0.3):
                bad.add(names[j])
    return sorted(bad)


def coefficient_inference(model: LogisticModel, X: np.ndarray, y: np.ndarray
                          ) -> InferenceTable:
    """Wald inference from the observed Fisher information at the optimum.

    Requires an unregularized, converged fit.  The Bonferroni column scales
    p-values by the number of non-intercept coefficients.
    """
    if model.l2 != 0.0:
        raise FitError("inference requires an unregularized fit (l2 = 0)")
    if not model.converged:
        raise FitError(f"inference requires a converged fit ({model.diagnostics})")
    X1 = _with_intercept(X)
    y = np.asarray(y, dtype=np.float64)
    beta = np.concatenate([[model.intercept], model.coef])
    prob = sigmoid(X1 @ beta)
    w = prob * (1.0 - prob)
    info = (X1 * w[:, None]).T @ X1
    names = ("(Intercept)",) + model.feature_names
    try:
        cov = np.linalg.inv(info)
    except np.linalg.LinAlgError:
        cov = None
    if cov is None or np.diag(cov).min() <= 0 or not np.isfinite(cov).all():
        collinear = _collinear_names(X1 * np.sqrt(w)[:, None], names)
        raise FitError(f"singular information matrix; collinear features: {collinear}")
    se = np.sqrt(np.diag(cov))
    z = beta / se
    p = 2.0 * stats.norm.sf(np.abs(z))
    m = len(model.feature_names)
    rows = tuple(
        InferenceRow(
            name=names[j],
            estimate=float(beta[j]),
            std_error=float(se[j]),
            z_value=float(z[j]),
            p_value=float(p[j]),
            stars=significance_stars(float(p[j])),
            p_bonferroni=float(min(1.0, p[j] * max(m, 1))),
        )
        for j in range(len(names))
    )
    return InferenceTable(rows=rows)


@dataclass(frozen=True)
class LRTResult:
    statistic: float
    dof: int
    p_value: float


def likelihood_ratio_test(full: LogisticModel, nested: LogisticModel,
                          X_full: np.ndarray, X_nested: np.ndarray,
                          y: np.ndarray) -> LRTResult:
    """Chi-squared test of a nested logistic model against the full one.

    Both models must be unregularized and fitted on the same rows; the
    nested feature set must be a subset of the full one.
    """
    if full.l2 != 0.0 or nested.l2 != 0.0:
        raise FitError("likelihood-ratio test requires l2 = 0 on both models")
    if not set(nested.feature_names) <= set(full.feature_names):
        extra = set(nested.feature_names) - set(full.feature_names)
        raise InputDataError(f"models are not nested; nested-only features: {sorted(extra)}")
    X_full = np.asarray(X_full, dtype=np.float64)
    X_nested = np.asarray(X_nested, dtype=np.float64)
    if X_full.shape[0] != X_nested.shape[0] or X_full.shape[0] != len(y):
        raise InputDataError("models were not evaluated on identical rows")
    y = np.asarray(y, dtype=np.float64)
    ll_full = log_likelihood(np.concatenate([[full.intercept], full.coef]),
                             _with_intercept(X_full), y)
    ll_nested = log_likelihood(np.concatenate([[nested.intercept], nested.coef]),
                               _with_intercept(X_nested), y)
    dof = len(full.feature_names) - len(nested.feature_names)
    statistic = max(0.0, 2.0 * (ll_full - ll_nested))
    p = float(stats.chi2.sf(statistic, dof)) if dof > 0 else 1.0
    return LRTResult(statistic=statistic, dof=dof, p_value=p)


# ---------------------------------------------------------------------------
# evaluation


@dataclass(frozen=True)
class EvalReport:
    n: int
    accuracy: float
    base_rate: float  # share of positive labels
    tp: int
    fp: int
    tn: int
    fn: int
    threshold: float = 0.5

    def as_dict(self) -> dict:
        return {
            "n": self.n, "accuracy": self.accuracy, "base_rate": self.base_rate,
            "tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn,
            "threshold": self.threshold,
        }


def evaluate(model, X: np.ndarray, y: np.ndarray, threshold: float = 0.5) -> EvalReport:
    """Accuracy and confusion counts at the given probability threshold."""
    y = np.asarray(y)
    if len(y) == 0:
        raise InputDataError("empty evaluation set")
    pred = (model.predict_proba(X) >= threshold).astype(int)
    tp = int(((pred == 1) & (y == 1)).sum())
    fp = int(((pred == 1) & (y == 0)).sum())
    tn = int(((pred == 0) & (y == 0)).sum())
    fn = int(((pred == 0) & (y == 1)).sum())
    return EvalReport(
        n=len(y),
        accuracy=(tp + tn) / len(y),
        base_rate=float(np.mean(y)),
        tp=tp, fp=fp, tn=tn, fn=fn,
        threshold=threshold,
    )


def marginal_effect(model, normalizer: Normalizer | None, X: np.ndarray,
                    feature: str | int, delta_sd: float = 1.0) -> float:
    """Average probability change from a +delta_sd shift of one feature.

    ``X`` holds raw evaluation rows when a normalizer is given (they are
    z-scored first), already-normalized rows otherwise.
    """
    Xn = np.asarray(X, dtype=np.float64)
    if normalizer is not None:
        Xn = zscore_apply(normalizer, Xn)
    if isinstance(feature, str):
        if feature not in model.feature_names:
            raise InputDataError(f"unknown feature {feature!r}")
        j = model.feature_names.index(feature)
    else:
        j = int(feature)
    shifted = Xn.copy()
    shifted[:, j] += delta_sd
    return float(np.mean(model.predict_proba(shifted) - model.predict_proba(Xn)))


# ---------------------------------------------------------------------------
# feedforward baseline


ARCHITECTURES = ("NFEAT-10-10-1", "NFEAT-10-1", "NFEAT-100-10-1")


def _parse_architecture(architecture: str) -> list[int]:
    parts = architecture.upper().split("-")
    if len(parts) < 2 or parts[0] != "NFEAT" or parts[-1] != "1":
        raise InputDataError(
            f"architecture {architecture!r} not of the form NFEAT-...-1")
    try:
        hidden = [int(p) for p in parts[1:-1]]
    except ValueError:
        raise InputDataError(f"bad layer width in {architecture!r}")
    if any(h <= 0 for h in hidden):
        raise InputDataError(f"non-positive layer width in {architecture!r}")
    return hidden


@dataclass
class MLPModel:
    architecture: str
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    seed: int

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        a = np.asarray(X, dtype=np.float64)
        for W, b in zip(self.weights[:-1], self.biases[:-1]):
            a = np.maximum(a @ W + b, 0.0)
        return sigmoid(a @ self.weights[-1] + self.biases[-1]).ravel()


def _mlp_init(n_features: int, hidden: list[int], seed: int, init: str
              ) -> tuple[list[np.ndarray], list[np.ndarray]]:
    rng = np.random.default_rng(seed)
    sizes = [n_features] + hidden + [1]
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes, sizes[1:]):
        if init == "zeros":
            weights.append(np.zeros((fan_in, fan_out)))
        else:
            weights.append(rng.normal(0.0, math.sqrt(2.0 / fan_in), (fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return weights, biases


def mlp_loss_and_grads(weights: list[np.ndarray], biases: list[np.ndarray],
                       X: np.ndarray, y: np.ndarray
                       ) -> tuple[float, list[np.ndarray], list[np.ndarray]]:
    """Mean binary cross-entropy on a batch plus gradients for every parameter."""
    acts = [np.asarray(X, dtype=np.float64)]
    for W, b in zip(weights[:-1], biases[:-1]):
        acts.append(np.maximum(acts[-1] @ W + b, 0.0))
    eta = (acts[-1] @ weights[-1] + biases[-1]).ravel()
    p = sigmoid(eta)
    eps = 1e-12
    loss = float(-np.mean(y * np.log(p + eps) + (1 - y) * np.log(1 - p + eps)))
    m = len(y)
    delta = ((p - y) / m)[:, None]
    grads_w: list[np.ndarray] = [None] * len(weights)
    grads_b: list[np.ndarray] = [None] * len(biases)
    grads_w[-1] = acts[-1].T @ delta
    grads_b[-1] = delta.sum(axis=0)
    back = delta @ weights[-1].T
    for layer in range(len(weights) - 2, -1, -1):
        back = back * (acts[layer + 1] > 0)
        grads_w[layer] = acts[layer].T @ back
        grads_b[layer] = back.sum(axis=0)
        if layer > 0:
            back = back @ weights[layer].T
    return loss, grads_w, grads_b


def fit_mlp(X: np.ndarray, y: np.ndarray, architecture: str = "NFEAT-10-10-1",
            seed: int = 0, epochs: int = 200, lr: float = 1e-3,
            batch_size: int = 256, X_val: np.ndarray | None = None,
            y_val: np.ndarray | None = None, patience: int = 20,
            init: str = "he") -> tuple[MLPModel, EvalReport]:
    """Mini-batch gradient descent on binary cross-entropy, ReLU hiddens.

    Early-stops on validation accuracy when a validation set is given
    (best-so-far weights are restored).  Deterministic given the seed.
    Returns the model plus its evaluation on the validation set (or the
    training set when no validation data was provided).
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    hidden = _parse_architecture(architecture)
    weights, biases = _mlp_init(X.shape[1], hidden, seed, init)
    model = MLPModel(architecture=architecture, weights=weights, biases=biases, seed=seed)
    rng = np.random.default_rng(seed + 1)
    use_val = X_val is not None and y_val is not None
    best_acc = -1.0
    best_params = None
    stale = 0
    for epoch in range(epochs):
        order = rng.permutation(len(y))
        for start in range(0, len(y), batch_size):
            idx = order[start:start + batch_size]
            loss, gw, gb = mlp_loss_and_grads(weights, biases, X[idx], y[idx])
            if math.isnan(loss):
                raise FitError(
                    f"NaN loss at epoch {epoch}, batch {start // batch_size} "
                    f"(architecture {architecture}, lr {lr})")
            for layer in range(len(weights)):
                weights[layer] -= lr * gw[layer]
                biases[layer] -= lr * gb[layer]
        if use_val:
            acc = evaluate(model, X_val, y_val).accuracy
            if acc > best_acc:
                best_acc = acc
                best_params = ([W.copy() for W in weights], [b.copy() for b in biases])
                stale = 0
            else:
                stale += 1
                if stale >= patience:
                    break
    if use_val and best_params is not None:
        model.weights, model.biases = best_params
    report = evaluate(model, X_val, y_val) if use_val else evaluate(model, X, y)
    return model, report


# ---------------------------------------------------------------------------
# auxiliary regression


def fit_aux_length_regression(X: np.ndarray, lengths: np.ndarray) -> float:
    """In-sample R^2 of OLS predicting game length from the other features.

    Rank-deficient designs fall back to the pseudo-inverse solution with a
    warning rather than failing.
    """
    X1 = _with_intercept(X)
    y = np.asarray(lengths, dtype=np.float64)
    if X1.shape[0] < 2:
        raise InputDataError("need at least 2 rows")
    coef, _, rank, _ = np.linalg.lstsq(X1, y, rcond=None)
    if rank < X1.shape[1]:
        logger.warning("length regression design is rank-deficient (%d < %d); "
                       "using pseudo-inverse solution", rank, X1.shape[1])
    resid = y - X1 @ coef
    sst = float(((y - y.mean()) ** 2).sum())
    if sst == 0.0:
        return 1.0 if float((resid ** 2).sum()) == 0.0 else 0.0
    return 1.0 - float((resid ** 2).sum()) / sst
