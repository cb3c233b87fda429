"""Intrinsic word-funniness model: category vectors, lexical features, ridge fit.

A word is described by 19 features: cosine distances to seven
category-defining vectors (six semantic categories plus the consonant+"le"
sound pattern), two spelling/sound booleans (contains the letter k, contains
the /u/ phoneme), log frequency, log average letter and phoneme
probabilities and their ratio, and six affect terms (valence, arousal,
concreteness and their products with dominance).  An L2-regularized linear
model maps those features to a humor-norm rating; the regularization
strength is chosen by k-fold cross-validation.

Category-defining vectors are built by averaging seed-word embeddings, then
averaging the embeddings of the k most cosine-similar words from a search
vocabulary.  The consonant+"le" vector skips the expansion step and is the
plain mean of its eight fixed seed words.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from importlib import resources as importlib_resources
from pathlib import Path
from typing import Sequence

import numpy as np

from .classify import Normalizer, zscore_apply, zscore_fit
from .errors import FitError, InputDataError
from .lexres import (AffectNorms, EmbeddingTable, FrequencyTable, HumorNorms,
                     PronunciationTable, SymbolProbabilityTable)

logger = logging.getLogger(__name__)

CATEGORY_NAMES = ("sex", "party", "insult", "profanity", "bodyfunction", "animals")

# The consonant+"le" category is defined by exactly these eight words.
CONSLE_SEED_WORDS = ("gaggle", "jiggle", "tinkle", "waddle", "wiggle",
                     "wriggle", "gobble", "nibble")

FEATURE_NAMES = (
    "cdv_sex", "cdv_party", "cdv_insult", "cdv_profanity", "cdv_bodyfunction",
    "cdv_animals", "has_letter_k", "log_frequency", "log_avg_letter_prob",
    "log_avg_phoneme_prob", "letter_phoneme_ratio", "has_phoneme_u",
    "cdv_consle", "valence_x_arousal", "valence_x_arousal_x_dominance",
    "arousal_x_dominance", "valence", "arousal", "concreteness",
)

DEFAULT_LAMBDA_GRID = tuple(np.logspace(-4, 4, 10))
DEFAULT_U_PHONEME = "UW"  # ARPAbet rendering of /u/


# ---------------------------------------------------------------------------
# category-defining vectors


@dataclass(frozen=True)
class CategorySeeds:
    category: str
    words: tuple[str, ...]

    def __post_init__(self):
        if not self.category or not self.words:
            raise InputDataError("category seeds need a name and at least one word")


@dataclass(frozen=True)
class CDV:
    category: str
    vector: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=np.float64)
        if not np.isfinite(v).all() or float(np.linalg.norm(v)) == 0.0:
            raise InputDataError(f"CDV {self.category!r} is degenerate")


def load_category_seeds(path=None) -> dict[str, CategorySeeds]:
    """CSV "category,word" rows; defaults to the packaged seed lists."""
    if path is None:
        text = (importlib_resources.files("wordle_amuse") / "data" /
                "category_seeds.csv").read_text(encoding="utf-8")
        lines = text.splitlines()
        label = "packaged category seeds"
    else:
        p = Path(path)
        if not p.is_file():
            raise InputDataError(f"file not found: {p}")
        lines = p.read_text(encoding="utf-8").splitlines()
        label = str(p)
    reader = csv.DictReader(lines)
    if reader.fieldnames is None or not {"category", "word"} <= set(reader.fieldnames):
        raise InputDataError(f"{label}: expected header category,word")
    grouped: dict[str, list[str]] = {}
    for i, row in enumerate(reader, start=2):
        cat = (row["category"] or "").strip().lower()
        word = (row["word"] or "").strip().lower()
        if not cat or not word:
            raise InputDataError(f"{label}:{i}: empty category or word")
        grouped.setdefault(cat, []).append(word)
    return {cat: CategorySeeds(cat, tuple(words)) for cat, words in grouped.items()}


def _resolve_seeds(seeds: CategorySeeds, emb: EmbeddingTable) -> list[str]:
    """Seed words present in the embedding table; at least half must resolve."""
    resolved = [w for w in seeds.words if w in emb]
    missing = [w for w in seeds.words if w not in emb]
    if missing:
        logger.warning("category %r: %d seed(s) missing from embeddings: %s",
                       seeds.category, len(missing), ", ".join(missing))
    if 2 * len(resolved) < len(seeds.words):
        raise InputDataError(
            f"category {seeds.category!r}: only {len(resolved)} of "
            f"{len(seeds.words)} seeds found in the embedding table")
    return resolved


def cosine_similarity(u: np.ndarray, v: np.ndarray) -> float:
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise InputDataError("cosine of a zero vector")
    return float(u @ v) / (nu * nv)


def build_cdv(seeds: CategorySeeds, emb: EmbeddingTable,
              search_vocab: Sequence[str], k: int = 100) -> CDV:
    """Seed mean -> rank the search vocabulary by cosine similarity ->
    average the embeddings of the top k words.

    Ties in similarity break lexicographically so the result does not depend
    on vocabulary order.
    """
    resolved = _resolve_seeds(seeds, emb)
    seed_mean = np.mean([emb.vector(w) for w in resolved], axis=0)
    vocab = sorted({w for w in search_vocab if w in emb})
    if len(vocab) < k:
        raise InputDataError(
            f"category {seeds.category!r}: search vocabulary has only "
            f"{len(vocab)} embedded words, need at least k={k}")
    matrix = np.stack([emb.vector(w) for w in vocab])
    norms = np.linalg.norm(matrix, axis=1)
    degenerate = norms == 0.0
    norms[degenerate] = 1.0
    sims = (matrix @ seed_mean) / (norms * np.linalg.norm(seed_mean))
    sims[degenerate] = -np.inf  # zero vectors rank last
    order = sorted(range(len(vocab)), key=lambda i: (-sims[i], vocab[i]))
    top = order[:k]
    return CDV(category=seeds.category, vector=matrix[top].mean(axis=0))


def build_consle_cdv(emb: EmbeddingTable) -> CDV:
    """Plain mean embedding of the eight consonant+"le" words (no expansion)."""
    resolved = [w for w in CONSLE_SEED_WORDS if w in emb]
    missing = [w for w in CONSLE_SEED_WORDS if w not in emb]
    if len(resolved) < 4:
        raise InputDataError(
            f"only {len(resolved)} of the 8 consonant+'le' words have embeddings; "
            f"missing: {', '.join(missing)}")
    if missing:
        logger.warning("consonant+'le' CDV built from %d words; missing: %s",
                       len(resolved), ", ".join(missing))
    return CDV(category="consle", vector=np.mean([emb.vector(w) for w in resolved], axis=0))


def build_all_cdvs(seed_map: dict[str, CategorySeeds], emb: EmbeddingTable,
                   search_vocab: Sequence[str], k: int = 100) -> dict[str, CDV]:
    """The six semantic-category CDVs plus the consonant+"le" one."""
    missing = [c for c in CATEGORY_NAMES if c not in seed_map]
    if missing:
        raise InputDataError(f"seed file lacks categories: {missing}")
    cdvs = {name: build_cdv(seed_map[name], emb, search_vocab, k)
            for name in CATEGORY_NAMES}
    cdvs["consle"] = build_consle_cdv(emb)
    return cdvs


# ---------------------------------------------------------------------------
# word features


@dataclass(frozen=True)
class FunninessResources:
    """Everything word_features needs, bundled so call sites stay sane."""

    embeddings: EmbeddingTable
    cdvs: dict[str, CDV]
    pronunciations: PronunciationTable
    frequencies: FrequencyTable
    letter_probabilities: SymbolProbabilityTable
    phoneme_probabilities: SymbolProbabilityTable
    affect: AffectNorms
    prob_mode: str = "mean_of_logs"  # or "log_of_means"
    u_phoneme: str = DEFAULT_U_PHONEME

    def __post_init__(self):
        if self.prob_mode not in ("mean_of_logs", "log_of_means"):
            raise InputDataError(f"unknown prob_mode {self.prob_mode!r}")
        needed = set(CATEGORY_NAMES) | {"consle"}
        if set(self.cdvs) != needed:
            raise InputDataError(f"expected CDVs {sorted(needed)}, got {sorted(self.cdvs)}")


@dataclass(frozen=True)
class Unavailable:
    """A word that cannot be featurized, with the resources it is missing."""

    word: str
    reasons: tuple[str, ...]


@dataclass(frozen=True)
class WordFeatureVector:
    word: str
    values: np.ndarray  # aligned with FEATURE_NAMES

    def value(self, name: str) -> float:
        return float(self.values[FEATURE_NAMES.index(name)])


def _avg_log_prob(symbols: Sequence[str], table: SymbolProbabilityTable,
                  mode: str) -> float | None:
    probs = [table.probability(s) for s in symbols]
    if any(p is None for p in probs):
        return None
    if mode == "log_of_means":
        return math.log(sum(probs) / len(probs))
    return sum(math.log(p) for p in probs) / len(probs)


def word_features(word: str, res: FunninessResources) -> WordFeatureVector | Unavailable:
    """The 19-feature description of one word, or Unavailable with reasons.

    Missing resources are collected rather than raised so callers can decide
    between skipping and imputing.
    """
    word = word.lower()
    reasons: list[str] = []

    vec = res.embeddings.vector(word)
    if vec is None or float(np.linalg.norm(vec)) == 0.0:
        reasons.append("embedding")
    freq_p = res.frequencies.probability(word)
    if freq_p is None:
        reasons.append("frequency")
    letter_lp = _avg_log_prob(list(word), res.letter_probabilities, res.prob_mode)
    if letter_lp is None:
        reasons.append("letter_probability")
    phonemes = res.pronunciations.phonemes(word)
    phoneme_lp = None
    if phonemes is None:
        reasons.append("pronunciation")
    else:
        phoneme_lp = _avg_log_prob(phonemes, res.phoneme_probabilities, res.prob_mode)
        if phoneme_lp is None:
            reasons.append("phoneme_probability")
        elif phoneme_lp == 0.0:
            reasons.append("phoneme_probability")  # degenerate all-ones table
    affect = res.affect.affect(word)
    if affect is None:
        reasons.append("affect_norms")
    if reasons:
        return Unavailable(word=word, reasons=tuple(reasons))

    values = np.empty(len(FEATURE_NAMES))
    for i, cat in enumerate(CATEGORY_NAMES):
        values[i] = 1.0 - cosine_similarity(vec, res.cdvs[cat].vector)
    values[6] = 1.0 if "k" in word else 0.0
    values[7] = math.log(freq_p)
    values[8] = letter_lp
    values[9] = phoneme_lp
    values[10] = letter_lp / phoneme_lp
    values[11] = 1.0 if res.u_phoneme in phonemes else 0.0
    values[12] = 1.0 - cosine_similarity(vec, res.cdvs["consle"].vector)
    values[13] = affect.valence * affect.arousal
    values[14] = affect.valence * affect.arousal * affect.dominance
    values[15] = affect.arousal * affect.dominance
    values[16] = affect.valence
    values[17] = affect.arousal
    values[18] = affect.concreteness
    return WordFeatureVector(word=word, values=values)


# ---------------------------------------------------------------------------
# ridge regression


def ridge_fit(X: np.ndarray, y: np.ndarray, lam: float,
              fit_intercept: bool = True) -> tuple[np.ndarray, float]:
    """Exact ridge solution via the regularized normal equations.

    Minimizes ||y - Xw - b||^2 + lam*||w||^2 with the intercept b
    unpenalized (handled by centering).  Returns (weights, intercept).
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if lam < 0:
        raise InputDataError(f"ridge strength must be non-negative, got {lam}")
    if not fit_intercept:
        A = X.T @ X + lam * np.eye(X.shape[1])
        w = np.linalg.solve(A, X.T @ y)
        return w, 0.0
    x_mean = X.mean(axis=0)
    y_mean = float(y.mean())
    Xc = X - x_mean
    A = Xc.T @ Xc + lam * np.eye(X.shape[1])
    try:
        w = np.linalg.solve(A, Xc.T @ (y - y_mean))
    except np.linalg.LinAlgError:
        w = np.linalg.lstsq(A, Xc.T @ (y - y_mean), rcond=None)[0]
    return w, y_mean - float(x_mean @ w)


def _fold_assignments(n: int, folds: int, seed: int) -> np.ndarray:
    if folds < 2 or folds > n:
        raise InputDataError(f"folds must be in [2, {n}], got {folds}")
    perm = np.random.default_rng(seed).permutation(n)
    assignment = np.empty(n, dtype=int)
    assignment[perm] = np.arange(n) % folds
    return assignment


@dataclass(frozen=True)
class RidgeCVResult:
    best_lambda: float
    lambda_grid: tuple[float, ...]
    rmse_by_lambda: tuple[float, ...]   # pooled over held-out folds
    fold_rmse: tuple[float, ...]        # per fold, at best_lambda
    pooled_rmse: float
    pooled_r2: float
    fold_seed: int


def ridge_cv(X: np.ndarray, y: np.ndarray, lambda_grid: Sequence[float],
             folds: int = 10, seed: int = 0) -> RidgeCVResult:
    """Pick the ridge strength by pooled k-fold RMSE.

    Features are z-scored inside each training fold; held-out predictions
    are pooled across folds for the reported RMSE and R^2.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    grid = [float(l) for l in lambda_grid]
    if not grid:
        raise FitError("empty lambda grid")
    n = len(y)
    assignment = _fold_assignments(n, folds, seed)
    predictions = np.zeros((len(grid), n))
    for fold in range(folds):
        hold = assignment == fold
        norm = zscore_fit(X[~hold])
        X_tr = zscore_apply(norm, X[~hold])
        X_ho = zscore_apply(norm, X[hold])
        for gi, lam in enumerate(grid):
            w, b = ridge_fit(X_tr, y[~hold], lam)
            predictions[gi, hold] = X_ho @ w + b
    rmse_by_lambda = tuple(
        float(np.sqrt(np.mean((predictions[gi] - y) ** 2))) for gi in range(len(grid))
    )
    best_gi = int(np.argmin(rmse_by_lambda))
    best_pred = predictions[best_gi]
    fold_rmse = tuple(
        float(np.sqrt(np.mean((best_pred[assignment == f] - y[assignment == f]) ** 2)))
        for f in range(folds)
    )
    sst = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float(((best_pred - y) ** 2).sum()) / sst if sst > 0 else 0.0
    return RidgeCVResult(
        best_lambda=grid[best_gi],
        lambda_grid=tuple(grid),
        rmse_by_lambda=rmse_by_lambda,
        fold_rmse=fold_rmse,
        pooled_rmse=rmse_by_lambda[best_gi],
        pooled_r2=r2,
        fold_seed=seed,
    )


# ---------------------------------------------------------------------------
# the funniness model


@dataclass(frozen=True)
class FunninessModel:
    feature_names: tuple[str, ...]
    weights: np.ndarray            # on z-scored features
    intercept: float
    ridge_lambda: float
    normalizer: Normalizer
    cv_report: dict = field(compare=False)
    retained_words: tuple[str, ...] = ()

    def predict_from_features(self, values: np.ndarray) -> float:
        z = (values - self.normalizer.mean) / self.normalizer.sd
        return float(z @ self.weights + self.intercept)


def fit_funniness(humor: HumorNorms, res: FunninessResources,
                  lambda_grid: Sequence[float] = DEFAULT_LAMBDA_GRID,
                  folds: int = 10, seed: int = 0,
                  min_words: int = 100) -> FunninessModel:
    """Cross-validated ridge fit of humor ratings on the 19 word features.

    Words missing any resource are dropped and counted.  The final model is
    refit on all retained words at the selected regularization strength; the
    cv_report also carries a seeded 80/20 held-out evaluation since pooled-CV
    and single-split errors answer slightly different questions.
    """
    words: list[str] = []
    rows: list[np.ndarray] = []
    targets: list[float] = []
    drop_reasons: dict[str, int] = {}
    for word in humor.words():
        feats = word_features(word, res)
        if isinstance(feats, Unavailable):
            for r in feats.reasons:
                drop_reasons[r] = drop_reasons.get(r, 0) + 1
            continue
        words.append(word)
        rows.append(feats.values)
        targets.append(humor.rating(word))
    dropped = len(humor.entries) - len(words)
    if len(words) < min_words:
        raise FitError(
            f"only {len(words)} humor-norm words have complete features "
            f"(needed {min_words}); drop reasons: {drop_reasons}")
    X = np.stack(rows)
    y = np.asarray(targets)
    for j, sd in enumerate(X.std(axis=0)):
        if sd <= 0.0:
            raise FitError(f"constant feature: {FEATURE_NAMES[j]}")

    cv = ridge_cv(X, y, lambda_grid, folds=folds, seed=seed)

    # an extra single-split evaluation at the chosen strength
    n = len(y)
    perm = np.random.default_rng(seed + 1).permutation(n)
    cut = int(round(0.8 * n))
    tr, ho = perm[:cut], perm[cut:]
    norm_tr = zscore_fit(X[tr], FEATURE_NAMES)
    w_tr, b_tr = ridge_fit(zscore_apply(norm_tr, X[tr]), y[tr], cv.best_lambda)
    pred_ho = zscore_apply(norm_tr, X[ho]) @ w_tr + b_tr
    holdout_rmse = float(np.sqrt(np.mean((pred_ho - y[ho]) ** 2)))
    sst_ho = float(((y[ho] - y[ho].mean()) ** 2).sum())
    holdout_r2 = 1.0 - float(((pred_ho - y[ho]) ** 2).sum()) / sst_ho if sst_ho > 0 else 0.0

    normalizer = zscore_fit(X, FEATURE_NAMES)
    weights, intercept = ridge_fit(zscore_apply(normalizer, X), y, cv.best_lambda)
    cv_report = {
        "lambda_grid": list(cv.lambda_grid),
        "rmse_by_lambda": list(cv.rmse_by_lambda),
        "fold_rmse": list(cv.fold_rmse),
        "pooled_rmse": cv.pooled_rmse,
        "pooled_r2": cv.pooled_r2,
        "holdout_rmse": holdout_rmse,
        "holdout_r2": holdout_r2,
        "folds": folds,
        "fold_seed": seed,
        "retained": len(words),
        "dropped": dropped,
        "drop_reasons": dict(sorted(drop_reasons.items())),
    }
    logger.info("funniness fit: %d words retained, %d dropped, lambda=%g, "
                "CV RMSE=%.4f, R2=%.4f", len(words), dropped, cv.best_lambda,
                cv.pooled_rmse, cv.pooled_r2)
    return FunninessModel(
        feature_names=FEATURE_NAMES,
        weights=weights,
        intercept=intercept,
        ridge_lambda=cv.best_lambda,
        normalizer=normalizer,
        cv_report=cv_report,
        retained_words=tuple(words),
    )


def predict_funniness(model: FunninessModel, word: str,
                      res: FunninessResources) -> float | Unavailable:
    feats = word_features(word, res)
    if isinstance(feats, Unavailable):
        return feats
    return model.predict_from_features(feats.values)


def export_fit_plot_data(model: FunninessModel, humor: HumorNorms,
                         res: FunninessResources) -> list[tuple[str, float, float]]:
    """(word, actual, predicted) rows for every retained word, for plotting."""
    rows = []
    for word in model.retained_words:
        pred = predict_funniness(model, word, res)
        if isinstance(pred, Unavailable):  # resources changed since the fit
            raise FitError(f"word {word!r} was retained at fit time but is now "
                           f"missing: {pred.reasons}")
        rows.append((word, float(humor.rating(word)), pred))
    return rows


class FunninessScorer:
    """Memoizing word scorer used during game-feature extraction."""

    def __init__(self, model: FunninessModel, res: FunninessResources):
        self.model = model
        self.res = res
        self._cache: dict[str, float | None] = {}

    def score(self, word: str) -> float | None:
        word = word.lower()
        if word not in self._cache:
            pred = predict_funniness(self.model, word, self.res)
            self._cache[word] = None if isinstance(pred, Unavailable) else pred
        return self._cache[word]
