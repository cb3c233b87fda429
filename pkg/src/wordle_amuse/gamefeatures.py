"""Per-game feature vectors for the amusement classifier.

Four feature families over a game's guesses, each summarized as
max/mean/last, plus the game length:

* candidate-count reductions from the Wordle engine;
* Levenshtein distance between consecutive guesses;
* embedding-space distance between consecutive guesses (negative cosine
  similarity, the guess-distance convention; category features elsewhere
  use 1 - cosine);
* intrinsic funniness of each guess word.

One-guess games have no guess pairs: their distance features are zero with
``has_distance_pairs`` cleared.  Pairs touching out-of-vocabulary words are
excluded from max/mean; when the last pair is affected the last-distance
feature is zero and flagged.  Games where at least half the pairs are
unavailable are dropped from training (callers count them via
``training_eligible``).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import kernels
from .engine import GameRecord, candidate_trajectory, reduction_features
from .errors import InputDataError
from .funny import FunninessScorer
from .lexres import EmbeddingTable

GAME_FEATURE_NAMES = (
    "num_possible_guesses_reduction_max",
    "num_possible_guesses_reduction_mean",
    "num_possible_guesses_reduction_last",
    "levenshtein_distance_max",
    "levenshtein_distance_mean",
    "levenshtein_distance_last",
    "glove_distance_max",
    "glove_distance_mean",
    "glove_distance_last",
    "intrinsic_humor_of_words_max",
    "intrinsic_humor_of_words_mean",
    "intrinsic_humor_of_words_last",
    "num_possible_guesses_length",
)

FLAG_NAMES = (
    "has_distance_pairs",
    "glove_pairs_total",
    "glove_pairs_unavailable",
    "glove_last_available",
    "funny_words_total",
    "funny_words_unavailable",
    "funny_last_available",
)

MAX_PLIES = 6
PER_GUESS_NAMES = tuple(
    f"f{ply}_{kind}" for ply in range(1, MAX_PLIES + 1)
    for kind in ("reduction", "gdist", "fun")
)


def levenshtein(a: str, b: str) -> int:
    """Minimum single-character edits (insert/delete/substitute) from a to b."""
    return int(kernels.levenshtein(a, b))


def semantic_distance(a: str, b: str, emb: EmbeddingTable) -> float | None:
    """Negative cosine similarity of two words' embeddings; None when either
    word is missing or has a zero-norm (degenerate) vector."""
    va = emb.vector(a.lower())
    vb = emb.vector(b.lower())
    if va is None or vb is None:
        return None
    na = float(np.linalg.norm(va))
    nb = float(np.linalg.norm(vb))
    if na == 0.0 or nb == 0.0:
        return None
    return -float(va @ vb) / (na * nb)


@dataclass(frozen=True)
class GameFeatures:
    values: np.ndarray  # aligned with GAME_FEATURE_NAMES
    has_distance_pairs: bool
    glove_pairs_total: int
    glove_pairs_unavailable: int
    glove_last_available: bool
    funny_words_total: int
    funny_words_unavailable: int
    funny_last_available: bool
    per_guess: np.ndarray | None = None  # (6, 3): reduction, gdist, fun

    def value(self, name: str) -> float:
        return float(self.values[GAME_FEATURE_NAMES.index(name)])

    def flag_values(self) -> tuple:
        return (
            int(self.has_distance_pairs),
            self.glove_pairs_total,
            self.glove_pairs_unavailable,
            int(self.glove_last_available),
            self.funny_words_total,
            self.funny_words_unavailable,
            int(self.funny_last_available),
        )


def training_eligible(feats: GameFeatures) -> bool:
    """False when half or more of the guess pairs lack embedding distances."""
    if feats.glove_pairs_total == 0:
        return True
    return 2 * feats.glove_pairs_unavailable < feats.glove_pairs_total


def _family(values: Sequence[float | None]) -> tuple[float, float, float, int]:
    """(max, mean, last) over available entries; last falls back to 0 when the
    final entry is unavailable.  Returns the unavailable count as well."""
    present = [v for v in values if v is not None]
    missing = sum(1 for v in values if v is None)
    if not present:
        return 0.0, 0.0, 0.0, missing
    last = values[-1] if values[-1] is not None else 0.0
    return float(max(present)), float(sum(present) / len(present)), float(last), missing


def extract_game_features(game: GameRecord, universe, emb: EmbeddingTable,
                          scorer: FunninessScorer, *,
                          include_per_guess: bool = False,
                          solved_terminal_zero: bool = True) -> GameFeatures:
    """Assemble the 13 aggregate features (and optionally the padded 6x3
    per-guess matrix) for one game with typed guess words."""
    if game.guesses is None:
        raise InputDataError("game has no typed guess words")
    traj = candidate_trajectory(game, universe,
                                solved_terminal_zero=solved_terminal_zero)
    red = reduction_features(traj)
    guesses = game.guesses
    n = len(guesses)

    pairs = list(zip(guesses, guesses[1:]))
    has_pairs = bool(pairs)
    lev = [float(levenshtein(a, b)) for a, b in pairs]
    gdist = [semantic_distance(a, b, emb) for a, b in pairs]
    fun = [scorer.score(w) for w in guesses]

    if has_pairs:
        lev_max, lev_mean, lev_last = max(lev), sum(lev) / len(lev), lev[-1]
        g_max, g_mean, g_last, g_missing = _family(gdist)
        g_last_ok = gdist[-1] is not None
    else:
        lev_max = lev_mean = lev_last = 0.0
        g_max = g_mean = g_last = 0.0
        g_missing = 0
        g_last_ok = True
    f_max, f_mean, f_last, f_missing = _family(fun)
    f_last_ok = fun[-1] is not None

    values = np.array([
        red.reduction_max, red.reduction_mean, red.reduction_last,
        lev_max, lev_mean, lev_last,
        g_max, g_mean, g_last,
        f_max, f_mean, f_last,
        float(red.length),
    ])

    per_guess = None
    if include_per_guess:
        per_guess = np.zeros((MAX_PLIES, 3))
        reductions = traj.reductions
        for i in range(n):
            per_guess[i, 0] = reductions[i]
            if i > 0 and gdist[i - 1] is not None:
                per_guess[i, 1] = gdist[i - 1]
            if fun[i] is not None:
                per_guess[i, 2] = fun[i]

    return GameFeatures(
        values=values,
        has_distance_pairs=has_pairs,
        glove_pairs_total=len(pairs),
        glove_pairs_unavailable=g_missing,
        glove_last_available=g_last_ok,
        funny_words_total=n,
        funny_words_unavailable=f_missing,
        funny_last_available=f_last_ok,
        per_guess=per_guess,
    )


# ---------------------------------------------------------------------------
# features CSV


@dataclass(frozen=True)
class FeatureRow:
    game_id: str
    label: int
    features: GameFeatures


def features_header(include_per_guess: bool = False) -> list[str]:
    header = ["game_id", "label", *GAME_FEATURE_NAMES, *FLAG_NAMES]
    if include_per_guess:
        header += list(PER_GUESS_NAMES)
    return header


def write_features_csv(path, rows: Sequence[FeatureRow],
                       include_per_guess: bool = False) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(features_header(include_per_guess))
        for row in rows:
            cells = [row.game_id, row.label]
            cells += [repr(float(v)) for v in row.features.values]
            cells += list(row.features.flag_values())
            if include_per_guess:
                pg = row.features.per_guess
                if pg is None:
                    raise InputDataError(
                        f"game {row.game_id}: per-guess columns requested but "
                        "features were extracted without them")
                cells += [repr(float(v)) for v in pg.ravel()]
            writer.writerow(cells)


@dataclass(frozen=True)
class FeatureTable:
    game_ids: tuple[str, ...]
    labels: np.ndarray
    X: np.ndarray                 # (n, 13) aligned with GAME_FEATURE_NAMES
    flags: tuple[tuple, ...]      # aligned with FLAG_NAMES
    per_guess: np.ndarray | None  # (n, 18) or None

    def eligible_mask(self) -> np.ndarray:
        total = FLAG_NAMES.index("glove_pairs_total")
        unavail = FLAG_NAMES.index("glove_pairs_unavailable")
        return np.array([
            f[total] == 0 or 2 * f[unavail] < f[total] for f in self.flags
        ])


def read_features_csv(path) -> FeatureTable:
    """Read a features CSV back; the header must match the schema exactly."""
    p = Path(path)
    if not p.is_file():
        raise InputDataError(f"file not found: {p}")
    with open(p, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InputDataError(f"{p}: empty file")
        plain = features_header(False)
        with_pg = features_header(True)
        if header == plain:
            has_pg = False
        elif header == with_pg:
            has_pg = True
        else:
            expected = set(with_pg)
            got = set(header)
            raise InputDataError(
                f"{p}: header does not match the features schema; "
                f"missing {sorted(set(plain) - got)}, unexpected {sorted(got - expected)}")
        game_ids, labels, xs, flags, pgs = [], [], [], [], []
        n_feat = len(GAME_FEATURE_NAMES)
        n_flag = len(FLAG_NAMES)
        for i, cells in enumerate(reader, start=2):
            if not cells:
                continue
            if len(cells) != len(header):
                raise InputDataError(f"{p}:{i}: {len(cells)} cells, expected {len(header)}")
            game_ids.append(cells[0])
            if cells[1] not in ("0", "1"):
                raise InputDataError(f"{p}:{i}: label {cells[1]!r} is not 0 or 1")
            labels.append(int(cells[1]))
            try:
                xs.append([float(c) for c in cells[2:2 + n_feat]])
                flag_cells = tuple(int(c) for c in cells[2 + n_feat:2 + n_feat + n_flag])
                if has_pg:
                    pgs.append([float(c) for c in cells[2 + n_feat + n_flag:]])
            except ValueError as exc:
                raise InputDataError(f"{p}:{i}: non-numeric cell ({exc})")
            flags.append(flag_cells)
    if not game_ids:
        raise InputDataError(f"{p}: no feature rows")
    return FeatureTable(
        game_ids=tuple(game_ids),
        labels=np.array(labels),
        X=np.array(xs),
        flags=tuple(flags),
        per_guess=np.array(pgs) if has_pg else None,
    )
