"""Synthetic corpus generator: games, labels, and every lexical resource.

The real Reddit corpus and the licensed lexical resources cannot ship with
the package, so this module fabricates a self-consistent stand-in: a random
five-letter vocabulary with embeddings, pronunciations, frequencies, symbol
probabilities, affect and humor norms; simulated games played by a
random-but-consistent player; and amusement labels drawn from a logistic
model over the games' true extracted features, with the signal scaled to a
chosen Bayes accuracy.  Everything is written through the package's own
file formats so the full pipeline can run on it unchanged.

Run ``python -m wordle_amuse.synth --out demo_data`` to build a demo corpus.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import string
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import lexres
from .engine import (EncodedUniverse, GameRecord, code_to_feedback,
                     encode_word, encode_words)
from .errors import FitError
from .funny import (CONSLE_SEED_WORDS, CATEGORY_NAMES, FunninessResources,
                    FunninessScorer, build_all_cdvs, fit_funniness,
                    load_category_seeds)
from .gamefeatures import (GAME_FEATURE_NAMES, FeatureRow,
                           extract_game_features)
from . import kernels
from .classify import sigmoid

logger = logging.getLogger(__name__)

LETTER_TO_PHONEME = {
    "a": "AA", "b": "B", "c": "K", "d": "D", "e": "EH", "f": "F", "g": "G",
    "h": "HH", "i": "IH", "j": "JH", "k": "K", "l": "L", "m": "M", "n": "N",
    "o": "OW", "p": "P", "q": "K", "r": "R", "s": "S", "t": "T", "u": "UW",
    "v": "V", "w": "W", "x": "Z", "y": "Y", "z": "Z",
}

# plausible effect directions used to draw synthetic amusement labels
LABEL_WEIGHTS = {
    "num_possible_guesses_reduction_max": 0.2,
    "num_possible_guesses_reduction_mean": 0.6,
    "num_possible_guesses_reduction_last": 0.5,
    "levenshtein_distance_max": -0.2,
    "levenshtein_distance_mean": -0.9,
    "levenshtein_distance_last": 0.7,
    "glove_distance_max": 0.0,
    "glove_distance_mean": 0.1,
    "glove_distance_last": 0.0,
    "intrinsic_humor_of_words_max": 0.1,
    "intrinsic_humor_of_words_mean": 0.8,
    "intrinsic_humor_of_words_last": 0.1,
    "num_possible_guesses_length": -0.8,
}


def random_words(n: int, rng: np.random.Generator, length: int = 5) -> list[str]:
    """n distinct random lowercase words of the given length."""
    words: set[str] = set()
    letters = np.array(list(string.ascii_lowercase))
    while len(words) < n:
        batch = rng.choice(letters, size=(n, length))
        words.update("".join(row) for row in batch)
    return sorted(words)[:n]


def _write_embeddings(path: Path, vocab: list[str], dim: int,
                      rng: np.random.Generator) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for word in vocab:
            vec = rng.normal(0.0, 1.0, dim) / np.sqrt(dim)
            fh.write(word + " " + " ".join(f"{v:.6f}" for v in vec) + "\n")


def _write_symbol_probs(path: Path, symbols: list[str],
                        rng: np.random.Generator) -> None:
    raw = rng.uniform(0.5, 2.0, len(symbols))
    probs = raw / raw.sum()
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["symbol", "probability"])
        for sym, p in zip(symbols, probs):
            writer.writerow([sym, f"{p:.10f}"])


@dataclass
class CorpusPaths:
    root: Path
    answers: Path
    glove: Path
    cdv_embeddings: Path
    pronunciations: Path
    frequencies: Path
    letter_probabilities: Path
    phoneme_probabilities: Path
    affect_norms: Path
    humor_norms: Path
    category_seeds: Path
    games: Path
    labels: Path
    annotations: Path
    config: Path


def write_resources(out_dir, vocab: list[str], rng: np.random.Generator,
                    dim: int = 16, glove_oov_fraction: float = 0.0) -> CorpusPaths:
    """Write every lexical resource for ``vocab`` into ``out_dir``."""
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)
    paths = CorpusPaths(
        root=root,
        answers=root / "answers.txt",
        glove=root / "glove_embeddings.txt",
        cdv_embeddings=root / "cdv_embeddings.txt",
        pronunciations=root / "pronunciations.dict",
        frequencies=root / "frequencies.csv",
        letter_probabilities=root / "letter_probabilities.csv",
        phoneme_probabilities=root / "phoneme_probabilities.csv",
        affect_norms=root / "affect_norms.csv",
        humor_norms=root / "humor_norms.csv",
        category_seeds=root / "category_seeds.csv",
        games=root / "games.jsonl",
        labels=root / "labels.csv",
        annotations=root / "annotations.csv",
        config=root / "wordle-amuse.conf",
    )

    paths.answers.write_text("\n".join(vocab) + "\n", encoding="utf-8")

    glove_vocab = list(vocab)
    if glove_oov_fraction > 0:
        keep = rng.random(len(glove_vocab)) >= glove_oov_fraction
        glove_vocab = [w for w, k in zip(glove_vocab, keep) if k]
    _write_embeddings(paths.glove, glove_vocab, dim, rng)
    _write_embeddings(paths.cdv_embeddings, vocab + list(CONSLE_SEED_WORDS), dim, rng)

    with open(paths.pronunciations, "w", encoding="utf-8") as fh:
        fh.write(";;; synthetic letter-to-phoneme pronunciations\n")
        for word in vocab:
            fh.write(word.upper() + "  " +
                     " ".join(LETTER_TO_PHONEME[c] for c in word) + "\n")

    counts = (1_000_000 / np.arange(1, len(vocab) + 1) ** 0.9).astype(int) + 1
    order = rng.permutation(len(vocab))
    with open(paths.frequencies, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["word", "count"])
        for idx, word in zip(order, vocab):
            writer.writerow([word, int(counts[idx])])

    _write_symbol_probs(paths.letter_probabilities, list(string.ascii_lowercase), rng)
    _write_symbol_probs(paths.phoneme_probabilities,
                        sorted(set(LETTER_TO_PHONEME.values())), rng)

    with open(paths.affect_norms, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["word", "valence", "arousal", "dominance", "concreteness"])
        for word in vocab:
            vals = rng.normal(5.0, 1.5, 4)
            writer.writerow([word] + [f"{v:.4f}" for v in vals])

    with open(paths.category_seeds, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["category", "word"])
        pool = rng.permutation(vocab)
        for ci, cat in enumerate(CATEGORY_NAMES):
            for word in pool[ci * 19:(ci + 1) * 19]:
                writer.writerow([cat, word])

    return paths


def write_humor_norms(paths: CorpusPaths, rng: np.random.Generator,
                      signal_scale: float = 8.0, noise_sd: float = 6.0) -> None:
    """Humor ratings with a planted linear signal over the 19 word features."""
    res = load_resources(paths)
    ratings: dict[str, float] = {}
    vocab = sorted(w.strip() for w in
                   paths.answers.read_text(encoding="utf-8").split())
    from .funny import FEATURE_NAMES, Unavailable, word_features

    rows = []
    words = []
    for word in vocab:
        feats = word_features(word, res)
        if isinstance(feats, Unavailable):
            continue
        words.append(word)
        rows.append(feats.values)
    X = np.stack(rows)
    Z = _safe_zscore(X)
    w_true = rng.normal(0.0, 1.0, len(FEATURE_NAMES))
    w_true /= np.linalg.norm(w_true)
    signal = Z @ w_true * signal_scale
    noise = rng.normal(0.0, noise_sd, len(words))
    for word, s, e in zip(words, signal, noise):
        ratings[word] = float(np.clip(60.0 + s + e, lexres.HUMOR_RATING_MIN,
                                      lexres.HUMOR_RATING_MAX))
    with open(paths.humor_norms, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["word", "rating"])
        for word in words:
            writer.writerow([word, f"{ratings[word]:.4f}"])


def load_resources(paths: CorpusPaths) -> FunninessResources:
    """Load the written resources back through the package loaders."""
    cdv_emb = lexres.load_embeddings(paths.cdv_embeddings)
    seeds = load_category_seeds(paths.category_seeds)
    if paths.humor_norms.is_file():
        search_vocab = sorted(lexres.load_humor_norms(paths.humor_norms).entries)
    else:
        search_vocab = sorted(w.strip() for w in
                              paths.answers.read_text(encoding="utf-8").split())
    cdvs = build_all_cdvs(seeds, cdv_emb, search_vocab, k=100)
    return FunninessResources(
        embeddings=cdv_emb,
        cdvs=cdvs,
        pronunciations=lexres.load_pronunciations(paths.pronunciations),
        frequencies=lexres.load_frequencies(paths.frequencies),
        letter_probabilities=lexres.load_symbol_probabilities(
            paths.letter_probabilities, "letter"),
        phoneme_probabilities=lexres.load_symbol_probabilities(
            paths.phoneme_probabilities, "phoneme"),
        affect=lexres.load_affect_norms(paths.affect_norms),
    )


def _safe_zscore(X: np.ndarray) -> np.ndarray:
    mean = X.mean(axis=0)
    sd = X.std(axis=0)
    sd[sd == 0.0] = 1.0
    return (X - mean) / sd


# ---------------------------------------------------------------------------
# game simulation


def simulate_game(answer: str, words: list[str], matrix: np.ndarray,
                  rng: np.random.Generator, max_plies: int = 6) -> GameRecord:
    """A player that guesses uniformly among the still-consistent answers."""
    answer_codes = encode_word(answer)
    live = np.arange(len(words))
    guesses: list[str] = []
    feedbacks: list[str] = []
    solved = False
    sub = matrix
    for _ in range(max_plies):
        pick = int(rng.integers(len(live)))
        guess = words[live[pick]]
        code = int(kernels.feedback_code(encode_word(guess), answer_codes))
        guesses.append(guess)
        feedbacks.append(code_to_feedback(code))
        if guess == answer:
            solved = True
            break
        codes = kernels.feedback_codes(encode_word(guess), sub)
        keep = codes == code
        live = live[keep]
        sub = sub[keep]
    return GameRecord(
        feedbacks=tuple(feedbacks),
        guesses=tuple(guesses),
        answer=answer,
        solved=solved,
    )


def simulate_games(n_games: int, vocab: list[str], seed: int) -> list[GameRecord]:
    rng = np.random.default_rng(seed)
    words = sorted(vocab)
    matrix = encode_words(words)
    out = []
    for _ in range(n_games):
        answer = words[int(rng.integers(len(words)))]
        out.append(simulate_game(answer, words, matrix, rng))
    return out


# ---------------------------------------------------------------------------
# label assignment


@dataclass
class LabelAssignment:
    labels: np.ndarray        # 0/1 per game
    utilities: np.ndarray     # linear predictor per game
    scale: float              # applied to the unit weight vector
    bayes_accuracy: float     # E[max(p, 1-p)] over the corpus


def assign_labels(X: np.ndarray, seed: int, target_bayes: float = 0.55,
                  weights: dict[str, float] | None = None) -> LabelAssignment:
    """Draw labels from a logistic model over the extracted features, with
    the coefficient scale chosen by bisection to hit ``target_bayes``."""
    if not 0.5 < target_bayes < 1.0:
        raise FitError(f"target Bayes accuracy must be in (0.5, 1), got {target_bayes}")
    weights = weights or LABEL_WEIGHTS
    w = np.array([weights[name] for name in GAME_FEATURE_NAMES])
    w = w / np.linalg.norm(w)
    s = _safe_zscore(X) @ w

    def bayes(scale: float) -> float:
        p = sigmoid(scale * s)
        return float(np.mean(np.maximum(p, 1.0 - p)))

    lo, hi = 0.0, 1.0
    while bayes(hi) < target_bayes:
        hi *= 2.0
        if hi > 1e4:
            raise FitError("cannot reach the target Bayes accuracy; "
                           "features may be degenerate")
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if bayes(mid) < target_bayes:
            lo = mid
        else:
            hi = mid
    scale = 0.5 * (lo + hi)
    u = scale * s
    p = sigmoid(u)
    rng = np.random.default_rng(seed)
    labels = (rng.random(len(p)) < p).astype(int)
    return LabelAssignment(labels=labels, utilities=u, scale=scale,
                           bayes_accuracy=bayes(scale))


# ---------------------------------------------------------------------------
# whole-corpus assembly


def write_annotations(path: Path, rng: np.random.Generator, n_items: int = 100,
                      n_raters: int = 5) -> None:
    """A small rater table (1-5 scale plus a binary machine column) whose
    raters share a latent signal, for agreement demos."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["item_id"] + [f"rater{i + 1}" for i in range(n_raters)]
                        + ["machine"])
        for item in range(n_items):
            latent = rng.normal(3.0, 1.2)
            row = [f"item{item + 1:04d}"]
            for _ in range(n_raters):
                if rng.random() < 0.05:
                    row.append("")  # missing annotation
                else:
                    row.append(str(int(np.clip(round(latent + rng.normal(0, 0.9)), 1, 5))))
            row.append(str(int(latent + rng.normal(0, 1.2) > 3.0)))
            writer.writerow(row)


def build_corpus(out_dir, n_games: int = 2000, n_words: int = 600,
                 dim: int = 16, seed: int = 0, target_bayes: float = 0.55,
                 glove_oov_fraction: float = 0.0,
                 include_per_guess: bool = False) -> CorpusPaths:
    """Generate a complete corpus directory: resources, games, labels, config.

    Labels come from a logistic model over each game's true extracted
    features, so the training pipeline has a known signal to recover.
    """
    rng = np.random.default_rng(seed)
    vocab = random_words(n_words, rng)
    paths = write_resources(out_dir, vocab, rng, dim=dim,
                            glove_oov_fraction=glove_oov_fraction)
    write_humor_norms(paths, rng)

    res = load_resources(paths)
    humor = lexres.load_humor_norms(paths.humor_norms)
    fun_model = fit_funniness(humor, res, folds=5, seed=seed)
    scorer = FunninessScorer(fun_model, res)
    glove = lexres.load_embeddings(paths.glove)

    records = simulate_games(n_games, vocab, seed + 1)
    universe = EncodedUniverse(vocab)
    feature_rows = []
    for i, record in enumerate(records):
        feats = extract_game_features(record, universe, glove, scorer,
                                      include_per_guess=include_per_guess)
        feature_rows.append(FeatureRow(game_id=f"g{i + 1:06d}", label=0,
                                       features=feats))
    X = np.stack([row.features.values for row in feature_rows])
    assignment = assign_labels(X, seed + 2, target_bayes=target_bayes)
    logger.info("synthetic corpus: %d games, Bayes accuracy %.4f at scale %.3f",
                n_games, assignment.bayes_accuracy, assignment.scale)

    with open(paths.games, "w", encoding="utf-8") as fh:
        for i, record in enumerate(records):
            gid = f"g{i + 1:06d}"
            obj = {
                "game_id": gid,
                "comment_id": gid,
                "feedback": list(record.feedbacks),
                "guesses": list(record.guesses),
                "solved": record.solved,
            }
            fh.write(json.dumps(obj, sort_keys=True) + "\n")
    with open(paths.labels, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["comment_id", "label"])
        for i, label in enumerate(assignment.labels):
            writer.writerow([f"g{i + 1:06d}", int(label)])

    write_annotations(paths.annotations, rng)

    config_lines = [
        "# generated by wordle_amuse.synth",
        f"answers = {paths.answers.name}",
        f"glove_embeddings = {paths.glove.name}",
        f"cdv_embeddings = {paths.cdv_embeddings.name}",
        f"pronunciations = {paths.pronunciations.name}",
        f"frequencies = {paths.frequencies.name}",
        f"letter_probabilities = {paths.letter_probabilities.name}",
        f"phoneme_probabilities = {paths.phoneme_probabilities.name}",
        f"affect_norms = {paths.affect_norms.name}",
        f"humor_norms = {paths.humor_norms.name}",
        f"category_seeds = {paths.category_seeds.name}",
        f"labels = {paths.labels.name}",
        f"seed = {seed}",
    ]
    paths.config.write_text("\n".join(config_lines) + "\n", encoding="utf-8")
    return paths


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="generate a synthetic demo corpus for wordle-amuse")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--games", type=int, default=2000)
    parser.add_argument("--words", type=int, default=600)
    parser.add_argument("--dim", type=int, default=16)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--target-bayes", type=float, default=0.55)
    parser.add_argument("--oov-fraction", type=float, default=0.0,
                        help="fraction of words to drop from the distance embeddings")
    parser.add_argument("--per-guess", action="store_true")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    paths = build_corpus(args.out, n_games=args.games, n_words=args.words,
                         dim=args.dim, seed=args.seed,
                         target_bayes=args.target_bayes,
                         glove_oov_fraction=args.oov_fraction,
                         include_per_guess=args.per_guess)
    print(f"corpus written to {paths.root}")
    print(f"config: {paths.config}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
