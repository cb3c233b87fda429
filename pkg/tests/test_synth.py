"""Synthetic corpus generator invariants."""

import numpy as np

from wordle_amuse import synth
from wordle_amuse.engine import verify_transcript


def test_random_words_unique_and_valid(rng):
    words = synth.random_words(200, rng)
    assert len(set(words)) == 200
    assert all(len(w) == 5 and w.isalpha() and w.islower() for w in words)


def test_simulated_games_are_valid_transcripts(rng):
    vocab = synth.random_words(120, rng)
    records = synth.simulate_games(60, vocab, seed=4)
    assert len(records) == 60
    solved = 0
    for game in records:
        verify_transcript(game)  # raises on any inconsistency
        assert game.answer in vocab
        solved += game.solved
    assert solved > 50  # the consistent player almost always finishes


def test_assign_labels_hits_bayes_target(rng):
    X = rng.normal(size=(5000, 13)) * np.arange(1, 14)
    out = synth.assign_labels(X, seed=2, target_bayes=0.57)
    assert abs(out.bayes_accuracy - 0.57) < 1e-6
    assert set(np.unique(out.labels)) <= {0, 1}
    # utilities and labels line up: higher utility, more ones
    hi = out.labels[out.utilities > 0].mean()
    lo = out.labels[out.utilities < 0].mean()
    assert hi > lo


def test_build_corpus_files(small_corpus):
    paths = small_corpus
    for p in (paths.answers, paths.glove, paths.cdv_embeddings,
              paths.pronunciations, paths.frequencies,
              paths.letter_probabilities, paths.phoneme_probabilities,
              paths.affect_norms, paths.humor_norms, paths.category_seeds,
              paths.games, paths.labels, paths.annotations, paths.config):
        assert p.is_file(), p
    n_games = sum(1 for line in paths.games.read_text().splitlines() if line)
    n_labels = sum(1 for line in paths.labels.read_text().splitlines() if line) - 1
    assert n_games == n_labels == 1200
