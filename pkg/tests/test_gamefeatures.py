"""Per-game features: distances, family summaries, flags, CSV round-trip."""

import numpy as np
import pytest

from wordle_amuse import gamefeatures, lexres
from wordle_amuse.engine import GameRecord, compute_feedback
from wordle_amuse.errors import InputDataError
from wordle_amuse.gamefeatures import (FeatureRow, GAME_FEATURE_NAMES,
                                       extract_game_features, levenshtein,
                                       read_features_csv, semantic_distance,
                                       training_eligible, write_features_csv)


class FakeScorer:
    """Stands in for the funniness model: fixed per-word scores, None = OOV."""

    def __init__(self, scores):
        self.scores = scores

    def score(self, word):
        return self.scores.get(word)


def embedding_table(vectors):
    dim = len(next(iter(vectors.values())))
    return lexres.EmbeddingTable(
        dimension=dim,
        vectors={w: np.asarray(v, dtype=np.float64) for w, v in vectors.items()})


UNIVERSE = ("crane", "crate", "trace", "brace", "grace")


def solved_game(guesses, answer):
    feedbacks = tuple(compute_feedback(g, answer) for g in guesses)
    return GameRecord(feedbacks=feedbacks, guesses=tuple(guesses),
                      answer=answer, solved=True)


class TestLevenshtein:
    def test_examples(self):
        assert levenshtein("apple", "apple") == 0
        assert levenshtein("crane", "crate") == 1
        assert levenshtein("kitten", "sitting") == 3


class TestSemanticDistance:
    def test_identical_vectors(self):
        emb = embedding_table({"aa": [1.0, 2.0], "bb": [2.0, 4.0]})
        assert semantic_distance("aa", "bb", emb) == pytest.approx(-1.0)

    def test_orthogonal_vectors(self):
        emb = embedding_table({"aa": [1.0, 0.0], "bb": [0.0, 3.0]})
        assert semantic_distance("aa", "bb", emb) == pytest.approx(0.0)

    def test_opposite_vectors(self):
        emb = embedding_table({"aa": [1.0, 0.0], "bb": [-2.0, 0.0]})
        assert semantic_distance("aa", "bb", emb) == pytest.approx(1.0)

    def test_missing_word_unavailable(self):
        emb = embedding_table({"aa": [1.0, 0.0]})
        assert semantic_distance("aa", "zz", emb) is None

    def test_zero_norm_unavailable(self):
        emb = embedding_table({"aa": [0.0, 0.0], "bb": [1.0, 0.0]})
        assert semantic_distance("aa", "bb", emb) is None

    def test_symmetry(self, rng):
        emb = embedding_table({"aa": rng.normal(size=4), "bb": rng.normal(size=4)})
        assert semantic_distance("aa", "bb", emb) == pytest.approx(
            semantic_distance("bb", "aa", emb))


def full_emb(rng):
    return embedding_table({w: rng.normal(size=4) for w in UNIVERSE})


def full_scorer():
    return FakeScorer({w: 40.0 + i for i, w in enumerate(UNIVERSE)})


class TestExtractGameFeatures:
    def test_three_guess_levenshtein_example(self, rng):
        game = solved_game(["crane", "crate", "trace"], "trace")
        feats = extract_game_features(game, UNIVERSE, full_emb(rng), full_scorer())
        assert feats.value("levenshtein_distance_max") == 2.0
        assert feats.value("levenshtein_distance_mean") == 1.5
        assert feats.value("levenshtein_distance_last") == 2.0
        assert feats.value("num_possible_guesses_length") == 3.0

    def test_one_guess_game_flags(self, rng):
        game = solved_game(["crane"], "crane")
        feats = extract_game_features(game, UNIVERSE, full_emb(rng), full_scorer())
        assert not feats.has_distance_pairs
        assert feats.value("levenshtein_distance_max") == 0.0
        assert feats.value("glove_distance_mean") == 0.0
        assert feats.value("num_possible_guesses_reduction_max") == len(UNIVERSE)
        assert feats.value("num_possible_guesses_length") == 1.0
        assert training_eligible(feats)

    def test_reduction_features_from_trajectory(self, rng):
        game = solved_game(["crane", "crate"], "crate")
        feats = extract_game_features(game, UNIVERSE, full_emb(rng), full_scorer())
        # crane vs crate leaves exactly {crate}: counts (5, 1, 0)
        assert feats.value("num_possible_guesses_reduction_max") == 4.0
        assert feats.value("num_possible_guesses_reduction_mean") == 2.5
        assert feats.value("num_possible_guesses_reduction_last") == 1.0

    def test_funniness_family(self, rng):
        game = solved_game(["crane", "crate", "trace"], "trace")
        scorer = FakeScorer({"crane": 40.0, "crate": 41.0, "trace": 42.0})
        feats = extract_game_features(game, UNIVERSE, full_emb(rng), scorer)
        assert feats.value("intrinsic_humor_of_words_max") == 42.0
        assert feats.value("intrinsic_humor_of_words_mean") == 41.0
        assert feats.value("intrinsic_humor_of_words_last") == 42.0

    def test_oov_pair_excluded_from_max_mean(self, rng):
        emb = embedding_table({w: rng.normal(size=4) for w in ("crane", "crate")})
        game = solved_game(["crane", "crate", "trace"], "trace")
        feats = extract_game_features(game, UNIVERSE, emb, full_scorer())
        # pair (crate, trace) is unavailable; (crane, crate) remains
        d = semantic_distance("crane", "crate", emb)
        assert feats.value("glove_distance_max") == pytest.approx(d)
        assert feats.value("glove_distance_mean") == pytest.approx(d)
        assert feats.value("glove_distance_last") == 0.0
        assert not feats.glove_last_available
        assert feats.glove_pairs_unavailable == 1
        # 1 of 2 pairs unavailable: half, so the game is excluded
        assert not training_eligible(feats)

    def test_unavailable_funniness_last_flagged_zero(self, rng):
        game = solved_game(["crane", "crate", "trace"], "trace")
        scorer = FakeScorer({"crane": 40.0, "crate": 44.0})
        feats = extract_game_features(game, UNIVERSE, full_emb(rng), scorer)
        assert feats.value("intrinsic_humor_of_words_max") == 44.0
        assert feats.value("intrinsic_humor_of_words_mean") == 42.0
        assert feats.value("intrinsic_humor_of_words_last") == 0.0
        assert not feats.funny_last_available
        assert feats.funny_words_unavailable == 1

    def test_per_guess_matrix_padding(self, rng):
        game = solved_game(["crane", "crate"], "crate")
        feats = extract_game_features(game, UNIVERSE, full_emb(rng), full_scorer(),
                                      include_per_guess=True)
        pg = feats.per_guess
        assert pg.shape == (6, 3)
        assert np.all(pg[2:] == 0.0)
        assert pg[0, 1] == 0.0  # no previous guess at ply 1
        assert pg[0, 0] == 4.0 and pg[1, 0] == 1.0  # reductions 5->1->0
        assert pg[1, 2] == full_scorer().score("crate")

    def test_game_without_words_rejected(self, rng):
        game = GameRecord(feedbacks=("GGGGG",), solved=True)
        with pytest.raises(InputDataError):
            extract_game_features(game, UNIVERSE, full_emb(rng), full_scorer())


class TestFeaturesCSV:
    def make_rows(self, rng, include_per_guess=False):
        games = [
            solved_game(["crane", "crate"], "crate"),
            solved_game(["trace"], "trace"),
            solved_game(["crane", "crate", "trace"], "trace"),
        ]
        rows = []
        for i, game in enumerate(games):
            feats = extract_game_features(game, UNIVERSE, full_emb(rng),
                                          full_scorer(),
                                          include_per_guess=include_per_guess)
            rows.append(FeatureRow(game_id=f"g{i}", label=i % 2, features=feats))
        return rows

    @pytest.mark.parametrize("per_guess", [False, True])
    def test_round_trip(self, tmp_path, rng, per_guess):
        rows = self.make_rows(rng, per_guess)
        path = tmp_path / "features.csv"
        write_features_csv(path, rows, per_guess)
        table = read_features_csv(path)
        assert table.game_ids == ("g0", "g1", "g2")
        assert list(table.labels) == [0, 1, 0]
        for i, row in enumerate(rows):
            assert np.allclose(table.X[i], row.features.values)
            assert table.flags[i] == row.features.flag_values()
            if per_guess:
                assert np.allclose(table.per_guess[i],
                                   row.features.per_guess.ravel())
        assert table.eligible_mask().all()

    def test_schema_mismatch_reports_columns(self, tmp_path):
        path = tmp_path / "features.csv"
        path.write_text("game_id,label,bogus\ng0,1,0.5\n", encoding="utf-8")
        with pytest.raises(InputDataError, match="bogus"):
            read_features_csv(path)

    def test_header_names_are_schema_locked(self):
        assert GAME_FEATURE_NAMES[0] == "num_possible_guesses_reduction_max"
        assert GAME_FEATURE_NAMES[5] == "levenshtein_distance_last"
        assert GAME_FEATURE_NAMES[-1] == "num_possible_guesses_length"
        assert len(GAME_FEATURE_NAMES) == 13
