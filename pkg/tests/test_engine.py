"""Wordle engine: feedback rule, consistency filtering, trajectories."""

import string
from collections import Counter

import numpy as np
import pytest

from wordle_amuse.engine import (CandidateTrajectory, EncodedUniverse,
                                 GameRecord, candidate_trajectory,
                                 compute_feedback, consistent_candidates,
                                 is_consistent, reduction_features,
                                 verify_transcript)
from wordle_amuse.errors import InconsistentTranscriptError, InputDataError
from wordle_amuse import synth


def rand_word(rng, alphabet=string.ascii_lowercase):
    return "".join(rng.choice(list(alphabet), size=5))


class TestComputeFeedback:
    def test_identity_is_all_green(self):
        assert compute_feedback("crane", "crane") == "GGGGG"

    def test_disjoint_letters_all_gray(self):
        assert compute_feedback("pious", "crane") == "BBBBB"

    def test_duplicate_letter_consumption(self):
        assert compute_feedback("babes", "abbey") == "YYGGB"

    def test_rejects_invalid_words(self):
        with pytest.raises(InputDataError):
            compute_feedback("cranes", "crane")
        with pytest.raises(InputDataError):
            compute_feedback("crane", "CRANE")

    def test_all_green_iff_equal(self, rng):
        for _ in range(300):
            g, a = rand_word(rng, "abcd"), rand_word(rng, "abcd")
            fb = compute_feedback(g, a)
            assert (fb == "GGGGG") == (g == a)

    def test_green_plus_yellow_counts_match_multiset_minimum(self, rng):
        for _ in range(500):
            g, a = rand_word(rng, "abcde"), rand_word(rng, "abcde")
            fb = compute_feedback(g, a)
            cg, ca = Counter(g), Counter(a)
            for letter in set(g):
                marked = sum(1 for i in range(5)
                             if g[i] == letter and fb[i] in "GY")
                assert marked == min(cg[letter], ca[letter])


class TestIsConsistent:
    def test_generating_answer_is_consistent(self, rng):
        for _ in range(100):
            g, a = rand_word(rng, "abcdef"), rand_word(rng, "abcdef")
            assert is_consistent(a, g, compute_feedback(g, a))

    def test_known_counterexample(self):
        assert not is_consistent("trace", "crane", "GGGBG")
        assert is_consistent("crate", "crane", "GGGBG")

    def test_all_green_forces_equality(self, rng):
        for _ in range(50):
            g = rand_word(rng)
            c = rand_word(rng)
            assert is_consistent(c, g, "GGGGG") == (c == g)


UNIVERSE3 = {"crane", "crate", "trace"}


class TestConsistentCandidates:
    def test_empty_history_returns_universe(self):
        assert consistent_candidates([], UNIVERSE3) == UNIVERSE3

    def test_filtering_example(self):
        got = consistent_candidates([("crane", "GGGBG")], UNIVERSE3)
        assert got == {"crate"}

    def test_true_answer_never_eliminated(self, rng):
        universe = {rand_word(rng, "abcdefgh") for _ in range(200)}
        answers = rng.choice(sorted(universe), size=20, replace=False)
        for a in answers:
            history = []
            for _ in range(3):
                g = rand_word(rng, "abcdefgh")
                history.append((g, compute_feedback(g, a)))
            assert a in consistent_candidates(history, universe)

    def test_accepts_encoded_universe(self):
        enc = EncodedUniverse(UNIVERSE3)
        assert consistent_candidates([("crane", "GGGBG")], enc) == {"crate"}

    def test_matches_exhaustive_filtering_on_large_universe(self, rng):
        # the optimized path must agree with per-word marking at full scale
        universe = synth.random_words(13_000, rng)
        answers = rng.choice(universe, size=3, replace=False)
        for answer in answers:
            guess = universe[int(rng.integers(len(universe)))]
            fb = compute_feedback(guess, answer)
            got = consistent_candidates([(guess, fb)], universe)
            expected = {w for w in universe if compute_feedback(guess, w) == fb}
            assert got == expected


class TestGameRecord:
    def test_basic_invariants(self):
        with pytest.raises(InputDataError):
            GameRecord(feedbacks=())
        with pytest.raises(InputDataError):
            GameRecord(feedbacks=("GGGGG",) * 7)
        with pytest.raises(InputDataError):
            GameRecord(feedbacks=("GGGGG", "BBBBB"), solved=False)  # early all-green
        with pytest.raises(InputDataError):
            GameRecord(feedbacks=("BBBBB",), solved=True)
        with pytest.raises(InputDataError):
            GameRecord(feedbacks=("GGGGG",), solved=False)
        with pytest.raises(InputDataError):
            GameRecord(feedbacks=("GGGGG",), guesses=("crane",),
                       answer="trace", solved=True)

    def test_guess_feedback_length_mismatch(self):
        with pytest.raises(InputDataError):
            GameRecord(feedbacks=("BBBBB", "GGGGG"), guesses=("crane",), solved=True)

    def test_verify_transcript_catches_corruption(self):
        game = GameRecord(feedbacks=("BBBBB", "GGGGG"),
                          guesses=("crane", "trace"), answer="trace", solved=True)
        with pytest.raises(InconsistentTranscriptError):
            verify_transcript(game)
        ok = GameRecord(feedbacks=(compute_feedback("crane", "trace"), "GGGGG"),
                        guesses=("crane", "trace"), answer="trace", solved=True)
        verify_transcript(ok)


class TestCandidateTrajectory:
    def test_solved_in_one(self):
        game = GameRecord(feedbacks=("GGGGG",), guesses=("crane",),
                          answer="crane", solved=True)
        traj = candidate_trajectory(game, UNIVERSE3)
        assert traj.counts == (3, 0)

    def test_three_word_example(self):
        game = GameRecord(feedbacks=("GGGBG", "GGGGG"),
                          guesses=("crane", "crate"), answer="crate", solved=True)
        traj = candidate_trajectory(game, UNIVERSE3)
        assert traj.counts == (3, 1, 0)

    def test_terminal_count_flag(self):
        game = GameRecord(feedbacks=("GGGBG", "GGGGG"),
                          guesses=("crane", "crate"), answer="crate", solved=True)
        traj = candidate_trajectory(game, UNIVERSE3, solved_terminal_zero=False)
        assert traj.counts == (3, 1, 1)

    def test_lost_game_keeps_final_count(self, rng):
        universe = {rand_word(rng, "abcdefgh") for _ in range(100)}
        answer = sorted(universe)[0]
        guesses, feedbacks = [], []
        others = [w for w in sorted(universe) if w != answer]
        for g in others[:6]:
            guesses.append(g)
            feedbacks.append(compute_feedback(g, answer))
        game = GameRecord(feedbacks=tuple(feedbacks), guesses=tuple(guesses),
                          answer=answer, solved=False)
        traj = candidate_trajectory(game, universe)
        assert len(traj.counts) == 7
        assert traj.counts[-1] >= 1  # the true answer is still in there

    def test_inconsistent_transcript_flagged(self):
        # feedback claims no letter of "crane" occurs, then asks for crate
        game = GameRecord(feedbacks=("BBBBB", "GGGGG"),
                          guesses=("crane", "crate"), solved=True)
        with pytest.raises(InconsistentTranscriptError):
            candidate_trajectory(game, UNIVERSE3)

    def test_needs_guess_words(self):
        game = GameRecord(feedbacks=("GGGGG",), solved=True)
        with pytest.raises(InputDataError):
            candidate_trajectory(game, UNIVERSE3)

    def test_counts_must_not_increase(self):
        with pytest.raises(InputDataError):
            CandidateTrajectory(counts=(3, 1, 2))

    def test_simulated_invariants(self, rng):
        vocab = synth.random_words(150, rng)
        records = synth.simulate_games(50, vocab, seed=5)
        for game in records:
            traj = candidate_trajectory(game, vocab)
            assert all(b <= a for a, b in zip(traj.counts, traj.counts[1:]))
            if game.solved:
                assert traj.counts[-1] == 0
            prefix = []
            for g, fb in zip(game.guesses, game.feedbacks):
                prefix.append((g, fb))
                assert game.answer in consistent_candidates(prefix, vocab)


class TestReductionFeatures:
    def test_three_count_example(self):
        red = reduction_features(CandidateTrajectory((3, 1, 0)))
        assert (red.reduction_max, red.reduction_mean,
                red.reduction_last, red.length) == (2.0, 1.5, 1.0, 2)

    def test_single_ply(self):
        red = reduction_features(CandidateTrajectory((40, 0)))
        assert (red.reduction_max, red.reduction_mean,
                red.reduction_last, red.length) == (40.0, 40.0, 40.0, 1)

    def test_flat_then_drop(self):
        red = reduction_features(CandidateTrajectory((5, 5, 5, 0)))
        assert red.reduction_max == 5.0
        assert red.reduction_mean == pytest.approx(5 / 3)
        assert red.reduction_last == 5.0
        assert red.length == 3
