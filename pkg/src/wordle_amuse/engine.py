"""Wordle game mechanics: feedback marking, candidate filtering, reductions.

Feedback strings use one character per position: ``G`` (green, right letter
right spot), ``Y`` (yellow, letter present elsewhere under multiset
consumption), ``B`` (gray, no unconsumed copy).  Marking follows the deployed
game's two-pass rule: greens consume answer letters first, then yellows are
assigned left to right while copies remain.

Candidate counting walks a game ply by ply, keeping the answers that are
consistent with every (guess, feedback) pair seen so far.  A solving
(all-green) guess drives the count to zero by convention; pass
``solved_terminal_zero=False`` to keep the literal filtered count instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import InconsistentTranscriptError, InputDataError

GREEN = "G"
YELLOW = "Y"
GRAY = "B"
ALL_GREEN = "GGGGG"

WORD_LENGTH = 5
MAX_GUESSES = 6

_MARK_FROM_DIGIT = {0: GRAY, 1: YELLOW, 2: GREEN}
_DIGIT_FROM_MARK = {GRAY: 0, YELLOW: 1, GREEN: 2}


def is_valid_word(word: str) -> bool:
    return len(word) == WORD_LENGTH and word.isascii() and word.isalpha() and word == word.lower()


def check_word(word: str, context: str = "word") -> str:
    if not isinstance(word, str) or not is_valid_word(word):
        raise InputDataError(f"{context} {word!r} is not a 5-letter lowercase a-z word")
    return word


def check_feedback(fb: str, context: str = "feedback") -> str:
    if not isinstance(fb, str) or len(fb) != WORD_LENGTH or any(c not in "GYB" for c in fb):
        raise InputDataError(f"{context} {fb!r} is not 5 characters from G/Y/B")
    return fb


def encode_word(word: str) -> np.ndarray:
    """Letter indices 0..25 as a uint8 array of length 5."""
    return np.frombuffer(word.encode("ascii"), dtype=np.uint8) - ord("a")


def encode_words(words: Sequence[str]) -> np.ndarray:
    """Stack word encodings into an (N, 5) uint8 matrix."""
    if not words:
        return np.zeros((0, WORD_LENGTH), dtype=np.uint8)
    buf = np.frombuffer("".join(words).encode("ascii"), dtype=np.uint8)
    return buf.reshape(len(words), WORD_LENGTH) - ord("a")


def feedback_to_code(fb: str) -> int:
    code = 0
    for i, c in enumerate(fb):
        code += _DIGIT_FROM_MARK[c] * 3**i
    return code


def code_to_feedback(code: int) -> str:
    marks = []
    for _ in range(WORD_LENGTH):
        marks.append(_MARK_FROM_DIGIT[code % 3])
        code //= 3
    return "".join(marks)


def compute_feedback(guess: str, answer: str) -> str:
    """Feedback string for one guess against a known answer."""
    check_word(guess, "guess")
    check_word(answer, "answer")
    return code_to_feedback(kernels.feedback_code(encode_word(guess), encode_word(answer)))


def is_consistent(candidate: str, guess: str, observed: str) -> bool:
    """True iff the candidate, as the answer, would have produced ``observed``."""
    check_feedback(observed)
    return compute_feedback(guess, candidate) == observed


@dataclass(frozen=True)
class GameRecord:
    """One replayed game: parallel guess/feedback lists plus outcome.

    ``guesses`` is None for transcripts shared without typed words (feedback
    grids only); those games still get candidate trajectories but none of the
    word-based features.  ``answer`` is None when unknown.
    """

    feedbacks: tuple[str, ...]
    guesses: tuple[str, ...] | None = None
    answer: str | None = None
    solved: bool = False

    def __post_init__(self):
        n = len(self.feedbacks)
        if not 1 <= n <= MAX_GUESSES:
            raise InputDataError(f"game has {n} plies, expected 1..{MAX_GUESSES}")
        for i, fb in enumerate(self.feedbacks):
            check_feedback(fb, f"feedback {i + 1}")
            if fb == ALL_GREEN and i != n - 1:
                raise InputDataError(f"all-green feedback at ply {i + 1} of {n}")
        if self.solved and self.feedbacks[-1] != ALL_GREEN:
            raise InputDataError("solved game whose final feedback is not all-green")
        if not self.solved and self.feedbacks[-1] == ALL_GREEN:
            raise InputDataError("unsolved game ending in all-green feedback")
        if self.guesses is not None:
            if len(self.guesses) != n:
                raise InputDataError(
                    f"{len(self.guesses)} guesses but {n} feedback rows"
                )
            for i, w in enumerate(self.guesses):
                check_word(w, f"guess {i + 1}")
        if self.answer is not None:
            check_word(self.answer, "answer")
            if self.solved and self.guesses is not None and self.guesses[-1] != self.answer:
                raise InputDataError("solved game whose final guess is not the answer")

    @property
    def length(self) -> int:
        return len(self.feedbacks)


def verify_transcript(game: GameRecord) -> None:
    """Cross-check recorded feedback against a known answer.

    Raises InconsistentTranscriptError on the first disagreeing ply.  No-op
    when the answer or the guess words are unknown.
    """
    if game.answer is None or game.guesses is None:
        return
    for i, (guess, fb) in enumerate(zip(game.guesses, game.feedbacks)):
        recomputed = compute_feedback(guess, game.answer)
        if recomputed != fb:
            raise InconsistentTranscriptError(
                f"ply {i + 1}: recorded feedback {fb} but guess {guess!r} "
                f"against answer {game.answer!r} gives {recomputed}"
            )


@dataclass(frozen=True)
class CandidateTrajectory:
    """Per-ply counts of answers still consistent with the game so far.

    ``counts[0]`` is the full universe size; ``counts[i]`` the count after
    ply i.  Counts never increase; a solved game ends at 0 (by convention,
    unless built with ``solved_terminal_zero=False``).
    """

    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) < 2:
            raise InputDataError("trajectory needs at least one ply")
        if any(c < 0 for c in self.counts):
            raise InputDataError("negative candidate count")
        if any(b > a for a, b in zip(self.counts, self.counts[1:])):
            raise InputDataError(f"candidate counts increase: {self.counts}")

    @property
    def reductions(self) -> tuple[int, ...]:
        return tuple(a - b for a, b in zip(self.counts, self.counts[1:]))


@dataclass(frozen=True)
class ReductionFeatures:
    reduction_max: float
    reduction_mean: float
    reduction_last: float
    length: int


class EncodedUniverse:
    """A candidate universe sorted and letter-encoded once, for reuse across
    many trajectory computations.  Accepts any iterable of words or a
    lexres.WordList (whose answers become the universe)."""

    def __init__(self, words):
        answers = getattr(words, "answers", None)
        if answers is not None:
            words = answers
        self.words = tuple(sorted(set(words)))
        self.matrix = encode_words(self.words)

    def __len__(self) -> int:
        return len(self.words)


class _CandidateFilter:
    """Incrementally filters an encoded universe by (guess, feedback) pairs."""

    def __init__(self, words: Iterable[str] | EncodedUniverse):
        if not isinstance(words, EncodedUniverse):
            words = EncodedUniverse(words)
        self.words = words.words
        self.matrix = words.matrix
        self._live = np.arange(len(self.words))

    @property
    def count(self) -> int:
        return len(self._live)

    def apply(self, guess: str, feedback: str) -> None:
        codes = kernels.feedback_codes(encode_word(check_word(guess)), self.matrix)
        keep = codes == feedback_to_code(check_feedback(feedback))
        self.matrix = self.matrix[keep]
        self._live = self._live[keep]

    def current_words(self) -> set[str]:
        return {self.words[i] for i in self._live}


def consistent_candidates(
    history: Sequence[tuple[str, str]], universe: Iterable[str]
) -> set[str]:
    """Words in ``universe`` consistent with every (guess, feedback) pair.

    An empty history returns the whole universe; an empty result is legal.
    """
    filt = _CandidateFilter(universe)
    for guess, feedback in history:
        filt.apply(guess, feedback)
    return filt.current_words()


def candidate_trajectory(
    game: GameRecord,
    universe: Iterable[str],
    *,
    solved_terminal_zero: bool = True,
) -> CandidateTrajectory:
    """Candidate counts before the game and after each ply.

    ``universe`` is normally the answers list; pass the allowed-guess list to
    count over the wider space instead.  Raises InconsistentTranscriptError
    if the feedback eliminates every candidate before the final ply.
    """
    if game.answer is not None:
        verify_transcript(game)
    guesses = game.guesses
    if guesses is None:
        raise InputDataError("trajectory needs the guess words; this game has none")
    filt = _CandidateFilter(universe)
    counts = [filt.count]
    n = game.length
    for i, (guess, fb) in enumerate(zip(guesses, game.feedbacks)):
        last = i == n - 1
        if last and game.solved and solved_terminal_zero:
            counts.append(0)
            continue
        filt.apply(guess, fb)
        if filt.count == 0 and not last:
            raise InconsistentTranscriptError(
                f"no candidate is consistent after ply {i + 1} of {n}"
            )
        counts.append(filt.count)
    return CandidateTrajectory(tuple(counts))


def reduction_features(traj: CandidateTrajectory) -> ReductionFeatures:
    """Max/mean/last drop in candidate count, plus the game length."""
    red = traj.reductions
    return ReductionFeatures(
        reduction_max=float(max(red)),
        reduction_mean=float(sum(red) / len(red)),
        reduction_last=float(red[-1]),
        length=len(red),
    )
