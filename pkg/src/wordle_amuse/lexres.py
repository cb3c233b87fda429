"""Loaders for the external lexical resources.

Every loader returns an immutable table plus a ``LoadReport`` describing
duplicate and rejected rows.  Words are lowercased at load so the whole
package shares one key space; duplicate rows keep the first occurrence.

File formats (all UTF-8):
  word list        one word per line
  embeddings       "word v1 v2 ... vd", space separated
  pronunciations   dictionary text "WORD  PH1 PH2 ...", ";;;" comments skipped
  frequencies      CSV "word,count" with header
  symbol probs     CSV "symbol,probability" with header
  affect norms     CSV "word,valence,arousal,dominance,concreteness" with header
  humor norms      CSV "word,rating" with header
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, NamedTuple

import numpy as np

from .errors import InputDataError

logger = logging.getLogger(__name__)

# ARPAbet phoneme inventory (CMU dictionary symbol set, stress digits stripped)
ARPABET_PHONEMES = frozenset(
    """AA AE AH AO AW AY B CH D DH EH ER EY F G HH IH IY JH K L M N NG OW OY
       P R S SH T TH UH UW V W Y Z ZH""".split()
)

# Ratings outside this range are rejected at load time.
HUMOR_RATING_MIN = 27.31
HUMOR_RATING_MAX = 100.0

_MAX_REPORT_MESSAGES = 10


@dataclass(frozen=True)
class LoadReport:
    """Counts of rows that were dropped or overridden while loading."""

    duplicates: int = 0
    rejected: int = 0
    messages: tuple[str, ...] = ()

    def log(self, label: str) -> None:
        if self.duplicates:
            logger.warning("%s: %d duplicate rows kept-first", label, self.duplicates)
        if self.rejected:
            logger.warning("%s: %d rows rejected", label, self.rejected)
        for msg in self.messages:
            logger.debug("%s: %s", label, msg)


class _ReportBuilder:
    def __init__(self):
        self.duplicates = 0
        self.rejected = 0
        self.messages: list[str] = []

    def duplicate(self, msg: str) -> None:
        self.duplicates += 1
        self._note(msg)

    def reject(self, msg: str) -> None:
        self.rejected += 1
        self._note(msg)

    def _note(self, msg: str) -> None:
        if len(self.messages) < _MAX_REPORT_MESSAGES:
            self.messages.append(msg)

    def build(self) -> LoadReport:
        return LoadReport(self.duplicates, self.rejected, tuple(self.messages))


@dataclass(frozen=True)
class WordList:
    """Answer words plus the superset of words accepted as guesses."""

    answers: frozenset[str]
    allowed_guesses: frozenset[str]
    report: LoadReport = field(default_factory=LoadReport, compare=False)

    def __post_init__(self):
        if not self.answers:
            raise InputDataError("word list has no answers")
        if not self.answers <= self.allowed_guesses:
            raise InputDataError("answers are not a subset of allowed guesses")

    def universe(self, role: str = "answers") -> frozenset[str]:
        if role == "answers":
            return self.answers
        if role == "guesses":
            return self.allowed_guesses
        raise InputDataError(f"unknown candidate universe role {role!r}")


@dataclass(frozen=True)
class EmbeddingTable:
    dimension: int
    vectors: dict[str, np.ndarray]
    report: LoadReport = field(default_factory=LoadReport, compare=False)

    def __contains__(self, word: str) -> bool:
        return word in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)

    def vector(self, word: str) -> np.ndarray | None:
        return self.vectors.get(word)

    def words(self) -> Iterator[str]:
        return iter(self.vectors)


@dataclass(frozen=True)
class PronunciationTable:
    entries: dict[str, tuple[str, ...]]
    report: LoadReport = field(default_factory=LoadReport, compare=False)

    def phonemes(self, word: str) -> tuple[str, ...] | None:
        return self.entries.get(word)


@dataclass(frozen=True)
class FrequencyTable:
    entries: dict[str, int]
    total: int
    report: LoadReport = field(default_factory=LoadReport, compare=False)

    def probability(self, word: str) -> float | None:
        count = self.entries.get(word)
        if count is None:
            return None
        return count / self.total


@dataclass(frozen=True)
class SymbolProbabilityTable:
    """Letter or phoneme marginal probabilities; values in (0, 1]."""

    entries: dict[str, float]
    kind: str  # "letter" | "phoneme"
    report: LoadReport = field(default_factory=LoadReport, compare=False)

    def probability(self, symbol: str) -> float | None:
        return self.entries.get(symbol)


class Affect(NamedTuple):
    valence: float
    arousal: float
    dominance: float
    concreteness: float


@dataclass(frozen=True)
class AffectNorms:
    entries: dict[str, Affect]
    report: LoadReport = field(default_factory=LoadReport, compare=False)

    def affect(self, word: str) -> Affect | None:
        return self.entries.get(word)


@dataclass(frozen=True)
class HumorNorms:
    entries: dict[str, float]
    report: LoadReport = field(default_factory=LoadReport, compare=False)

    def rating(self, word: str) -> float | None:
        return self.entries.get(word)

    def words(self) -> list[str]:
        return sorted(self.entries)


def _read_lines(path) -> list[str]:
    p = Path(path)
    if not p.is_file():
        raise InputDataError(f"file not found: {p}")
    return p.read_text(encoding="utf-8").splitlines()


def _read_csv_rows(path, required: tuple[str, ...]) -> tuple[list[dict], list[str]]:
    lines = _read_lines(path)
    if not lines:
        raise InputDataError(f"{path}: empty file")
    reader = csv.DictReader(lines)
    header = reader.fieldnames or []
    missing = [c for c in required if c not in header]
    if missing:
        raise InputDataError(f"{path}: missing required column(s) {missing}, got {header}")
    return list(reader), header


def _load_word_file(path, rb: _ReportBuilder) -> list[str]:
    lines = _read_lines(path)
    words: list[str] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(lines, start=1):
        word = raw.strip().lower()
        if not word:
            continue
        if len(word) != 5 or not (word.isascii() and word.isalpha()):
            raise InputDataError(
                f"{path}:{lineno}: {raw.strip()!r} is not a 5-letter a-z word"
            )
        if word in seen:
            rb.duplicate(f"line {lineno}: duplicate {word!r}")
            continue
        seen.add(word)
        words.append(word)
    if not words:
        raise InputDataError(f"{path}: no words found")
    return words


def load_word_list(path, guesses_path=None) -> WordList:
    """Load the answers file and, optionally, a wider allowed-guess file.

    Without a guesses file the allowed set equals the answers.  Answers
    missing from the guesses file are added to it (with a warning count) so
    the subset invariant always holds.
    """
    rb = _ReportBuilder()
    answers = frozenset(_load_word_file(path, rb))
    if guesses_path is None:
        allowed = answers
    else:
        allowed = frozenset(_load_word_file(guesses_path, rb))
        stranded = answers - allowed
        if stranded:
            rb.reject(f"{len(stranded)} answers absent from guess file; added")
            allowed = allowed | answers
    return WordList(answers=answers, allowed_guesses=allowed, report=rb.build())


def load_embeddings(path, expected_dim: int | None = None) -> EmbeddingTable:
    """Parse "word v1 ... vd" lines; dimension inferred from the first line.

    Raises on dimension mismatches and non-numeric components; rows with
    NaN/infinite components are rejected and counted.  First occurrence wins
    on duplicate words.
    """
    if expected_dim is not None and expected_dim <= 0:
        raise InputDataError(f"expected_dim must be positive, got {expected_dim}")
    rb = _ReportBuilder()
    vectors: dict[str, np.ndarray] = {}
    dim = expected_dim
    for lineno, raw in enumerate(_read_lines(path), start=1):
        if not raw.strip():
            continue
        tokens = raw.split()
        if len(tokens) < 2:
            raise InputDataError(f"{path}:{lineno}: expected a word and vector components")
        word = tokens[0].lower()
        if dim is None:
            dim = len(tokens) - 1
        elif len(tokens) - 1 != dim:
            raise InputDataError(
                f"{path}:{lineno}: {len(tokens) - 1} components, expected {dim}"
            )
        try:
            vec = np.array([float(t) for t in tokens[1:]], dtype=np.float64)
        except ValueError as exc:
            raise InputDataError(f"{path}:{lineno}: non-numeric component ({exc})") from exc
        if not np.all(np.isfinite(vec)):
            rb.reject(f"line {lineno}: non-finite component in {word!r}")
            continue
        if word in vectors:
            rb.duplicate(f"line {lineno}: duplicate word {word!r}")
            continue
        vectors[word] = vec
    if dim is None or not vectors:
        raise InputDataError(f"{path}: no embedding rows")
    return EmbeddingTable(dimension=dim, vectors=vectors, report=rb.build())


_VARIANT_SUFFIX = "("  # CMU alternative pronunciations look like WORD(2)


def load_pronunciations(path, strip_stress: bool = True) -> PronunciationTable:
    """Parse CMU-style dictionary text into word -> phoneme sequences.

    Variant entries ("WORD(2)") are skipped in favor of the primary one;
    rows with symbols outside the ARPAbet inventory are rejected and counted.
    """
    rb = _ReportBuilder()
    entries: dict[str, tuple[str, ...]] = {}
    for lineno, raw in enumerate(_read_lines(path), start=1):
        line = raw.strip()
        if not line or line.startswith(";;;"):
            continue
        parts = line.split()
        if len(parts) < 2:
            rb.reject(f"line {lineno}: no phonemes")
            continue
        word = parts[0]
        if _VARIANT_SUFFIX in word:
            continue
        word = word.lower()
        if not (word.isascii() and word.isalpha()):
            rb.reject(f"line {lineno}: non-alphabetic headword {word!r}")
            continue
        phonemes = []
        ok = True
        for sym in parts[1:]:
            sym = sym.upper()
            if strip_stress:
                sym = sym.rstrip("0123456789")
            if sym not in ARPABET_PHONEMES:
                rb.reject(f"line {lineno}: unknown phoneme {sym!r}")
                ok = False
                break
            phonemes.append(sym)
        if not ok:
            continue
        if word in entries:
            rb.duplicate(f"line {lineno}: duplicate entry {word!r}")
            continue
        entries[word] = tuple(phonemes)
    if not entries:
        raise InputDataError(f"{path}: no pronunciation entries")
    return PronunciationTable(entries=entries, report=rb.build())


def load_frequencies(path) -> FrequencyTable:
    """CSV "word,count" with positive integer counts; total is their sum."""
    rows, _ = _read_csv_rows(path, ("word", "count"))
    rb = _ReportBuilder()
    entries: dict[str, int] = {}
    for i, row in enumerate(rows, start=2):
        word = (row["word"] or "").strip().lower()
        try:
            count = int(row["count"])
        except (TypeError, ValueError):
            raise InputDataError(f"{path}:{i}: count {row['count']!r} is not an integer")
        if not word:
            rb.reject(f"line {i}: empty word")
            continue
        if count <= 0:
            rb.reject(f"line {i}: non-positive count {count} for {word!r}")
            continue
        if word in entries:
            rb.duplicate(f"line {i}: duplicate word {word!r}")
            continue
        entries[word] = count
    if not entries:
        raise InputDataError(f"{path}: no frequency rows")
    return FrequencyTable(entries=entries, total=sum(entries.values()), report=rb.build())


def load_symbol_probabilities(path, kind: str) -> SymbolProbabilityTable:
    """CSV "symbol,probability"; kind is "letter" (a-z) or "phoneme" (ARPAbet).

    Probabilities must lie in (0, 1] and sum to 1 within +/-0.01 (published
    tables are rounded).
    """
    if kind not in ("letter", "phoneme"):
        raise InputDataError(f"symbol table kind must be letter or phoneme, got {kind!r}")
    rows, _ = _read_csv_rows(path, ("symbol", "probability"))
    rb = _ReportBuilder()
    entries: dict[str, float] = {}
    for i, row in enumerate(rows, start=2):
        sym = (row["symbol"] or "").strip()
        sym = sym.lower() if kind == "letter" else sym.upper().rstrip("0123456789")
        try:
            p = float(row["probability"])
        except (TypeError, ValueError):
            raise InputDataError(f"{path}:{i}: probability {row['probability']!r} is not a number")
        if kind == "letter" and not (len(sym) == 1 and "a" <= sym <= "z"):
            rb.reject(f"line {i}: bad letter symbol {sym!r}")
            continue
        if kind == "phoneme" and sym not in ARPABET_PHONEMES:
            rb.reject(f"line {i}: unknown phoneme {sym!r}")
            continue
        if not (0.0 < p <= 1.0) or math.isnan(p):
            rb.reject(f"line {i}: probability {p} outside (0, 1]")
            continue
        if sym in entries:
            rb.duplicate(f"line {i}: duplicate symbol {sym!r}")
            continue
        entries[sym] = p
    if not entries:
        raise InputDataError(f"{path}: no probability rows")
    total = sum(entries.values())
    if not 0.99 <= total <= 1.01:
        raise InputDataError(f"{path}: probabilities sum to {total:.4f}, outside [0.99, 1.01]")
    return SymbolProbabilityTable(entries=entries, kind=kind, report=rb.build())


def load_affect_norms(path) -> AffectNorms:
    """CSV "word,valence,arousal,dominance,concreteness", all finite reals."""
    cols = ("word", "valence", "arousal", "dominance", "concreteness")
    rows, _ = _read_csv_rows(path, cols)
    rb = _ReportBuilder()
    entries: dict[str, Affect] = {}
    for i, row in enumerate(rows, start=2):
        word = (row["word"] or "").strip().lower()
        if not word:
            rb.reject(f"line {i}: empty word")
            continue
        try:
            values = [float(row[c]) for c in cols[1:]]
        except (TypeError, ValueError):
            raise InputDataError(f"{path}:{i}: non-numeric affect value for {word!r}")
        if not all(math.isfinite(v) for v in values):
            rb.reject(f"line {i}: non-finite affect value for {word!r}")
            continue
        if word in entries:
            rb.duplicate(f"line {i}: duplicate word {word!r}")
            continue
        entries[word] = Affect(*values)
    if not entries:
        raise InputDataError(f"{path}: no affect rows")
    return AffectNorms(entries=entries, report=rb.build())


def load_humor_norms(path) -> HumorNorms:
    """CSV "word,rating"; ratings outside [27.31, 100] are rejected and counted."""
    rows, _ = _read_csv_rows(path, ("word", "rating"))
    rb = _ReportBuilder()
    entries: dict[str, float] = {}
    for i, row in enumerate(rows, start=2):
        word = (row["word"] or "").strip().lower()
        if not word:
            rb.reject(f"line {i}: empty word")
            continue
        try:
            rating = float(row["rating"])
        except (TypeError, ValueError):
            raise InputDataError(f"{path}:{i}: rating {row['rating']!r} is not a number")
        if math.isnan(rating) or not HUMOR_RATING_MIN <= rating <= HUMOR_RATING_MAX:
            rb.reject(f"line {i}: rating {rating} outside "
                      f"[{HUMOR_RATING_MIN}, {HUMOR_RATING_MAX}]")
            continue
        if word in entries:
            rb.duplicate(f"line {i}: duplicate word {word!r}")
            continue
        entries[word] = rating
    if not entries:
        raise InputDataError(f"{path}: no humor rows in range")
    return HumorNorms(entries=entries, report=rb.build())
