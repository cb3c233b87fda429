"""Parsing of shared Wordle transcripts, label joins, and rater agreement.

Two ingestion paths produce GameRecords:

* raw share text: blocks separated by blank lines, each starting with a
  header like ``Wordle 902 3/6`` (or ``X/6`` for losses) followed by rows of
  colored squares, optionally annotated with the typed guess words;
* a JSONL file with one object per line:
  ``{"game_id": str, "guesses": [str]?, "feedback": ["GYBBG", ...],
  "solved": bool, "comment_id": str?}``.

Amusement labels arrive pre-computed as a ``comment_id,label`` CSV; this
package never interprets comment text itself.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .engine import ALL_GREEN, GameRecord, is_valid_word, verify_transcript
from .errors import InconsistentTranscriptError, InputDataError

logger = logging.getLogger(__name__)

GRID_SYMBOLS = {
    "\U0001f7e9": "G",  # green square
    "\U0001f7e8": "Y",  # yellow square
    "⬛": "B",      # black square
    "⬜": "B",      # white square
}

_HEADER_RE = re.compile(r"Wordle\s+([0-9][0-9,.]*)\s+([1-6X])/6\*?", re.IGNORECASE)
_WORD_TOKEN_RE = re.compile(r"^[A-Za-z]{5}$")
_IGNORED_CODEPOINTS = {"️", "​", "‍"}  # emoji presentation junk


@dataclass(frozen=True)
class SharePost:
    """One parsed share block: header, feedback grid, optional guess words."""

    game_id: str
    puzzle_number: int
    score_text: str
    grid: tuple[str, ...]
    guess_words: tuple[str, ...] | None
    raw_text: str

    @property
    def solved(self) -> bool:
        return not self.score_text.startswith("X")

    def to_game_record(self) -> GameRecord:
        answer = None
        if self.solved and self.guess_words is not None:
            answer = self.guess_words[-1]
        return GameRecord(
            feedbacks=self.grid,
            guesses=self.guess_words,
            answer=answer,
            solved=self.solved,
        )


def _grid_row_symbols(line: str) -> list[str] | None:
    """Feedback marks for one line, or None if the line holds no squares."""
    marks = [GRID_SYMBOLS[ch] for ch in line if ch in GRID_SYMBOLS]
    return marks or None


def parse_share_text(text: str, game_id: str = "") -> SharePost:
    """Parse one share block into a SharePost.

    Raises InputDataError when there is no ``Wordle <n> <k>/6`` header, when
    a grid row does not hold exactly 5 squares, or when the header's score
    disagrees with the number of rows.  Per-row guess words are kept only
    when every row carries one (all-or-nothing, per the grid invariant).
    """
    header = _HEADER_RE.search(text)
    if header is None:
        raise InputDataError("not a game: no 'Wordle <n> <k>/6' header")
    puzzle = int(header.group(1).replace(",", "").replace(".", ""))
    score = header.group(2).upper()

    grid: list[str] = []
    row_words: list[str | None] = []
    for line in text[header.end():].splitlines():
        line = "".join(ch for ch in line if ch not in _IGNORED_CODEPOINTS)
        marks = _grid_row_symbols(line)
        if marks is None:
            continue
        if len(marks) != 5:
            raise InputDataError(f"grid row {len(grid) + 1} has {len(marks)} squares, expected 5")
        grid.append("".join(marks))
        trailing = "".join(ch for ch in line if ch not in GRID_SYMBOLS).strip()
        word = trailing.lower() if _WORD_TOKEN_RE.match(trailing) else None
        row_words.append(word)

    if not 1 <= len(grid) <= 6:
        raise InputDataError(f"{len(grid)} grid rows, expected 1..6")
    if score != "X":
        if int(score) != len(grid):
            raise InputDataError(f"header says {score}/6 but grid has {len(grid)} rows")
        if grid[-1] != ALL_GREEN:
            raise InputDataError(f"header says {score}/6 but final row is not all-green")
    elif grid[-1] == ALL_GREEN:
        raise InputDataError("header says X/6 but final row is all-green")

    words = tuple(w for w in row_words if w is not None)
    guess_words = words if len(words) == len(grid) else None
    return SharePost(
        game_id=game_id or f"wordle{puzzle}",
        puzzle_number=puzzle,
        score_text=f"{score}/6",
        grid=tuple(grid),
        guess_words=guess_words,
        raw_text=text,
    )


@dataclass(frozen=True)
class GameRow:
    game_id: str
    comment_id: str
    game: GameRecord


@dataclass(frozen=True)
class SkippedGame:
    game_id: str
    reason: str


def parse_share_file(text: str, strict: bool = False) -> tuple[list[GameRow], list[SkippedGame]]:
    """Parse raw share text holding many posts into GameRows.

    The text is split into blank-line-separated paragraphs, then grouped
    into blocks: each ``Wordle <n> <k>/6`` header starts a block that runs
    until the next header (the canonical share puts a blank line between
    the header and its grid, so a block can span paragraphs).  Paragraphs
    before the first header are skipped and counted; blocks that fail to
    parse are skipped too unless ``strict``.  Game ids are
    ``wordle<puzzle>_<k>`` with k the 1-based block ordinal, and double as
    comment ids.
    """
    paragraphs = [p for p in re.split(r"\n\s*\n", text) if p.strip()]
    blocks: list[str] = []
    skipped: list[SkippedGame] = []
    for para in paragraphs:
        if _HEADER_RE.search(para):
            blocks.append(para)
        elif blocks:
            blocks[-1] += "\n" + para
        else:
            skipped.append(SkippedGame(
                game_id=f"preamble{len(skipped) + 1}",
                reason="not a game: no 'Wordle <n> <k>/6' header"))
    if strict and skipped:
        raise InputDataError(f"{skipped[0].game_id}: {skipped[0].reason}")
    rows: list[GameRow] = []
    for ordinal, block in enumerate(blocks, start=1):
        try:
            post = parse_share_text(block)
            gid = f"{post.game_id}_{ordinal}"
            rows.append(GameRow(game_id=gid, comment_id=gid, game=post.to_game_record()))
        except InputDataError as exc:
            if strict:
                raise InputDataError(f"block{ordinal}: {exc}") from exc
            skipped.append(SkippedGame(game_id=f"block{ordinal}", reason=str(exc)))
    return rows, skipped


def game_to_json(row: GameRow) -> str:
    obj = {
        "game_id": row.game_id,
        "comment_id": row.comment_id,
        "feedback": list(row.game.feedbacks),
        "solved": row.game.solved,
    }
    if row.game.guesses is not None:
        obj["guesses"] = list(row.game.guesses)
    return json.dumps(obj, sort_keys=True)


def _game_from_obj(obj: dict, lineno: int) -> GameRow:
    if not isinstance(obj, dict):
        raise InputDataError(f"line {lineno}: expected a JSON object")
    try:
        game_id = str(obj["game_id"])
        feedback = obj["feedback"]
        solved = bool(obj["solved"])
    except KeyError as exc:
        raise InputDataError(f"line {lineno}: missing key {exc}") from exc
    if not isinstance(feedback, list) or not all(isinstance(f, str) for f in feedback):
        raise InputDataError(f"line {lineno}: feedback must be a list of strings")
    guesses = obj.get("guesses")
    if guesses is not None:
        if not isinstance(guesses, list) or not all(isinstance(g, str) for g in guesses):
            raise InputDataError(f"line {lineno}: guesses must be a list of strings")
        guesses = tuple(g.lower() for g in guesses)
    comment_id = str(obj.get("comment_id", game_id))
    answer = None
    if solved and guesses:
        answer = guesses[-1]
    record = GameRecord(
        feedbacks=tuple(f.upper() for f in feedback),
        guesses=guesses,
        answer=answer,
        solved=solved,
    )
    verify_transcript(record)
    return GameRow(game_id=game_id, comment_id=comment_id, game=record)


def load_games(path, strict: bool = True) -> tuple[list[GameRow], list[SkippedGame]]:
    """Load the JSONL games file.

    Duplicate game ids are always an error.  Per-game validation failures
    (bad words, inconsistent transcripts) raise when ``strict``, otherwise
    the game is skipped and reported.
    """
    p = Path(path)
    if not p.is_file():
        raise InputDataError(f"file not found: {p}")
    rows: list[GameRow] = []
    skipped: list[SkippedGame] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(p.read_text(encoding="utf-8").splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InputDataError(f"{p}:{lineno}: invalid JSON ({exc})") from exc
        gid = str(obj.get("game_id", f"line{lineno}")) if isinstance(obj, dict) else f"line{lineno}"
        if gid in seen:
            raise InputDataError(f"{p}:{lineno}: duplicate game_id {gid!r}")
        seen.add(gid)
        try:
            rows.append(_game_from_obj(obj, lineno))
        except (InputDataError, InconsistentTranscriptError) as exc:
            if strict:
                raise InputDataError(f"{p}:{lineno}: {exc}") from exc
            skipped.append(SkippedGame(game_id=gid, reason=str(exc)))
    return rows, skipped


@dataclass(frozen=True)
class LabelTable:
    entries: dict[str, int]


def load_labels(path) -> LabelTable:
    """CSV "comment_id,label" with binary labels; duplicates are an error."""
    p = Path(path)
    if not p.is_file():
        raise InputDataError(f"file not found: {p}")
    import csv

    lines = p.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise InputDataError(f"{p}: empty file")
    reader = csv.DictReader(lines)
    if reader.fieldnames is None or not {"comment_id", "label"} <= set(reader.fieldnames):
        raise InputDataError(f"{p}: expected header comment_id,label")
    entries: dict[str, int] = {}
    for i, row in enumerate(reader, start=2):
        cid = (row["comment_id"] or "").strip()
        raw = (row["label"] or "").strip()
        if raw not in ("0", "1"):
            raise InputDataError(f"{p}:{i}: label {raw!r} is not 0 or 1")
        if cid in entries:
            raise InputDataError(f"{p}:{i}: duplicate comment_id {cid!r}")
        entries[cid] = int(raw)
    return LabelTable(entries=entries)


@dataclass(frozen=True)
class LabeledGame:
    game_id: str
    comment_id: str
    game: GameRecord
    label: int


@dataclass(frozen=True)
class JoinReport:
    unlabeled_games: int
    orphan_labels: int


def join_labels(games: Sequence[GameRow], labels: LabelTable) -> tuple[list[LabeledGame], JoinReport]:
    """Inner-join games with labels on comment_id, preserving game order."""
    joined: list[LabeledGame] = []
    matched: set[str] = set()
    for row in games:
        label = labels.entries.get(row.comment_id)
        if label is None:
            continue
        matched.add(row.comment_id)
        joined.append(LabeledGame(row.game_id, row.comment_id, row.game, label))
    report = JoinReport(
        unlabeled_games=len(games) - len(joined),
        orphan_labels=len(set(labels.entries) - matched),
    )
    return joined, report


@dataclass(frozen=True)
class AnnotationTable:
    """Items rated 1-5 by several raters, plus an optional binary machine column."""

    item_ids: tuple[str, ...]
    rater_names: tuple[str, ...]
    ratings: dict[str, tuple[int | None, ...]] = field(compare=False)
    machine: tuple[int | None, ...] | None = None

    def n_items(self) -> int:
        return len(self.item_ids)


MACHINE_COLUMN = "machine"


def load_annotations(path) -> AnnotationTable:
    """CSV "item_id,rater1,...,raterK[,machine]"; blank cells are missing.

    Rater cells must be 1-5; a column literally named "machine" holds 0/1
    labels instead.
    """
    import csv

    p = Path(path)
    if not p.is_file():
        raise InputDataError(f"file not found: {p}")
    lines = p.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise InputDataError(f"{p}: empty file")
    reader = csv.reader(lines)
    header = next(reader)
    if len(header) < 2 or header[0] != "item_id":
        raise InputDataError(f"{p}: expected header item_id,<rater>,... got {header}")
    rater_names = [c.strip() for c in header[1:]]
    has_machine = rater_names and rater_names[-1] == MACHINE_COLUMN
    if has_machine:
        rater_names = rater_names[:-1]
    if not rater_names:
        raise InputDataError(f"{p}: no rater columns")

    item_ids: list[str] = []
    columns: list[list[int | None]] = [[] for _ in header[1:]]
    for i, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise InputDataError(f"{p}:{i}: {len(row)} cells, expected {len(header)}")
        item_ids.append(row[0].strip())
        for j, cell in enumerate(row[1:]):
            cell = cell.strip()
            if not cell:
                columns[j].append(None)
                continue
            try:
                value = int(cell)
            except ValueError:
                raise InputDataError(f"{p}:{i}: rating {cell!r} is not an integer")
            is_machine_col = has_machine and j == len(header) - 2
            if is_machine_col and value not in (0, 1):
                raise InputDataError(f"{p}:{i}: machine label {value} is not 0/1")
            if not is_machine_col and value not in (1, 2, 3, 4, 5):
                raise InputDataError(f"{p}:{i}: rating {value} outside 1..5")
            columns[j].append(value)
    if not item_ids:
        raise InputDataError(f"{p}: no annotation rows")
    ratings = {name: tuple(columns[j]) for j, name in enumerate(rater_names)}
    machine = tuple(columns[-1]) if has_machine else None
    return AnnotationTable(
        item_ids=tuple(item_ids),
        rater_names=tuple(rater_names),
        ratings=ratings,
        machine=machine,
    )


def threshold_ratings(table: AnnotationTable, t: int = 2) -> dict[str, tuple[int | None, ...]]:
    """Binarize each rater column as 1 iff rating > t; missing stays missing."""
    out: dict[str, tuple[int | None, ...]] = {}
    for name in table.rater_names:
        out[name] = tuple(
            None if r is None else int(r > t) for r in table.ratings[name]
        )
    return out


def cohens_kappa(a: Sequence[int | None], b: Sequence[int | None]) -> float:
    """Chance-corrected agreement between two binary raters.

    Items missing in either vector are dropped pairwise.  When chance
    agreement is exact (both raters constant and equal) kappa is defined
    as 1 by the usual continuity convention.
    """
    if len(a) != len(b):
        raise InputDataError(f"rater vectors differ in length: {len(a)} vs {len(b)}")
    pairs = [(x, y) for x, y in zip(a, b) if x is not None and y is not None]
    if not pairs:
        raise InputDataError("no items labeled by both raters")
    for x, y in pairs:
        if x not in (0, 1) or y not in (0, 1):
            raise InputDataError(f"non-binary label in pair ({x}, {y})")
    n = len(pairs)
    p_o = sum(1 for x, y in pairs if x == y) / n
    pa1 = sum(x for x, _ in pairs) / n
    pb1 = sum(y for _, y in pairs) / n
    p_e = pa1 * pb1 + (1 - pa1) * (1 - pb1)
    if p_e == 1.0:
        return 1.0
    return (p_o - p_e) / (1.0 - p_e)


def kappa_matrix(table: AnnotationTable, t: int = 2) -> tuple[tuple[str, ...], np.ndarray]:
    """Pairwise kappa over all raters (thresholded at t) plus the machine column.

    Returns the column names and a symmetric matrix with unit diagonal.
    """
    binary = threshold_ratings(table, t)
    names = list(table.rater_names)
    if table.machine is not None:
        binary[MACHINE_COLUMN] = table.machine
        names.append(MACHINE_COLUMN)
    if len(names) < 2:
        raise InputDataError("kappa matrix needs at least two raters")
    k = len(names)
    mat = np.eye(k)
    for i in range(k):
        for j in range(i + 1, k):
            mat[i, j] = mat[j, i] = cohens_kappa(binary[names[i]], binary[names[j]])
    return tuple(names), mat
