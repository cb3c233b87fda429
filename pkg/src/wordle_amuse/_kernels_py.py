"""NumPy fallback for the hot kernels (feedback marking, filtering, edit distance).

Words are encoded as uint8 arrays of letter indices (0..25).  A feedback
pattern is packed into a single base-3 code: mark m_i in {0 gray, 1 yellow,
2 green} at position i contributes m_i * 3**i, so codes range over 0..242
and all-green is 242.

The compiled twin (``_kernels.pyx``) implements the same three functions with
identical semantics; ``kernels.py`` picks one at import time.
"""

import numpy as np

BACKEND_NAME = "numpy"

POW3 = np.array([1, 3, 9, 27, 81], dtype=np.uint8)
ALL_GREEN_CODE = 242  # 2 * (1 + 3 + 9 + 27 + 81)


def feedback_code(guess: np.ndarray, answer: np.ndarray) -> int:
    """Base-3 feedback code for a single (guess, answer) pair.

    Two-pass rule: greens consume answer letters first, then each remaining
    guess letter turns yellow if an unconsumed copy exists in the answer.
    """
    counts = [0] * 26
    marks = [0, 0, 0, 0, 0]
    for i in range(5):
        if guess[i] == answer[i]:
            marks[i] = 2
        else:
            counts[answer[i]] += 1
    for i in range(5):
        if marks[i] == 0 and counts[guess[i]] > 0:
            marks[i] = 1
            counts[guess[i]] -= 1
    return marks[0] + 3 * marks[1] + 9 * marks[2] + 27 * marks[3] + 81 * marks[4]


def feedback_codes(guess: np.ndarray, words: np.ndarray) -> np.ndarray:
    """Feedback codes of one guess against every row of ``words`` (N x 5).

    Vectorized over rows: the multiset bookkeeping runs as five scans of
    N-vectors instead of a Python loop per word.
    """
    n = words.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.uint8)
    greens = words == guess[np.newaxis, :]
    # letter occurrence counts per word, then subtract green consumption
    flat = words.astype(np.intp) + 26 * np.arange(n, dtype=np.intp)[:, np.newaxis]
    avail = np.bincount(flat.ravel(), minlength=26 * n).reshape(n, 26).astype(np.int16)
    for i in range(5):
        avail[greens[:, i], guess[i]] -= 1
    marks = np.where(greens, np.uint8(2), np.uint8(0))
    for i in range(5):
        gi = int(guess[i])
        can = ~greens[:, i] & (avail[:, gi] > 0)
        marks[can, i] = 1
        avail[can, gi] -= 1
    return (marks * POW3[np.newaxis, :]).sum(axis=1).astype(np.uint8)


def levenshtein(a: str, b: str) -> int:
    """Edit distance (insert/delete/substitute) via the two-row DP recurrence."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i] + [0] * len(b)
        for j, cb in enumerate(b, start=1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb))
        prev = cur
    return prev[-1]
