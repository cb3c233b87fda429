# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``_kernels_py``: same three functions, tight C loops.

Semantics must match the NumPy fallback bit for bit; ``tests/test_kernels.py``
cross-checks both against a brute-force oracle and against each other.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "cython"

ALL_GREEN_CODE = 242

DEF MAXLEN = 127


cdef inline int _code_row(const unsigned char* guess, const unsigned char* answer) noexcept nogil:
    cdef int counts[26]
    cdef int marks[5]
    cdef int i, code
    for i in range(26):
        counts[i] = 0
    for i in range(5):
        if guess[i] == answer[i]:
            marks[i] = 2
        else:
            marks[i] = 0
            counts[answer[i]] += 1
    for i in range(5):
        if marks[i] == 0 and counts[guess[i]] > 0:
            marks[i] = 1
            counts[guess[i]] -= 1
    code = marks[0] + 3 * marks[1] + 9 * marks[2] + 27 * marks[3] + 81 * marks[4]
    return code


def feedback_code(const unsigned char[::1] guess, const unsigned char[::1] answer):
    """Base-3 feedback code for a single (guess, answer) pair."""
    return _code_row(&guess[0], &answer[0])


def feedback_codes(const unsigned char[::1] guess, const unsigned char[:, ::1] words):
    """Feedback codes of one guess against every row of ``words`` (N x 5)."""
    cdef Py_ssize_t n = words.shape[0]
    out = np.empty(n, dtype=np.uint8)
    cdef unsigned char[::1] out_view = out
    cdef Py_ssize_t r
    if n == 0:
        return out
    with nogil:
        for r in range(n):
            out_view[r] = <unsigned char> _code_row(&guess[0], &words[r, 0])
    return out


def levenshtein(str a, str b):
    """Edit distance (insert/delete/substitute) via the two-row DP recurrence."""
    cdef bytes ab, bb
    try:
        ab = a.encode("ascii")
        bb = b.encode("ascii")
    except UnicodeEncodeError:
        from . import _kernels_py
        return _kernels_py.levenshtein(a, b)
    if len(ab) > MAXLEN or len(bb) > MAXLEN:
        from . import _kernels_py
        return _kernels_py.levenshtein(a, b)
    return _lev_bytes(ab, bb)


cdef int _lev_bytes(const unsigned char[::1] a, const unsigned char[::1] b) noexcept nogil:
    cdef int la = <int> a.shape[0]
    cdef int lb = <int> b.shape[0]
    cdef int prev[MAXLEN + 1]
    cdef int cur[MAXLEN + 1]
    cdef int i, j, sub, best
    if la == 0:
        return lb
    if lb == 0:
        return la
    for j in range(lb + 1):
        prev[j] = j
    for i in range(1, la + 1):
        cur[0] = i
        for j in range(1, lb + 1):
            sub = prev[j - 1] + (a[i - 1] != b[j - 1])
            best = prev[j] + 1
            if cur[j - 1] + 1 < best:
                best = cur[j - 1] + 1
            if sub < best:
                best = sub
            cur[j] = best
        for j in range(lb + 1):
            prev[j] = cur[j]
    return prev[lb]
