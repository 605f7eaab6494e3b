"""Seeded randomized search for restricted-MDS matrices with full verification.

Entries are drawn from a counter-based SHA-256 stream keyed per entry by
(seed, attempt, row, column), so a (seed, parameters) pair reproduces the
same matrices on every platform and under any thread count.
"""

from __future__ import annotations

import hashlib
import math
from typing import Optional

from .matrix import IntMatrix
from .verify import is_rmds

_WORD_MAX = 1 << 64


def _entry_value(seed: int, attempt: int, row: int, col: int, span: int) -> int:
    """Unbiased value in [0, span) from the per-entry hash stream."""
    rejection_bound = _WORD_MAX - (_WORD_MAX % span)
    ctr = 0
    while True:
        digest = hashlib.sha256(
            f"{seed}/{attempt}/{row}/{col}/{ctr}".encode()
        ).digest()
        for off in range(0, 32, 8):
            word = int.from_bytes(digest[off : off + 8], "big")
            if word < rejection_bound:
                return word % span
        ctr += 1


def sample_matrix(rows: int, n: int, weight: int, seed: int, attempt: int) -> IntMatrix:
    """rows x n matrix with entries i.i.d. uniform on {-weight,..,weight}."""
    if rows < 1 or n < 1:
        raise ValueError("matrix dimensions must be positive")
    if weight < 0:
        raise ValueError("weight bound must be >= 0")
    span = 2 * weight + 1
    return IntMatrix.from_rows(
        [
            [_entry_value(seed, attempt, i, j, span) - weight for j in range(n)]
            for i in range(rows)
        ]
    )


def theorem3_rate_cap(weight: int) -> int:
    """Largest MDS rate the alphabet {-weight,..,weight} can support: k^(k+1), k = 2W+1."""
    k = 2 * weight + 1
    return k ** (k + 1)


def search_rmds(
    n: int,
    m: int,
    r: int,
    q: int,
    weight: int,
    seed: int,
    max_attempts: int,
    cap: Optional[int] = None,
    threads: int = 1,
) -> tuple[Optional[IntMatrix], int]:
    """First sampled rm x n matrix whose every m-row block is EQ_q.

    Returns (matrix, attempts) on success and (None, max_attempts) when the
    budget is exhausted.  Parameter sets whose rate exceeds the alphabet-size
    bound are refused outright, since no such matrix exists.
    """
    if n < 1 or m < 1 or r < 1:
        raise ValueError("n, m and r must be positive")
    if max_attempts < 1:
        raise ValueError("max_attempts must be >= 1")
    rate_cap = theorem3_rate_cap(weight)
    if r > rate_cap:
        raise ValueError(
            f"MDS rate {r} exceeds the alphabet-size bound {rate_cap} "
            f"for weight {weight}; no such matrix exists"
        )
    for attempt in range(max_attempts):
        candidate = sample_matrix(r * m, n, weight, seed, attempt)
        if is_rmds(candidate, m, q, cap=cap, threads=threads) is None:
            return candidate, attempt + 1
    return None, max_attempts


def suggest_params(n: int, r: int, q: int, multiplier: int = 4) -> tuple[int, int]:
    """Default (m, weight) for a search: m = ceil(n / log2 n), weight = max(c*r, 2)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if r < 1:
        raise ValueError("r must be >= 1")
    if q < 2:
        raise ValueError("arity q must be at least 2")
    m = math.ceil(n / math.log2(n))
    return m, max(multiplier * r, 2)
