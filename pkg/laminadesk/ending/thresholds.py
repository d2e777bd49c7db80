"""Counting facts about long runs in circular 0/1 sequences.

For a circular sequence A with marked subset B, B_L is the part of B lying
in circular runs of marked entries of length at least L.
"""

from collections.abc import Sequence
from fractions import Fraction


def circular_runs(seq: Sequence[int]) -> list[int]:
    n = len(seq)
    if n == 0:
        return []
    if all(seq):
        return [n]
    start = next(i for i in range(n) if not seq[i])
    runs, run = [], 0
    for k in range(1, n + 1):
        if seq[(start + k) % n]:
            run += 1
        elif run:
            runs.append(run)
            run = 0
    if run:
        runs.append(run)
    return runs


def long_run_fraction(seq: Sequence[int], L: int) -> Fraction:
    """|B_L| / |A|."""
    if not seq:
        return Fraction(0)
    return Fraction(sum(r for r in circular_runs(seq) if r >= L), len(seq))


def worst_long_run(n: int, k: int, L: int) -> int:
    """Least |B_L| over circular sequences of length n with k marked entries."""
    if not 0 <= k <= n:
        raise ValueError(f"{k} marked entries in a sequence of length {n}")
    gaps = n - k
    if gaps == 0:
        return n if n >= L else 0
    if k <= gaps * (L - 1):
        return 0
    # L - 1 in every gap but one, the rest in a single long run
    return k - (gaps - 1) * (L - 1)


def smallest_threshold(n: int, L: int) -> Fraction | None:
    """Least t = k/n with |B_L| > n/2 for every sequence with at least k marked entries; None if none."""
    best = None
    for k in range(n, -1, -1):
        if 2 * worst_long_run(n, k, L) > n:
            best = k
        else:
            break
    return None if best is None else Fraction(best, n)
