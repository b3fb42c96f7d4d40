"""Shared sweep helpers for the test suite."""

from limachor.admissibility import is_admissible


def admissible_pairs(max_abs_p: int, max_n: int, min_n: int = 4):
    """All admissible (p, N) with 2 <= |p| <= max_abs_p, min_n <= N <= max_n."""
    pairs = []
    for n in range(min_n, max_n + 1):
        for mag in range(2, max_abs_p + 1):
            for p in (mag, -mag):
                if is_admissible(p, n).admissible:
                    pairs.append((p, n))
    return pairs
