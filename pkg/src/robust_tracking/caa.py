"""Communication attack approximation.

Converts a budget of blocked communication links into an equivalent number
of sensing attacks: the worst case splits the team as evenly as possible, so
the largest surviving subgroup has ``n_max`` robots and the other
``N - n_max`` robots are treated as if their sensing had been removed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceeded


@dataclass(frozen=True)
class CaaResult:
    n: int
    alpha_c: int
    n_max: int
    alpha_cs: int
    e_r: int
    ebar: tuple[int, ...]


def ebar(N: int, n: int) -> int:
    """Most links a team of N can keep when no subgroup exceeds n robots."""
    if not 1 <= n <= N:
        raise ValueError(f"need 1 <= n <= N, got n={n}, N={N}")
    q = N // n
    r = N - n * q
    return q * n * (n - 1) // 2 + r * (r - 1) // 2


def caa(N: int, alpha_c: int) -> CaaResult:
    if N < 1:
        raise ValueError("N must be positive")
    total = N * (N - 1) // 2
    if alpha_c < 0:
        raise ValueError("alpha_c must be non-negative")
    if alpha_c > total:
        raise BudgetExceeded(f"alpha_c={alpha_c} exceeds the {total} links of {N} robots")
    e_r = total - alpha_c
    table = tuple(ebar(N, n) for n in range(1, N + 1))
    # ebar(N, N) == total >= e_r, so the scan always stops
    n_max = next(n for n, e in enumerate(table, start=1) if e_r <= e)
    return CaaResult(N, alpha_c, n_max, N - n_max, e_r, table)
