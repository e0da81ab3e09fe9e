"""Exact integer combinatorics over trees and words.

Everything here is arbitrary-precision: counts are Python ints, ratios are
`fractions.Fraction`. Floats appear only in presentation helpers.

The subtree-avoidance counts a_n come from the coefficient recurrence of the
generating function f(0,z) = 1 - z^m + z*sigma*f(0,z)^2:

    a_0 = 1
    a_n = sigma * sum_{j=0}^{n-1} a_j * a_{n-1-j} - [n == m]   (n >= 1)

where m is the pattern size and sigma the alphabet size. The count only
depends on (m, sigma), never on the concrete pattern tree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import List, Sequence

from .errors import CapExceeded

MAX_PROFILE_SIZE = 200


def catalan(n: int) -> int:
    """The n-th Catalan number, binom(2n, n) / (n + 1), exactly."""
    return math.comb(2 * n, n) // (n + 1)


def catalan_table(n_max: int) -> List[int]:
    """[C_0, ..., C_n_max] via the multiplicative recurrence."""
    table = [1]
    for n in range(n_max):
        table.append(table[-1] * 2 * (2 * n + 1) // (n + 2))
    return table


def avoiding_series(m: int, n_max: int, sigma: int) -> List[int]:
    """[a_0, ..., a_n_max] for patterns of size m over sigma symbols."""
    if m < 1:
        raise ValueError("pattern size must be at least 1")
    if sigma < 1:
        raise ValueError("alphabet size must be at least 1")
    a = [1]
    for n in range(1, n_max + 1):
        conv = sum(a[j] * a[n - 1 - j] for j in range(n))
        a.append(sigma * conv - (1 if n == m else 0))
    return a


def count_avoiding(m: int, n: int, sigma: int) -> int:
    """Number of size-n trees over sigma symbols avoiding a fixed size-m subtree."""
    return avoiding_series(m, n, sigma)[n]


@dataclass(frozen=True)
class DensityPoint:
    """Exact density of a language among all size-n trees (or words)."""

    n: int
    accepted: int
    total: int
    ratio: Fraction

    def __post_init__(self):
        if self.accepted > self.total:
            raise ValueError("accepted exceeds total")


def _transition_index(aut):
    # Map (left_idx, right_idx) -> tuple of target indices per symbol,
    # with index len(states) standing for the absent-child marker.
    from .tree_automata import DeterministicTreeAutomaton

    if not isinstance(aut, DeterministicTreeAutomaton):
        raise ValueError("exact counting needs a complete deterministic automaton")
    states = aut.states
    idx = {q: i for i, q in enumerate(states)}
    bottom = len(states)
    sigma = aut.alphabet.symbols
    values = list(states) + [None]

    def value_of(i):
        return values[i]

    table = {}
    for li in range(bottom + 1):
        for ri in range(bottom + 1):
            targets = tuple(
                idx[aut.transition(value_of(li), value_of(ri), a)] for a in sigma
            )
            table[(li, ri)] = targets
    return idx, bottom, table


def _accepted_per_size(aut, n_max: int) -> List[int]:
    """DP: number of accepted trees per size, 0..n_max, exact."""
    idx, bottom, table = _transition_index(aut)
    accepting = {idx[q] for q in aut.accepting}
    width = bottom + 1
    # counts[k][i] = number of size-k trees whose run ends in state i
    # (i == bottom is the absent-child marker, realised only by size 0).
    counts = [[0] * width for _ in range(n_max + 1)]
    counts[0][bottom] = 1
    out = [0] * (n_max + 1)
    for k in range(1, n_max + 1):
        row = counts[k]
        for j in range(k):
            left = counts[j]
            right = counts[k - 1 - j]
            for li, lcount in enumerate(left):
                if not lcount:
                    continue
                for ri, rcount in enumerate(right):
                    if not rcount:
                        continue
                    weight = lcount * rcount
                    for ti in table[(li, ri)]:
                        row[ti] += weight
        out[k] = sum(row[i] for i in accepting)
    return out


def count_accepted_trees(aut, n: int) -> int:
    """|L(aut) ∩ B_n| for a complete deterministic bottom-up automaton."""
    return _accepted_per_size(aut, n)[n]


def count_accepted_words(dfa, n: int) -> int:
    """|L(dfa) ∩ Σ^n| by path counting over the transition function."""
    states = dfa.states
    idx = {q: i for i, q in enumerate(states)}
    vec = [0] * len(states)
    vec[idx[dfa.initial]] = 1
    # multiplicity[i][j] = number of letters taking state i to state j
    mult = [[0] * len(states) for _ in states]
    for i, q in enumerate(states):
        for a in dfa.alphabet:
            mult[i][idx[dfa.delta[(q, a)]]] += 1
    for _ in range(n):
        nxt = [0] * len(states)
        for i, c in enumerate(vec):
            if not c:
                continue
            for j, m in enumerate(mult[i]):
                if m:
                    nxt[j] += c * m
        vec = nxt
    return sum(vec[idx[q]] for q in dfa.accepting)


def density_profile(aut, n_max: int, cap: int = MAX_PROFILE_SIZE) -> List[DensityPoint]:
    """Exact density points for n = 0..n_max."""
    if n_max > cap:
        raise CapExceeded(f"profile size {n_max} exceeds cap {cap}")
    accepted = _accepted_per_size(aut, n_max)
    sigma = len(aut.alphabet)
    cats = catalan_table(n_max)
    points = []
    for n in range(n_max + 1):
        total = cats[n] * sigma**n
        points.append(DensityPoint(n, accepted[n], total, Fraction(accepted[n], total)))
    return points


def ratio_decimal(ratio: Fraction, digits: int = 17) -> str:
    """Decimal rendering of an exact ratio with the given significant digits."""
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(ratio.numerator) / Decimal(ratio.denominator))


def profile_csv(points: Sequence[DensityPoint]) -> str:
    """CSV rendering: header n,accepted,total,ratio; the ratio cell carries
    both the exact fraction p/q and a 17-significant-digit decimal."""
    lines = ["n,accepted,total,ratio"]
    for p in points:
        cell = f"{p.ratio.numerator}/{p.ratio.denominator}={ratio_decimal(p.ratio)}"
        lines.append(f"{p.n},{p.accepted},{p.total},{cell}")
    return "\n".join(lines) + "\n"
