"""Seeded random generation and Monte-Carlo estimators.

Randomness comes from numpy's PCG64 generator. Determinism contract: one
build of this package maps equal (seed, parameters) to equal outputs, byte
for byte; bit-stability across numpy versions is not promised. Streams are
split by derived seeds: logical block b of a master seed s draws from
``SeedSequence([s, b])``. Estimators cut their trials into fixed-size blocks
of 1024, so the (successes, trials) totals never depend on how blocks are
distributed over workers and ``jobs`` cannot change any result.

Uniform trees are sampled by exact Catalan-weighted splits: the left size k
is chosen with probability C_k * C_{n-1-k} / C_n using arbitrary-precision
integers, then labels are drawn iid. The split scan walks the two ends of
the weight sequence inward, which is where almost all of the mass sits.
Random binary search trees instead draw the left size uniformly.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import sqrt
from typing import List, Tuple

import numpy as np

from .counting import catalan_table
from .errors import CapExceeded
from .omega import MarkedDfa
from .trees import Alphabet, Node, Tree

MAX_SAMPLE_SIZE = 10**6
TRIAL_BLOCK = 1024


def block_seed(master: int, block: int) -> np.random.SeedSequence:
    """The documented stream-split rule: block i of master seed s."""
    return np.random.SeedSequence([int(master), int(block)])


def _rng(master: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(master))))


def _block_rng(master: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(block_seed(master, block)))


def _rand_below(rng: np.random.Generator, bound: int) -> int:
    """Uniform integer in [0, bound) for arbitrary-precision bounds."""
    if bound <= 0:
        raise ValueError("bound must be positive")
    nbits = bound.bit_length()
    nbytes = (nbits + 7) // 8
    shift = nbytes * 8 - nbits
    while True:
        r = int.from_bytes(rng.bytes(nbytes), "big") >> shift
        if r < bound:
            return r


def _uniform_split_fn(cats: List[int]):
    """Split sampler with probability C_k * C_{n-1-k} / C_n, exactly.

    Weights per subtree size are cached; the scan walks the two ends of the
    weight sequence inward because that is where nearly all the mass sits.
    """
    cache = {}

    def split(rng: np.random.Generator, n: int) -> int:
        weights = cache.get(n)
        if weights is None:
            weights = [cats[k] * cats[n - 1 - k] for k in range(n)]
            cache[n] = weights
        r = _rand_below(rng, cats[n])
        lo, hi = 0, n - 1
        while True:
            w = weights[lo]
            if r < w:
                return lo
            r -= w
            if hi == lo:
                raise AssertionError("split weights must sum to C_n")
            w = weights[hi]
            if r < w:
                return hi
            r -= w
            lo += 1
            hi -= 1
            if lo > hi:
                raise AssertionError("split weights must sum to C_n")

    return split


def _build_tree(rng: np.random.Generator, n: int, symbols: Tuple[str, ...],
                split) -> Tree:
    # Iterative pre-order construction: draw the split, then the root label,
    # then recurse left before right.
    sigma = len(symbols)
    results: List[Tree] = []
    stack: List[tuple] = [("build", n)]
    while stack:
        op, arg = stack.pop()
        if op == "build":
            if arg == 0:
                results.append(None)
                continue
            k = split(rng, arg)
            label = symbols[int(rng.integers(0, sigma))]
            stack.append(("cons", label))
            stack.append(("build", arg - 1 - k))
            stack.append(("build", k))
        else:
            right = results.pop()
            left = results.pop()
            results.append(Node(arg, left, right))
    return results[0]


def sample_uniform_tree(alphabet: Alphabet, n: int, seed: int,
                        max_size: int = MAX_SAMPLE_SIZE) -> Tree:
    """One tree, exactly uniform over all size-n trees with these labels."""
    if n > max_size:
        raise CapExceeded(f"sample size {n} exceeds cap {max_size}")
    rng = _rng(seed)
    return _build_tree(rng, n, alphabet.symbols, _uniform_split_fn(catalan_table(n)))


def sample_bst(alphabet: Alphabet, n: int, seed: int,
               max_size: int = MAX_SAMPLE_SIZE) -> Tree:
    """One random binary search tree: left sizes uniform, labels iid."""
    if n < 1:
        raise ValueError("binary search trees have at least one node")
    if n > max_size:
        raise CapExceeded(f"sample size {n} exceeds cap {max_size}")
    rng = _rng(seed)
    return _build_tree(rng, n, alphabet.symbols,
                       lambda r, m: int(r.integers(0, m)))


def sample_word(alphabet: Alphabet, n: int, seed: int) -> Tuple[str, ...]:
    """n iid uniform letters."""
    rng = _rng(seed)
    draws = rng.integers(0, len(alphabet), size=n)
    return tuple(alphabet.symbols[int(i)] for i in draws)


def sample_trees(alphabet: Alphabet, n: int, seed: int, count: int,
                 distribution: str = "uniform",
                 max_size: int = MAX_SAMPLE_SIZE) -> List[Tree]:
    """A stream of independent samples.

    Samples come in blocks of TRIAL_BLOCK; block b draws sequentially from
    block_seed(seed, b), so extending the count never changes earlier items.
    """
    if distribution not in ("uniform", "bst"):
        raise ValueError(f"unknown distribution {distribution!r}")
    if distribution == "bst" and n < 1:
        raise ValueError("binary search trees have at least one node")
    if n > max_size:
        raise CapExceeded(f"sample size {n} exceeds cap {max_size}")
    if distribution == "uniform":
        split = _uniform_split_fn(catalan_table(n))
    else:
        def split(r, m):
            return int(r.integers(0, m))
    out = []
    block = 0
    while len(out) < count:
        rng = _block_rng(seed, block)
        for _ in range(min(TRIAL_BLOCK, count - len(out))):
            out.append(_build_tree(rng, n, alphabet.symbols, split))
        block += 1
    return out


@dataclass(frozen=True)
class EstimateReport:
    """Monte-Carlo estimate with its binomial standard error."""

    trials: int
    successes: int
    point: Fraction
    stderr: float

    @staticmethod
    def from_counts(successes: int, trials: int) -> "EstimateReport":
        if trials <= 0:
            return EstimateReport(0, 0, Fraction(0), 0.0)
        point = Fraction(successes, trials)
        p = float(point)
        return EstimateReport(trials, successes, point, sqrt(p * (1.0 - p) / trials))


def merge_counts(parts: List[Tuple[int, int]]) -> EstimateReport:
    """Combine (successes, trials) block results; order independent."""
    successes = sum(s for s, _ in parts)
    trials = sum(t for _, t in parts)
    return EstimateReport.from_counts(successes, trials)


def _run_blocks(total_trials: int, seed: int, block_fn, jobs: int = 1) -> List[Tuple[int, int]]:
    blocks = []
    start = 0
    index = 0
    while start < total_trials:
        count = min(TRIAL_BLOCK, total_trials - start)
        blocks.append((index, count))
        start += count
        index += 1
    if jobs > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(lambda b: block_fn(seed, *b), blocks))
    return [block_fn(seed, *b) for b in blocks]


def estimate_tree_density(aut, n: int, trials: int, seed: int,
                          distribution: str = "uniform", jobs: int = 1,
                          max_size: int = MAX_SAMPLE_SIZE) -> EstimateReport:
    """Fraction of random size-n trees the automaton accepts."""
    from .tree_automata import _coerce_deterministic, run

    if distribution not in ("uniform", "bst"):
        raise ValueError(f"unknown distribution {distribution!r}")
    if distribution == "bst" and n < 1:
        raise ValueError("binary search trees have at least one node")
    if n > max_size:
        raise CapExceeded(f"sample size {n} exceeds cap {max_size}")
    dta = _coerce_deterministic(aut)
    symbols = dta.alphabet.symbols
    if distribution == "uniform":
        split = _uniform_split_fn(catalan_table(n))
    else:
        def split(r, m):
            return int(r.integers(0, m))

    def block_fn(master, block_index, count):
        rng = _block_rng(master, block_index)
        successes = 0
        for _ in range(count):
            tree = _build_tree(rng, n, symbols, split)
            if run(dta, tree) in dta.accepting:
                successes += 1
        return successes, count

    return merge_counts(_run_blocks(trials, seed, block_fn, jobs))


def estimate_marked_recurrence(loop_aut: MarkedDfa, x, horizon: int, trials: int,
                               seed: int, jobs: int = 1) -> EstimateReport:
    """Fraction of random continuations of x visiting the marked state twice.

    The run consumes x first, then ``horizon`` random letters; marked-state
    visits are counted after every consumed letter.
    """
    d = loop_aut.dfa
    marked = loop_aut.marked
    symbols = d.alphabet.symbols
    sigma = len(symbols)
    x = tuple(x)
    state_after_x = d.initial
    visits_in_x = 0
    for a in x:
        state_after_x = d.step(state_after_x, a)
        if state_after_x == marked:
            visits_in_x += 1

    def block_fn(master, block_index, count):
        rng = _block_rng(master, block_index)
        successes = 0
        for _ in range(count):
            state = state_after_x
            visits = visits_in_x
            letters = rng.integers(0, sigma, size=horizon)
            for i in letters:
                state = d.delta[(state, symbols[i])]
                if state == marked:
                    visits += 1
            if visits >= 2:
                successes += 1
        return successes, count

    return merge_counts(_run_blocks(trials, seed, block_fn, jobs))
