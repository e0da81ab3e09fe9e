"""Samplers and Monte-Carlo estimators: exactness, determinism, merging."""

from collections import Counter
from fractions import Fraction

import pytest
from scipy.stats import chi2

from regsparse.counting import catalan
from regsparse.errors import CapExceeded
from regsparse.omega import witness_prefix
from regsparse.sampling import (
    EstimateReport,
    estimate_marked_recurrence,
    estimate_tree_density,
    merge_counts,
    sample_bst,
    sample_trees,
    sample_uniform_tree,
    sample_word,
)
from regsparse.trees import Alphabet, format_tree, size
from regsparse.counting import density_profile

AB = Alphabet(["a", "b"])
A1 = Alphabet(["a"])

SIGNIFICANCE = 1e-3


def chi_square_uniform(counts, total, n_outcomes):
    expected = total / n_outcomes
    stat = sum((c - expected) ** 2 / expected for c in counts)
    # outcomes that never appeared still contribute their expectation
    stat += (n_outcomes - len(counts)) * expected
    return stat


def assert_uniform(observed: Counter, n_outcomes: int, total: int):
    stat = chi_square_uniform(list(observed.values()), total, n_outcomes)
    threshold = chi2.ppf(1 - SIGNIFICANCE, df=n_outcomes - 1)
    assert stat <= threshold, (stat, threshold)


# --- determinism ------------------------------------------------------------------

def test_samplers_are_deterministic():
    for maker in (sample_uniform_tree, sample_bst):
        a = maker(AB, 9, 123)
        b = maker(AB, 9, 123)
        assert format_tree(a) == format_tree(b)
    assert sample_word(AB, 64, 5) == sample_word(AB, 64, 5)
    r1 = estimate_tree_density_fixture()
    r2 = estimate_tree_density_fixture()
    assert r1 == r2


def estimate_tree_density_fixture():
    from conftest import load_dta

    return estimate_tree_density(load_dta("avoid_leaf_a.ta"), 12, 500, 7)


def test_different_seeds_differ_somewhere():
    outs = {format_tree(sample_uniform_tree(AB, 12, seed)) for seed in range(8)}
    assert len(outs) > 1


# --- base cases --------------------------------------------------------------------

def test_uniform_base_cases():
    assert sample_uniform_tree(AB, 0, 1) is None
    t = sample_uniform_tree(AB, 1, 2)
    assert size(t) == 1
    with pytest.raises(CapExceeded):
        sample_uniform_tree(AB, 11, 3, max_size=10)


def test_bst_base_cases():
    with pytest.raises(ValueError):
        sample_bst(AB, 0, 1)
    assert size(sample_bst(AB, 1, 4)) == 1
    with pytest.raises(CapExceeded):
        sample_bst(AB, 11, 3, max_size=10)


def test_word_base_cases():
    assert sample_word(AB, 0, 9) == ()
    assert len(sample_word(AB, 17, 9)) == 17


# --- exact uniformity ----------------------------------------------------------------

def test_uniform_leaf_labels_fair():
    counts = Counter(format_tree(tree) for tree in sample_trees(AB, 1, 11, 10_000))
    assert set(counts) == {"a", "b"}
    assert_uniform(counts, 2, 10_000)


def test_uniform_census_exact_small_sizes():
    # full outcome census with at least 1000 samples per outcome
    for alphabet, n in ((AB, 2), (AB, 3), (AB, 4), (A1, 3), (A1, 4)):
        n_outcomes = catalan(n) * len(alphabet) ** n
        total = 1000 * n_outcomes
        counts = Counter(
            format_tree(tree)
            for tree in sample_trees(alphabet, n, 17, total)
        )
        assert len(counts) == n_outcomes
        assert_uniform(counts, n_outcomes, total)


def test_uniform_census_n3_forty_outcomes():
    total = 40_000
    counts = Counter(format_tree(t) for t in sample_trees(AB, 3, 40, total))
    assert len(counts) == 40
    assert_uniform(counts, 40, total)


# --- binary search tree law ------------------------------------------------------------

def test_bst_two_nodes_split_evenly():
    shapes = Counter(
        ("left" if t.left is not None else "right")
        for t in sample_trees(AB, 2, 23, 8_000, distribution="bst")
    )
    assert_uniform(shapes, 2, 8_000)


def test_bst_left_size_marginal_uniform_at_20():
    total = 40_000
    counts = Counter(
        size(t.left) for t in sample_trees(AB, 20, 29, total, distribution="bst")
    )
    assert set(counts) <= set(range(20))
    assert_uniform(counts, 20, total)


def test_bst_empty_left_frequency_at_50():
    total = 20_000
    hits = sum(
        1 for t in sample_trees(A1, 50, 31, total, distribution="bst")
        if t.left is None
    )
    p_hat = hits / total
    stderr = (0.02 * 0.98 / total) ** 0.5
    assert abs(p_hat - 0.02) <= 3 * stderr


# --- word statistics ---------------------------------------------------------------------

def test_letter_frequencies_fair():
    counts = Counter()
    trials = 100
    n = 10_000
    for i in range(trials):
        counts.update(sample_word(AB, n, 1000 + i))
    total = trials * n
    p_hat = counts["a"] / total
    stderr = (0.5 * 0.5 / total) ** 0.5
    assert abs(p_hat - 0.5) <= 5 * stderr


# --- estimators ------------------------------------------------------------------------------

def test_estimate_all_trees_is_exactly_one(tree_corpus):
    report = estimate_tree_density(tree_corpus["all_trees.ta"][1], 15, 400, 3)
    assert report.point == 1
    assert report.stderr == 0.0


def test_estimator_matches_exact_ratio(tree_corpus):
    trials = 2500
    for name, (_, dta, _) in tree_corpus.items():
        for n in (10, 40):
            exact = density_profile(dta, n)[n].ratio
            report = estimate_tree_density(dta, n, trials, 97, distribution="uniform")
            stderr = max(report.stderr, (float(exact) * (1 - float(exact)) / trials) ** 0.5, 1e-9)
            assert abs(float(report.point) - float(exact)) <= 4 * stderr, (name, n)


def test_estimate_example_r_bst_near_one_over_n(tree_corpus):
    report = estimate_tree_density(tree_corpus["example_r.ta"][1], 50, 20_000, 13,
                                   distribution="bst")
    stderr = max(report.stderr, 1e-6)
    assert abs(float(report.point) - 1 / 50) <= 3 * stderr


def test_parallel_partition_invariance(tree_corpus):
    dta = tree_corpus["avoid_leaf_a.ta"][1]
    seq = estimate_tree_density(dta, 10, 3000, 41, jobs=1)
    par = estimate_tree_density(dta, 10, 3000, 41, jobs=3)
    assert (seq.successes, seq.trials) == (par.successes, par.trials)


def test_merge_counts_is_order_independent():
    parts = [(3, 10), (0, 5), (7, 12)]
    a = merge_counts(parts)
    b = merge_counts(list(reversed(parts)))
    assert a == b == EstimateReport.from_counts(10, 27)
    assert a.point == Fraction(10, 27)


def test_estimate_marked_recurrence_examples(word_corpus):
    witness = witness_prefix(word_corpus["eps_only.dfa"], word_corpus["ends_ab.dfa"])
    report = estimate_marked_recurrence(witness.loop_automaton, witness.w, 200, 1000, 0)
    assert report.point >= Fraction(99, 100)

    degenerate = witness_prefix(word_corpus["single_letter.dfa"], word_corpus["sigma_star.dfa"])
    report = estimate_marked_recurrence(degenerate.loop_automaton, degenerate.w, 10, 200, 1)
    assert report.point == 1
    report = estimate_marked_recurrence(degenerate.loop_automaton, degenerate.w, 0, 200, 2)
    assert report.point == 0


def test_estimate_marked_recurrence_jobs_invariance(word_corpus):
    witness = witness_prefix(word_corpus["eps_only.dfa"], word_corpus["ends_ab.dfa"])
    a = estimate_marked_recurrence(witness.loop_automaton, witness.w, 50, 2100, 5, jobs=1)
    b = estimate_marked_recurrence(witness.loop_automaton, witness.w, 50, 2100, 5, jobs=4)
    assert (a.successes, a.trials) == (b.successes, b.trials)


def test_zero_trials_report():
    report = EstimateReport.from_counts(0, 0)
    assert report.trials == 0 and report.point == 0 and report.stderr == 0.0
