"""Shared fixtures: corpus automata and brute-force enumeration oracles.

The oracle forest enumerates every labelled tree up to a size bound with
full structural sharing (each distinct tree is one fresh node over shared
children), so containment flags and automaton runs memoise by object
identity and the whole sweep stays linear in the number of trees.
"""

from pathlib import Path

import pytest
from hypothesis import settings

from regsparse.trees import Alphabet, Node
from regsparse.tree_automata import as_deterministic, parse_tree_automaton
from regsparse.word_automata import parse_dfa

settings.register_profile("suite", derandomize=True, max_examples=60, deadline=None)
settings.load_profile("suite")

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

TREE_CORPUS_KINDS = {
    "avoid_leaf_a.ta": "zero",
    "contains_leaf_a.ta": "one",
    "example_r.ta": "intermediate",
    "size_parity.ta": "intermediate",
    "all_trees.ta": "one",
    "empty_lang.ta": "zero",
}


def corpus_path(name: str) -> Path:
    return CORPUS / name


def load_ta(name: str):
    return parse_tree_automaton(corpus_path(name).read_text())


def load_dta(name: str):
    dta = as_deterministic(load_ta(name))
    assert dta is not None, f"{name} should be deterministic and complete"
    return dta


def load_dfa(name: str):
    return parse_dfa(corpus_path(name).read_text())


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS


@pytest.fixture(scope="session")
def ab() -> Alphabet:
    return Alphabet(["a", "b"])


@pytest.fixture(scope="session")
def single() -> Alphabet:
    return Alphabet(["a"])


def shared_forest(alphabet: Alphabet, n_max: int):
    """All trees of size 0..n_max with structural sharing.

    Returns (by_size, order): by_size[n] lists every size-n tree exactly
    once; order lists all nodes with children strictly earlier, so a single
    forward pass can evaluate any bottom-up function by id-memoisation.
    """
    by_size = {0: [None]}
    order = []
    for n in range(1, n_max + 1):
        bucket = []
        for k in range(n):
            for left in by_size[k]:
                for right in by_size[n - 1 - k]:
                    for a in alphabet.symbols:
                        node = Node(a, left, right)
                        bucket.append(node)
                        order.append(node)
        by_size[n] = bucket
    return by_size, order


def contains_flags(order, pattern):
    """id -> bool: does the tree contain the pattern as an induced subtree."""
    flags = {}

    def get(node):
        return False if node is None else flags[id(node)]

    for node in order:
        flags[id(node)] = node == pattern or get(node.left) or get(node.right)
    return flags


def run_flags(order, dta):
    """id -> run state of the deterministic automaton, over the whole forest."""
    res = {}
    transition = dta.transition
    for node in order:
        left = res[id(node.left)] if node.left is not None else None
        right = res[id(node.right)] if node.right is not None else None
        res[id(node)] = transition(left, right, node.label)
    return res


@pytest.fixture(scope="session")
def forest_ab():
    return shared_forest(Alphabet(["a", "b"]), 8)


@pytest.fixture(scope="session")
def forest_a():
    return shared_forest(Alphabet(["a"]), 8)


@pytest.fixture(scope="session")
def tree_corpus():
    """name -> (TreeAutomaton, DeterministicTreeAutomaton, expected kind)."""
    out = {}
    for name, kind in TREE_CORPUS_KINDS.items():
        nta = load_ta(name)
        out[name] = (nta, as_deterministic(nta), kind)
    return out


@pytest.fixture(scope="session")
def word_corpus():
    names = [
        "contains_ab.dfa", "ab_star.dfa", "ends_ab.dfa", "sigma_star.dfa",
        "aa_only.dfa", "eps_only.dfa", "empty_lang.dfa", "single_letter.dfa",
    ]
    return {name: load_dfa(name) for name in names}
