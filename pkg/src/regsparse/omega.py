"""Regular omega-languages given as finite unions of U_i V_i^omega pairs.

The measure of such a language under iid uniform letters is positive exactly
when some pair has a nonempty U_i and an infix-complete V_i*. In that case a
whole cylinder almost surely stays inside the language: there is a prefix
x = u w (u accepted by U_i, w leading the V_i*-automaton into a closed
accepting class) such that a random continuation of x lies in U_i V_i^omega
with conditional probability one.

The certificate is a loop automaton: the V*-automaton extended with a chain
of fresh states that detects the block word w after each visit to the
anchor accepting state. Any run that visits the end of the chain infinitely
often splits the input into blocks accepted by V*, and the chain end sits in
a closed class of the automaton, so the induced Markov chain visits it
infinitely often almost surely. Degenerate case: when w is empty the initial
state itself is accepting and closed, and it doubles as the marked state.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import FormatError
from .word_automata import (
    DEFAULT_SUBSET_CAP,
    Dfa,
    Word,
    completing_suffix,
    is_infix_complete,
    reachability_partition,
    shortest_accepted_word,
    star_dfa,
    universal_prefix,
    word_str,
)


class OmegaRegularLanguage:
    """Finite union of pairs (U, V) denoting U V^omega, over one alphabet."""

    def __init__(self, pairs: Sequence[Tuple[Dfa, Dfa]]):
        pairs = tuple(pairs)
        if not pairs:
            raise ValueError("an omega-regular language needs at least one pair")
        alphabet = pairs[0][0].alphabet
        for u, v in pairs:
            if u.alphabet != alphabet or v.alphabet != alphabet:
                raise ValueError("all component DFAs must share one alphabet")
        self.pairs = pairs
        self.alphabet = alphabet


@dataclass(frozen=True)
class MarkedDfa:
    """A DFA with one marked state whose infinite recurrence certifies membership."""

    dfa: Dfa
    marked: object


@dataclass(frozen=True)
class CylinderWitness:
    """Cylinder certificate for positive measure.

    Every omega-word extending x whose loop-automaton run visits the marked
    state infinitely often lies in U V^omega, and that happens with
    conditional probability 1 given the prefix x.
    """

    pair_index: int
    u: Word
    w: Word
    x: Word
    loop_automaton: MarkedDfa
    guarantee: str


@dataclass(frozen=True)
class MeasureVerdict:
    kind: str  # "zero" | "positive"
    witness: Optional[CylinderWitness] = None


@dataclass(frozen=True)
class MarkovChainView:
    """The letter-driven Markov chain of a DFA, over its reachable states."""

    states: Tuple
    matrix: Tuple[Tuple[Fraction, ...], ...]
    closed_classes: Tuple[Tuple, ...]


def markov_view(d: Dfa) -> MarkovChainView:
    """Transition matrix p[q][q'] = (#letters with delta(q,a)=q') / |alphabet|."""
    states = tuple(d.reachable())
    index = {q: i for i, q in enumerate(states)}
    sigma = len(d.alphabet)
    rows = []
    for q in states:
        row = [Fraction(0)] * len(states)
        for a in d.alphabet:
            row[index[d.delta[(q, a)]]] += Fraction(1, sigma)
        rows.append(tuple(row))
    part = reachability_partition(d)
    return MarkovChainView(states, tuple(rows), tuple(part.closed_classes()))


def loop_automaton(vstar: Dfa, w, max_states: int = DEFAULT_SUBSET_CAP) -> MarkedDfa:
    """The block-detecting extension of a V*-automaton for the word w.

    Requires delta_hat(q0, w) to lie in a closed class containing an
    accepting state. Fresh chain states track the letters of w from the
    anchor accepting state; a full match ends in the marked state, a
    mismatch falls back to the state the original automaton would have
    reached from the anchor. For empty w the initial state must itself be
    accepting inside a closed class and becomes the marked state.
    """
    w = tuple(w)
    part = reachability_partition(vstar)
    landing = vstar.run_from(vstar.initial, w)
    cls = part.class_of(landing)
    closed = cls in part.closed_classes()
    if not closed or not (set(cls) & vstar.accepting):
        raise ValueError("w must lead into a closed class containing an accepting state")
    if not w:
        if vstar.initial not in vstar.accepting:
            raise ValueError(
                "empty w needs an accepting initial state to serve as the marked state"
            )
        return MarkedDfa(vstar, vstar.initial)

    anchor = next(q for q in cls if q in vstar.accepting)
    existing = set(vstar.states)
    chain = []
    for i in range(1, len(w) + 1):
        name = f"w{i}"
        while name in existing:
            name = name + "'"
        existing.add(name)
        chain.append(name)

    delta = dict(vstar.delta)
    for a in vstar.alphabet:
        delta[(anchor, a)] = chain[0] if a == w[0] else vstar.delta[(anchor, a)]
    for i in range(len(w) - 1):
        for a in vstar.alphabet:
            if a == w[i + 1]:
                delta[(chain[i], a)] = chain[i + 1]
            else:
                delta[(chain[i], a)] = vstar.run_from(anchor, w[: i + 1] + (a,))
    restart = vstar.run_from(vstar.initial, w)
    for a in vstar.alphabet:
        delta[(chain[-1], a)] = vstar.delta[(restart, a)]

    states = vstar.states + tuple(chain)
    out = Dfa(vstar.alphabet, states, vstar.initial, delta, vstar.accepting)
    return MarkedDfa(out, chain[-1])


def witness_prefix(u_dfa: Dfa, v_dfa: Dfa, pair_index: int = 0,
                   max_states: int = DEFAULT_SUBSET_CAP) -> CylinderWitness:
    """Build the cylinder certificate for one qualifying pair."""
    u = shortest_accepted_word(u_dfa)
    if u is None:
        raise ValueError("U accepts no word")
    vstar = star_dfa(v_dfa, max_states=max_states)
    part = reachability_partition(vstar)
    target = None
    for cls in part.closed_classes():
        if set(cls) & vstar.accepting:
            target = cls
            break
    if target is None:
        raise ValueError("V* is not infix complete")
    w = _shortest_into(vstar, set(target))
    loop = loop_automaton(vstar, w, max_states=max_states)
    x = u + w
    guarantee = (
        f"Every omega-word extending {word_str(x) or 'the empty prefix'} whose run of the "
        f"loop automaton visits {loop.marked!r} infinitely often lies in U V^omega; "
        "a random continuation does so with probability 1."
    )
    return CylinderWitness(pair_index, u, w, x, loop, guarantee)


def _shortest_into(d: Dfa, targets: set) -> Word:
    from .word_automata import shortest_word_into

    w = shortest_word_into(d, targets)
    if w is None:
        raise ValueError("target class unreachable")
    return w


def decide_measure(language: OmegaRegularLanguage,
                   max_states: int = DEFAULT_SUBSET_CAP) -> MeasureVerdict:
    """Positive iff some pair has a nonempty U and an infix-complete V*.

    Pairs are examined in declared order and the first qualifying one
    supplies the witness. Degenerate pairs (empty U, or V without nonempty
    words) never qualify: their V* is not infix complete over a nonempty
    alphabet.
    """
    for i, (u_dfa, v_dfa) in enumerate(language.pairs):
        if shortest_accepted_word(u_dfa) is None:
            continue
        if not is_infix_complete(star_dfa(v_dfa, max_states=max_states)):
            continue
        return MeasureVerdict("positive", witness_prefix(u_dfa, v_dfa, i, max_states))
    return MeasureVerdict("zero", None)


def rich_prefix_stream(v_dfa: Dfa, budget: int,
                       max_states: int = DEFAULT_SUBSET_CAP) -> Word:
    """Prefix of a rich omega-word of V^omega covering all short factors.

    Concatenates the completed words x v y over every v of length at most
    ``budget`` in length-lexicographic order; each piece lies in V*, so the
    whole output does, and every such v occurs in it as a factor.
    """
    vstar = star_dfa(v_dfa, max_states=max_states)
    if not is_infix_complete(vstar):
        raise ValueError("V* is not infix complete")
    up = universal_prefix(vstar)
    out: List[str] = []
    for length in range(budget + 1):
        for v in itertools.product(v_dfa.alphabet.symbols, repeat=length):
            y = completing_suffix(vstar, up, v)
            out.extend(up.x + v + y)
    return tuple(out)


def parse_omega_file(text: str) -> List[Tuple[str, str]]:
    """Parse the omega file format: one ``pair: U-path, V-path`` per line."""
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise FormatError(f"expected 'pair: U,V', got {line!r}", lineno)
        key, _, value = line.partition(":")
        if key.strip() != "pair":
            raise FormatError(f"unknown directive {key.strip()!r}", lineno)
        parts = [p.strip() for p in value.split(",")]
        if len(parts) != 2 or not all(parts):
            raise FormatError(f"pair needs two file paths, got {value!r}", lineno)
        pairs.append((parts[0], parts[1]))
    if not pairs:
        raise FormatError("omega file declares no pairs")
    return pairs
