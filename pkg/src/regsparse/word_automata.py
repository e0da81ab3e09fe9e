"""DFAs over finite words and the infix-completeness machinery.

Words are sequences of alphabet symbols; for single-character alphabets a
plain string works anywhere a word is expected. All searches are BFS with
letters tried in alphabet order, so every returned word is shortest and
lexicographically smallest among the shortest, and all outputs are
reproducible.

A language is infix complete when every word occurs as a factor of some
member. On a DFA whose states are all reachable this is equivalent to some
closed reachability class (an SCC no transition leaves) containing an
accepting state; the universal prefix x and the return bound k come straight
out of that class.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import CapExceeded, FormatError
from .trees import Alphabet

DEFAULT_SUBSET_CAP = 2**16

Word = Tuple[str, ...]


class Dfa:
    """Deterministic complete word automaton."""

    def __init__(self, alphabet: Alphabet, states: Sequence, initial, delta: Dict[tuple, object], accepting: Iterable):
        self.alphabet = alphabet
        self.states = tuple(states)
        if len(set(self.states)) != len(self.states):
            raise ValueError("duplicate states")
        declared = set(self.states)
        if initial not in declared:
            raise ValueError("initial state must be declared")
        self.initial = initial
        self.delta = dict(delta)
        self.accepting = frozenset(accepting)
        if not self.accepting <= declared:
            raise ValueError("accepting states must be declared")
        for (q, a), target in self.delta.items():
            if q not in declared or target not in declared:
                raise ValueError(f"undeclared state in transition ({q!r},{a!r})")
            if a not in alphabet:
                raise ValueError(f"undeclared symbol {a!r}")
        for q in self.states:
            for a in alphabet:
                if (q, a) not in self.delta:
                    raise ValueError(f"missing transition ({q!r},{a!r})")
        self.state_order = {q: i for i, q in enumerate(self.states)}

    def step(self, q, a):
        if a not in self.alphabet:
            raise ValueError(f"letter {a!r} not in alphabet")
        return self.delta[(q, a)]

    def run_from(self, q, word) -> object:
        for a in word:
            q = self.step(q, a)
        return q

    def accepts(self, word) -> bool:
        return self.run_from(self.initial, word) in self.accepting

    def reachable(self) -> List:
        seen = {self.initial}
        queue = deque([self.initial])
        while queue:
            q = queue.popleft()
            for a in self.alphabet:
                t = self.delta[(q, a)]
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
        return [q for q in self.states if q in seen]

    def __repr__(self):
        return f"Dfa(states={len(self.states)}, initial={self.initial!r})"


def run_dfa(d: Dfa, word) -> object:
    """Extended transition function from the initial state."""
    return d.run_from(d.initial, word)


@dataclass(frozen=True)
class ReachabilityPartition:
    """SCC partition of the reachable states, with per-class closed flags."""

    classes: Tuple[Tuple, ...]
    closed_flags: Tuple[bool, ...]

    def closed_classes(self) -> List[Tuple]:
        return [c for c, f in zip(self.classes, self.closed_flags) if f]

    def class_of(self, q) -> Tuple:
        for c in self.classes:
            if q in c:
                return c
        raise KeyError(q)


def _scc_partition(d: Dfa, states: Sequence) -> List[List]:
    # Iterative Tarjan over the given state set.
    in_scope = set(states)
    index: Dict[object, int] = {}
    low: Dict[object, int] = {}
    onstack = set()
    stack: List = []
    sccs: List[List] = []
    counter = [0]

    def neighbours(q):
        return [d.delta[(q, a)] for a in d.alphabet if d.delta[(q, a)] in in_scope]

    for root in states:
        if root in index:
            continue
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        onstack.add(root)
        work = [(root, iter(neighbours(root)))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    onstack.add(w)
                    work.append((w, iter(neighbours(w))))
                    advanced = True
                    break
                if w in onstack and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    onstack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(comp)
    return sccs


def _partition_over(d: Dfa, states: Sequence) -> ReachabilityPartition:
    order = d.state_order
    classes = []
    flags = []
    for comp in _scc_partition(d, states):
        members = tuple(sorted(comp, key=order.__getitem__))
        closed = all(d.delta[(q, a)] in set(comp) for q in comp for a in d.alphabet)
        classes.append(members)
        flags.append(closed)
    ranked = sorted(range(len(classes)), key=lambda i: order[classes[i][0]])
    return ReachabilityPartition(
        tuple(classes[i] for i in ranked), tuple(flags[i] for i in ranked)
    )


def reachability_partition(d: Dfa) -> ReachabilityPartition:
    """Reachability classes (SCCs) of the reachable part, numbered by the
    smallest member in declared state order."""
    return _partition_over(d, d.reachable())


def is_infix_complete(d: Dfa) -> bool:
    """True iff every word is a factor of some accepted word."""
    part = reachability_partition(d)
    return any(set(c) & d.accepting for c in part.closed_classes())


@dataclass(frozen=True)
class UniversalPrefix:
    """Prefix x and bound k: any v extends to x v y in L with |y| <= k."""

    x: Word
    k: int
    target_class: Tuple
    target_state: object


def _bfs_shortest(d: Dfa, source, targets: set) -> Optional[Word]:
    """Shortest word from source into targets; alphabet order breaks ties."""
    if source in targets:
        return ()
    seen = {source}
    queue = deque([(source, ())])
    while queue:
        q, path = queue.popleft()
        for a in d.alphabet:
            t = d.delta[(q, a)]
            if t in targets:
                return path + (a,)
            if t not in seen:
                seen.add(t)
                queue.append((t, path + (a,)))
    return None


def universal_prefix(d: Dfa) -> UniversalPrefix:
    """Witness for infix completeness.

    Picks the first closed accepting class C (class numbering order) and its
    first accepting state (declared order) as the anchor; x is the shortest
    word from the initial state to the anchor and k the worst-case shortest
    return length to the anchor from inside C.
    """
    part = reachability_partition(d)
    chosen = None
    for c in part.closed_classes():
        if set(c) & d.accepting:
            chosen = c
            break
    if chosen is None:
        raise ValueError("language is not infix complete")
    anchor = next(q for q in chosen if q in d.accepting)
    x = _bfs_shortest(d, d.initial, {anchor})
    if x is None:
        raise ValueError("anchor state unreachable")
    k = 0
    for q in chosen:
        ret = _bfs_shortest(d, q, {anchor})
        if ret is None:
            raise ValueError("closed class is not strongly connected")
        k = max(k, len(ret))
    return UniversalPrefix(x, k, chosen, anchor)


def completing_suffix(d: Dfa, up: UniversalPrefix, v) -> Word:
    """Shortest y with x v y accepted; |y| <= k by construction of k."""
    q = d.run_from(up.target_state, v)
    y = _bfs_shortest(d, q, set(d.accepting))
    if y is None:
        raise ValueError("no completing suffix exists; prefix witness is stale")
    return y


def trapping_word(d: Dfa) -> Word:
    """A word after which every state sits inside some closed class.

    Built by the iterative construction: process states in declared order,
    each time appending the shortest trap word of the state currently
    reached. Closed classes here are taken over the full state set so the
    guarantee covers unreachable states as well.
    """
    part = _partition_over(d, d.states)
    closed_union = set()
    for c in part.closed_classes():
        closed_union.update(c)
    trap_of: Dict[object, Word] = {}
    for q in d.states:
        w = _bfs_shortest(d, q, closed_union)
        if w is None:
            raise AssertionError("every state can reach a closed class")
        trap_of[q] = w
    v: Word = ()
    for q in d.states:
        v = v + trap_of[d.run_from(q, v)]
    return v


def shortest_accepted_word(d: Dfa) -> Optional[Word]:
    """Shortest member of the language, or None when it is empty."""
    return _bfs_shortest(d, d.initial, set(d.accepting))


def shortest_word_into(d: Dfa, targets: set) -> Optional[Word]:
    """Shortest word from the initial state into the target set."""
    return _bfs_shortest(d, d.initial, set(targets))


_STAR = object()  # fresh pre-initial marker for the star construction


def star_dfa(d: Dfa, max_states: int = DEFAULT_SUBSET_CAP) -> Dfa:
    """DFA for L(d)*, by accept-to-initial closure and subset construction.

    When the initial state is already accepting the plain subset automaton
    over closures of {q0} is sound; otherwise a fresh pre-initial marker
    keeps the empty word from contaminating re-entered subsets. Output
    states are named s0, s1, ... in BFS discovery order.
    """

    def closure(subset: frozenset) -> frozenset:
        if subset & d.accepting:
            return subset | {d.initial}
        return subset

    if d.initial in d.accepting:
        start = closure(frozenset([d.initial]))
    else:
        start = closure(frozenset([_STAR, d.initial]))

    def move(subset: frozenset, a) -> frozenset:
        return closure(frozenset(d.delta[(q, a)] for q in subset if q is not _STAR))

    names: Dict[frozenset, str] = {start: "s0"}
    order: List[frozenset] = [start]
    delta = {}
    queue = deque([start])
    while queue:
        subset = queue.popleft()
        for a in d.alphabet:
            target = move(subset, a)
            if target not in names:
                if len(order) >= max_states:
                    raise CapExceeded(f"star construction exceeds {max_states} subset states")
                names[target] = f"s{len(order)}"
                order.append(target)
                queue.append(target)
            delta[(names[subset], a)] = names[target]
    accepting = {
        names[s] for s in order if (s & d.accepting) or (_STAR in s)
    }
    return Dfa(d.alphabet, tuple(names[s] for s in order), "s0", delta, accepting)


def parse_dfa(text: str) -> Dfa:
    """Parse the line-based DFA format.

    Directives: ``alphabet: a,b``, ``states: q0,q1``, ``initial: q0``,
    ``accepting: q0`` (possibly empty), one ``trans: q,a -> q'`` per edge.
    The transition map must be total; missing or duplicate entries are
    rejected. ``#`` starts a comment.
    """
    alphabet = None
    states = None
    initial = None
    accepting = None
    delta = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise FormatError(f"expected 'key: value', got {line!r}", lineno)
        key, _, value = line.partition(":")
        key = key.strip()
        value = value.strip()
        if key == "alphabet":
            if alphabet is not None:
                raise FormatError("duplicate alphabet directive", lineno)
            try:
                alphabet = Alphabet(s.strip() for s in value.split(",") if s.strip())
            except ValueError as exc:
                raise FormatError(str(exc), lineno) from exc
        elif key == "states":
            if states is not None:
                raise FormatError("duplicate states directive", lineno)
            states = tuple(s.strip() for s in value.split(",") if s.strip())
            if not states:
                raise FormatError("empty states list", lineno)
        elif key == "initial":
            if initial is not None:
                raise FormatError("duplicate initial directive", lineno)
            initial = value
        elif key == "accepting":
            if accepting is not None:
                raise FormatError("duplicate accepting directive", lineno)
            accepting = tuple(s.strip() for s in value.split(",") if s.strip())
        elif key == "trans":
            if alphabet is None or states is None:
                raise FormatError("trans before alphabet/states", lineno)
            head, arrow, target = value.partition("->")
            if not arrow:
                raise FormatError(f"transition needs '->': {value!r}", lineno)
            parts = [p.strip() for p in head.split(",")]
            if len(parts) != 2:
                raise FormatError(f"transition needs 'q,a -> q2': {value!r}", lineno)
            q, a = parts
            target = target.strip()
            if q not in set(states):
                raise FormatError(f"undeclared state {q!r}", lineno)
            if a not in alphabet:
                raise FormatError(f"undeclared symbol {a!r}", lineno)
            if target not in set(states):
                raise FormatError(f"undeclared state {target!r}", lineno)
            if (q, a) in delta:
                raise FormatError(f"duplicate transition for ({q},{a})", lineno)
            delta[(q, a)] = target
        else:
            raise FormatError(f"unknown directive {key!r}", lineno)
    if alphabet is None:
        raise FormatError("missing alphabet directive")
    if states is None:
        raise FormatError("missing states directive")
    if initial is None:
        raise FormatError("missing initial directive")
    if accepting is None:
        raise FormatError("missing accepting directive")
    for q in states:
        for a in alphabet:
            if (q, a) not in delta:
                raise FormatError(f"missing transition for ({q},{a}); the map must be total")
    try:
        return Dfa(alphabet, states, initial, delta, accepting)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def word_str(word) -> str:
    """Human rendering of a word; symbols are concatenated."""
    return "".join(word)
