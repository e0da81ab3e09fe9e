"""Bottom-up tree automata and the three-way density verdict.

A nondeterministic automaton (`TreeAutomaton`) stores its transition relation
as explicit 4-tuples (left_child, right_child, symbol, target) where ``None``
stands for the absent-child marker. A deterministic complete automaton
(`DeterministicTreeAutomaton`) stores a transition map plus an optional
``default`` target so sparse but complete transition tables stay small; every
(left, right, symbol) triple not listed explicitly maps to the default state.

The density decision works on the reachable part of a deterministic
automaton: build the state graph (an edge q -> q' whenever q can appear as a
child of a transition into q', with the sibling reachable or absent), take
its strongly connected components, and look at the terminal components that
are accepting-pure or rejecting-pure. A rejecting-pure one forces density 0,
with a forbidden subtree as witness; an accepting-pure one forces density 1,
with a forcing subtree; otherwise the density stays strictly between 0 and 1
in the limsup sense. Witness trees are minimal by size, with ties broken in
the canonical tree order, so all outputs are reproducible.
"""

from __future__ import annotations

import heapq
import itertools
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import CapExceeded, FormatError
from .trees import Alphabet, Node, Tree, canonical_key, compare_trees, format_tree

DEFAULT_SUBSET_CAP = 2**16

BOTTOM = None  # absent-child marker in transition tuples


class TreeAutomaton:
    """Nondeterministic bottom-up acceptor over labelled binary trees."""

    def __init__(self, alphabet: Alphabet, states: Sequence, transitions: Iterable[tuple], accepting: Iterable):
        self.alphabet = alphabet
        self.states = tuple(states)
        if len(set(self.states)) != len(self.states):
            raise ValueError("duplicate states")
        declared = set(self.states)
        seen = set()
        for entry in transitions:
            ql, qr, a, q = entry
            for child in (ql, qr):
                if child is not BOTTOM and child not in declared:
                    raise ValueError(f"undeclared child state {child!r}")
            if a not in alphabet:
                raise ValueError(f"undeclared symbol {a!r}")
            if q not in declared:
                raise ValueError(f"undeclared target state {q!r}")
            if (ql, qr, a, q) in seen:
                raise ValueError(f"duplicate transition {entry!r}")
            seen.add((ql, qr, a, q))
        self.transitions = tuple(sorted(seen, key=self._entry_key))
        self.accepting = frozenset(accepting)
        if not self.accepting <= declared:
            raise ValueError("accepting states must be declared")

    def _entry_key(self, entry):
        order = {q: i for i, q in enumerate(self.states)}
        ql, qr, a, q = entry

        def child_key(c):
            return -1 if c is BOTTOM else order[c]

        return (child_key(ql), child_key(qr), self.alphabet.index[a], order[q])

    def __repr__(self):
        return f"TreeAutomaton(states={len(self.states)}, transitions={len(self.transitions)})"


class DeterministicTreeAutomaton:
    """Complete deterministic bottom-up automaton.

    ``transitions`` maps (left, right, symbol) to the target state; triples
    not present map to ``default`` when one is given. Without a default the
    table must be total, which is verified at construction (and refused for
    automata too large to verify entry by entry).
    """

    TOTALITY_CHECK_LIMIT = 2_000_000

    def __init__(
        self,
        alphabet: Alphabet,
        states: Sequence,
        transitions: Dict[tuple, object],
        accepting: Iterable,
        default=None,
        validate: bool = True,
    ):
        self.alphabet = alphabet
        self.states = tuple(states)
        self.state_order = {q: i for i, q in enumerate(self.states)}
        self.transitions = dict(transitions)
        self.accepting = frozenset(accepting)
        self.default = default
        if validate:
            self._validate()

    def _validate(self):
        declared = set(self.states)
        if len(declared) != len(self.states):
            raise ValueError("duplicate states")
        if not self.accepting <= declared:
            raise ValueError("accepting states must be declared")
        if self.default is not None and self.default not in declared:
            raise ValueError("default state must be declared")
        for (ql, qr, a), q in self.transitions.items():
            for child in (ql, qr):
                if child is not BOTTOM and child not in declared:
                    raise ValueError(f"undeclared child state {child!r}")
            if a not in self.alphabet:
                raise ValueError(f"undeclared symbol {a!r}")
            if q not in declared:
                raise ValueError(f"undeclared target state {q!r}")
        if self.default is None:
            combos = (len(self.states) + 1) ** 2 * len(self.alphabet)
            if combos > self.TOTALITY_CHECK_LIMIT:
                raise ValueError(
                    "transition table too large to verify totality; supply a default state"
                )
            values = (BOTTOM,) + self.states
            for ql in values:
                for qr in values:
                    for a in self.alphabet:
                        if (ql, qr, a) not in self.transitions:
                            raise ValueError(f"missing transition ({ql!r},{qr!r},{a!r})")

    def transition(self, left, right, symbol):
        target = self.transitions.get((left, right, symbol))
        if target is None and (left, right, symbol) not in self.transitions:
            if self.default is None:
                raise ValueError(f"missing transition ({left!r},{right!r},{symbol!r})")
            return self.default
        return target

    def __repr__(self):
        return f"DeterministicTreeAutomaton(states={len(self.states)}, explicit={len(self.transitions)})"


@dataclass(frozen=True)
class DensityVerdict:
    """Outcome of the density decision.

    kind is "zero", "one" or "intermediate". For "zero" the witness is a
    forbidden subtree (no tree containing it is accepted); for "one" it is a
    forcing subtree (every tree containing it is accepted). ``sink`` names
    the state set certifying the verdict, in declared state order.
    """

    kind: str
    witness: Tree = None
    sink: Optional[Tuple] = None


def run(aut: DeterministicTreeAutomaton, t: Tree):
    """Bottom-up evaluation; returns the absent-child marker for the empty tree."""
    if t is None:
        return BOTTOM
    memo = {}
    stack = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        key = id(node)
        if key in memo:
            continue
        if node.label not in aut.alphabet:
            raise ValueError(f"label {node.label!r} not in alphabet")
        if not expanded:
            stack.append((node, True))
            if node.right is not None:
                stack.append((node.right, False))
            if node.left is not None:
                stack.append((node.left, False))
        else:
            left = memo[id(node.left)] if node.left is not None else BOTTOM
            right = memo[id(node.right)] if node.right is not None else BOTTOM
            memo[key] = aut.transition(left, right, node.label)
    return memo[id(t)]


def accepts(aut: DeterministicTreeAutomaton, t: Tree) -> bool:
    return run(aut, t) in aut.accepting


def run_states(aut: TreeAutomaton, t: Tree) -> FrozenSet:
    """Set of states some run ends in; the brute-force acceptor for NTAs."""
    if t is None:
        return frozenset()
    by_symbol: Dict[str, Dict[tuple, set]] = {}
    for ql, qr, a, q in aut.transitions:
        by_symbol.setdefault(a, {}).setdefault((ql, qr), set()).add(q)
    memo = {}
    stack = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        key = id(node)
        if key in memo:
            continue
        if node.label not in aut.alphabet:
            raise ValueError(f"label {node.label!r} not in alphabet")
        if not expanded:
            stack.append((node, True))
            if node.right is not None:
                stack.append((node.right, False))
            if node.left is not None:
                stack.append((node.left, False))
        else:
            lvals = memo[id(node.left)] if node.left is not None else (BOTTOM,)
            rvals = memo[id(node.right)] if node.right is not None else (BOTTOM,)
            table = by_symbol.get(node.label, {})
            out = set()
            for lv in lvals:
                for rv in rvals:
                    out |= table.get((lv, rv), set())
            memo[key] = frozenset(out)
    return memo[id(t)]


def accepts_nta(aut: TreeAutomaton, t: Tree) -> bool:
    return bool(run_states(aut, t) & aut.accepting)


def as_deterministic(aut: TreeAutomaton) -> Optional[DeterministicTreeAutomaton]:
    """The same automaton as a DTA when its relation is already a total function."""
    table = {}
    for ql, qr, a, q in aut.transitions:
        key = (ql, qr, a)
        if key in table:
            return None
        table[key] = q
    values = (BOTTOM,) + aut.states
    for ql in values:
        for qr in values:
            for a in aut.alphabet:
                if (ql, qr, a) not in table:
                    return None
    return DeterministicTreeAutomaton(
        aut.alphabet, aut.states, table, aut.accepting, validate=False
    )


def subset_name(subset: Sequence) -> str:
    return "{" + ",".join(str(q) for q in subset) + "}"


def determinize(aut: TreeAutomaton, max_states: int = DEFAULT_SUBSET_CAP) -> DeterministicTreeAutomaton:
    """Reachable-subset construction.

    States of the result are exactly the reachable subsets of the input's
    state set (the empty subset is the rejecting trap when reachable), so the
    output is reduced and complete by construction. Subset states are named
    "{q1,q2}" in declared state order.
    """
    order = {q: i for i, q in enumerate(aut.states)}
    index: Dict[str, Dict[tuple, set]] = {}
    for ql, qr, a, q in aut.transitions:
        index.setdefault(a, {}).setdefault((ql, qr), set()).add(q)

    def step(left, right, a):
        lvals = (BOTTOM,) if left is BOTTOM else left
        rvals = (BOTTOM,) if right is BOTTOM else right
        table = index.get(a, {})
        out = set()
        for lv in lvals:
            for rv in rvals:
                out |= table.get((lv, rv), set())
        return tuple(sorted(out, key=order.__getitem__))

    subsets: List[tuple] = []
    seen: Dict[tuple, int] = {}
    table: Dict[tuple, tuple] = {}

    def discover(subset):
        if subset not in seen:
            if len(subsets) >= max_states:
                raise CapExceeded(f"subset construction exceeds {max_states} states")
            seen[subset] = len(subsets)
            subsets.append(subset)

    for a in aut.alphabet:
        target = step(BOTTOM, BOTTOM, a)
        table[(BOTTOM, BOTTOM, a)] = target
        discover(target)
    processed = 0
    while processed < len(subsets):
        current = subsets[processed]
        processed += 1
        known = subsets[:processed]
        for other in known:
            for left, right in ((current, other), (other, current), (current, current)):
                for a in aut.alphabet:
                    key = (left, right, a)
                    if key in table:
                        continue
                    target = step(left, right, a)
                    table[key] = target
                    discover(target)
        for a in aut.alphabet:
            for pair in ((BOTTOM, current), (current, BOTTOM)):
                key = (pair[0], pair[1], a)
                if key in table:
                    continue
                target = step(pair[0], pair[1], a)
                table[key] = target
                discover(target)

    names = {subset: subset_name(subset) for subset in subsets}
    transitions = {}
    for (left, right, a), target in table.items():
        lname = BOTTOM if left is BOTTOM else names[left]
        rname = BOTTOM if right is BOTTOM else names[right]
        transitions[(lname, rname, a)] = names[target]
    accepting = {names[s] for s in subsets if set(s) & aut.accepting}
    return DeterministicTreeAutomaton(
        aut.alphabet,
        tuple(names[s] for s in subsets),
        transitions,
        accepting,
        validate=False,
    )


def _entries_of(aut) -> List[tuple]:
    if isinstance(aut, DeterministicTreeAutomaton):
        return [(ql, qr, a, q) for (ql, qr, a), q in aut.transitions.items()]
    return list(aut.transitions)


def reachable_states(aut) -> set:
    """States realised by some tree, via a linear worklist over the entries.

    For a deterministic automaton with a default state, the default becomes
    reachable as soon as the realised child values admit a combination that
    is not listed explicitly.
    """
    entries = _entries_of(aut)
    sigma = len(aut.alphabet)
    default = aut.default if isinstance(aut, DeterministicTreeAutomaton) else None

    occurs: Dict[object, List[int]] = {}
    remaining = []
    avail = set()
    queue = deque()
    enabled = 0

    def add_state(q):
        if q not in avail:
            avail.add(q)
            queue.append(q)

    for i, (ql, qr, a, q) in enumerate(entries):
        need = {c for c in (ql, qr) if c is not BOTTOM}
        remaining.append(len(need))
        for c in need:
            occurs.setdefault(c, []).append(i)
        if not need:
            enabled += 1
            add_state(q)

    while True:
        while queue:
            s = queue.popleft()
            for i in occurs.get(s, ()):
                remaining[i] -= 1
                if remaining[i] == 0:
                    enabled += 1
                    add_state(entries[i][3])
        if default is not None and default not in avail:
            combos = (len(avail) + 1) ** 2 * sigma
            if combos > enabled:
                add_state(default)
                continue
        break
    return avail


def state_graph(aut: DeterministicTreeAutomaton, reachable: Optional[set] = None) -> Dict[object, set]:
    """Adjacency of the state graph over the reachable part.

    Edge q -> q' iff some transition with q in a child slot and the sibling
    reachable-or-absent targets q'. Default-backed transitions contribute an
    edge q -> default exactly when some combination involving q is unlisted.
    """
    if reachable is None:
        reachable = reachable_states(aut)
    adj: Dict[object, set] = {q: set() for q in aut.states if q in reachable}
    sigma = len(aut.alphabet)
    explicit_cover: Dict[object, int] = {q: 0 for q in adj}

    def valid(child):
        return child is BOTTOM or child in reachable

    for (ql, qr, a), target in aut.transitions.items():
        if not (valid(ql) and valid(qr)):
            continue
        if ql is not BOTTOM:
            adj[ql].add(target)
            explicit_cover[ql] += 1
        if qr is not BOTTOM and qr != ql:
            adj[qr].add(target)
            explicit_cover[qr] += 1
    if aut.default is not None and aut.default in reachable:
        threshold = (2 * (len(adj) + 1) - 1) * sigma
        for q in adj:
            if explicit_cover[q] < threshold:
                adj[q].add(aut.default)
    return adj


def find_sinks(aut: DeterministicTreeAutomaton) -> List[Tuple]:
    """Accepting-pure or rejecting-pure terminal components of the state graph.

    Each returned set is closed under all transitions in either child slot
    (with reachable-or-absent siblings), so a run that enters it never
    leaves. Mixed terminal components certify neither verdict and are not
    returned. Ordered by declared state order of the smallest member.

    Implementation note: everything runs over positional int arrays in CSR
    layout so million-state sparse automata stay linear; reachability, the
    state graph, Tarjan and the purity filter happen in one pass.
    """
    states = aut.states
    n = len(states)
    pos = {q: i for i, q in enumerate(states)}
    sigma = len(aut.alphabet)
    has_default = aut.default is not None
    default_i = pos[aut.default] if has_default else -1

    ent_l: List[int] = []
    ent_r: List[int] = []
    ent_t: List[int] = []
    for (ql, qr, _a), t in aut.transitions.items():
        ent_l.append(-1 if ql is BOTTOM else pos[ql])
        ent_r.append(-1 if qr is BOTTOM else pos[qr])
        ent_t.append(pos[t])
    m = len(ent_t)

    # --- reachability: worklist over entries, CSR-indexed by child state
    deg = [0] * n
    for i in range(m):
        l = ent_l[i]
        r = ent_r[i]
        if l >= 0:
            deg[l] += 1
        if r >= 0 and r != l:
            deg[r] += 1
    off = [0] * (n + 1)
    for i in range(n):
        off[i + 1] = off[i] + deg[i]
    flat = [0] * off[n]
    cur = off[:-1]
    remaining = bytearray(m)
    avail = bytearray(n)
    stack: List[int] = []
    enabled = 0
    navail = 0
    for i in range(m):
        l = ent_l[i]
        r = ent_r[i]
        need = 0
        if l >= 0:
            flat[cur[l]] = i
            cur[l] += 1
            need += 1
        if r >= 0 and r != l:
            flat[cur[r]] = i
            cur[r] += 1
            need += 1
        remaining[i] = need
        if need == 0:
            enabled += 1
            t = ent_t[i]
            if not avail[t]:
                avail[t] = 1
                stack.append(t)
                navail += 1
    while True:
        while stack:
            s = stack.pop()
            for j in range(off[s], off[s + 1]):
                i = flat[j]
                rem = remaining[i] - 1
                remaining[i] = rem
                if rem == 0:
                    enabled += 1
                    t = ent_t[i]
                    if not avail[t]:
                        avail[t] = 1
                        stack.append(t)
                        navail += 1
        # a default-backed combination exists iff the explicit entries do
        # not cover every realised (left, right, symbol) triple
        if has_default and not avail[default_i] and (navail + 1) ** 2 * sigma > enabled:
            avail[default_i] = 1
            stack.append(default_i)
            navail += 1
            continue
        break

    # --- state graph over the reachable part, again CSR
    gdeg = [0] * n
    cover = [0] * n
    for i in range(m):
        l = ent_l[i]
        r = ent_r[i]
        if (l >= 0 and not avail[l]) or (r >= 0 and not avail[r]):
            continue
        if l >= 0:
            gdeg[l] += 1
            cover[l] += 1
        if r >= 0 and r != l:
            gdeg[r] += 1
            cover[r] += 1
    use_default_edges = has_default and avail[default_i]
    threshold = (2 * (navail + 1) - 1) * sigma
    if use_default_edges:
        for q in range(n):
            if avail[q] and cover[q] < threshold:
                gdeg[q] += 1
    goff = [0] * (n + 1)
    for i in range(n):
        goff[i + 1] = goff[i] + gdeg[i]
    gflat = [0] * goff[n]
    gcur = goff[:-1]
    for i in range(m):
        l = ent_l[i]
        r = ent_r[i]
        if (l >= 0 and not avail[l]) or (r >= 0 and not avail[r]):
            continue
        t = ent_t[i]
        if l >= 0:
            gflat[gcur[l]] = t
            gcur[l] += 1
        if r >= 0 and r != l:
            gflat[gcur[r]] = t
            gcur[r] += 1
    if use_default_edges:
        for q in range(n):
            if avail[q] and cover[q] < threshold:
                gflat[gcur[q]] = default_i
                gcur[q] += 1

    # --- iterative Tarjan over the reachable nodes
    NOVISIT = -1
    index = [NOVISIT] * n
    low = [0] * n
    onstack = bytearray(n)
    tstack: List[int] = []
    comp = [-1] * n
    ncomp = 0
    counter = 0
    work_v: List[int] = []
    work_c: List[int] = []
    for root in range(n):
        if not avail[root] or index[root] != NOVISIT:
            continue
        index[root] = low[root] = counter
        counter += 1
        tstack.append(root)
        onstack[root] = 1
        work_v.append(root)
        work_c.append(goff[root])
        while work_v:
            v = work_v[-1]
            cursor = work_c[-1]
            advanced = False
            end = goff[v + 1]
            while cursor < end:
                w = gflat[cursor]
                cursor += 1
                if index[w] == NOVISIT:
                    work_c[-1] = cursor
                    index[w] = low[w] = counter
                    counter += 1
                    tstack.append(w)
                    onstack[w] = 1
                    work_v.append(w)
                    work_c.append(goff[w])
                    advanced = True
                    break
                if onstack[w] and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            work_v.pop()
            work_c.pop()
            if work_v:
                u = work_v[-1]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                while True:
                    w = tstack.pop()
                    onstack[w] = 0
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1

    # --- terminal components and purity
    has_out = bytearray(ncomp)
    for q in range(n):
        if not avail[q]:
            continue
        cq = comp[q]
        for j in range(goff[q], goff[q + 1]):
            if comp[gflat[j]] != cq:
                has_out[cq] = 1
    acc = bytearray(n)
    for q in aut.accepting:
        acc[pos[q]] = 1
    # member lists only for the terminal components; there are few of those
    members: Dict[int, List[int]] = {}
    for q in range(n):
        if not avail[q]:
            continue
        c = comp[q]
        if has_out[c]:
            continue
        lst = members.get(c)
        if lst is None:
            members[c] = [q]
        else:
            lst.append(q)
    sinks = []
    for c, qs in members.items():
        inside = 0
        for q in qs:
            if acc[q]:
                inside += 1
        if inside == 0 or inside == len(qs):
            sinks.append(tuple(states[q] for q in qs))
    sinks.sort(key=lambda v: pos[v[0]])
    return sinks


class _Ranked:
    """Heap wrapper ordering same-size trees in the canonical order lazily."""

    __slots__ = ("tree", "alphabet")

    def __init__(self, tree, alphabet):
        self.tree = tree
        self.alphabet = alphabet

    def __lt__(self, other):
        return compare_trees(self.tree, other.tree, self.alphabet) < 0


def _saturate_witnesses(aut, stop_states: Optional[set] = None):
    """Minimal witness tree per reachable state (Knuth-style saturation).

    Candidates combine the already-final witnesses of child states, so the
    first pop of a state carries its minimal tree: size first, canonical
    order on ties. When ``stop_states`` is given, returns (state, tree) for
    the first finalised member; otherwise returns the full mapping.
    """
    alphabet = aut.alphabet
    symbols = alphabet.symbols
    entries = _entries_of(aut)
    explicit = aut.transitions if isinstance(aut, DeterministicTreeAutomaton) else None
    default = aut.default if isinstance(aut, DeterministicTreeAutomaton) else None

    occurs: Dict[object, List[int]] = {}
    remaining = bytearray(len(entries))
    heap: List[tuple] = []
    seq = itertools.count()

    def push(tree, state):
        heapq.heappush(heap, (tree.size, _Ranked(tree, alphabet), next(seq), state))

    for i, (ql, qr, a, q) in enumerate(entries):
        need = 0
        if ql is not BOTTOM:
            lst = occurs.get(ql)
            if lst is None:
                occurs[ql] = [i]
            else:
                lst.append(i)
            need = 1
        if qr is not BOTTOM and qr != ql:
            lst = occurs.get(qr)
            if lst is None:
                occurs[qr] = [i]
            else:
                lst.append(i)
            need += 1
        remaining[i] = need
        if need == 0:
            push(Node(a), q)

    default_pending = default is not None
    if default_pending:
        for a in symbols:
            if (BOTTOM, BOTTOM, a) not in explicit:
                push(Node(a), default)
                break

    best: Dict[object, Tree] = {}
    finalized: List[tuple] = []

    def default_candidates_for(state, tree):
        # Smallest default-backed candidate using this state as a child.
        # Absent-sibling combinations first (they have the smaller shape),
        # then pairs with the smallest already-final partner.
        for a in symbols:
            if (BOTTOM, state, a) not in explicit:
                return Node(a, None, tree)
        for a in symbols:
            if (state, BOTTOM, a) not in explicit:
                return Node(a, tree, None)
        hit_size = None
        options = []
        for other, other_tree in finalized:
            if hit_size is not None and other_tree.size > hit_size:
                break
            for a in symbols:
                if (other, state, a) not in explicit:
                    options.append(Node(a, other_tree, tree))
                if (state, other, a) not in explicit:
                    options.append(Node(a, tree, other_tree))
            if options and hit_size is None:
                hit_size = other_tree.size
        if not options:
            return None
        options.sort(key=lambda t: (t.size, _Ranked(t, alphabet)))
        return options[0]

    while heap:
        _, ranked, _, state = heapq.heappop(heap)
        if state in best:
            continue
        tree = ranked.tree
        best[state] = tree
        finalized.append((state, tree))
        if state == default:
            default_pending = False
        if stop_states is not None and state in stop_states:
            return state, tree
        for i in occurs.get(state, ()):
            remaining[i] -= 1
            if remaining[i] == 0:
                ql, qr, a, q = entries[i]
                if q not in best:
                    lt = best[ql] if ql is not BOTTOM else None
                    rt = best[qr] if qr is not BOTTOM else None
                    push(Node(a, lt, rt), q)
        if default_pending:
            cand = default_candidates_for(state, tree)
            if cand is not None:
                push(cand, default)
    if stop_states is not None:
        raise ValueError("no stop state is reachable")
    return best


def reachable_witnesses(aut) -> Dict[object, Tree]:
    """For each reachable state, a minimal tree some run of which ends there.

    Minimality gives the classical bound |T| <= 2**|Q| - 1. Works on both
    nondeterministic and deterministic automata; unreachable states are
    absent from the result, which lists states in declared order.
    """
    best = _saturate_witnesses(aut)
    return {q: best[q] for q in aut.states if q in best}


def _coerce_deterministic(aut, max_states: int = DEFAULT_SUBSET_CAP) -> DeterministicTreeAutomaton:
    if isinstance(aut, DeterministicTreeAutomaton):
        return aut
    dta = as_deterministic(aut)
    if dta is None:
        dta = determinize(aut, max_states=max_states)
    return dta


def decide_density(aut, max_states: int = DEFAULT_SUBSET_CAP) -> DensityVerdict:
    """Density 0, density 1, or strictly in between, with witness.

    Nondeterministic or partial input is determinized first (the reachable
    subset construction makes the rejecting trap reachable exactly when some
    tree genuinely has no run). Already-deterministic input keeps its state
    names in the verdict.
    """
    dta = _coerce_deterministic(aut, max_states)
    sinks = find_sinks(dta)
    zero = [v for v in sinks if not (set(v) & dta.accepting)]
    one = [v for v in sinks if set(v) <= dta.accepting]
    if zero:
        target = zero[0]
        _, tree = _saturate_witnesses(dta, stop_states=set(target))
        return DensityVerdict("zero", tree, target)
    if one:
        target = one[0]
        _, tree = _saturate_witnesses(dta, stop_states=set(target))
        return DensityVerdict("one", tree, target)
    return DensityVerdict("intermediate", None, None)


# ---------------------------------------------------------------------------
# Unranked languages through the first-child/next-sibling encoding.

_EMPTY_RIGHT = "e"
_BUSY_RIGHT = "f"


def _encoding_product(dta: DeterministicTreeAutomaton):
    """Product of the automaton with the root-has-no-right-child tracker.

    Product states are (state, flag) with flag "e" when the subtree's root
    has an empty right child. Returns (values, table) where values is the
    reachable product state list in discovery order and table maps
    (left, right, symbol) over values + the absent marker.
    """
    sigma = dta.alphabet.symbols
    values: List[tuple] = []
    seen = {}
    table: Dict[tuple, tuple] = {}

    def discover(v):
        if v not in seen:
            seen[v] = len(values)
            values.append(v)

    def step(left, right, a):
        base_l = left[0] if left is not None else BOTTOM
        base_r = right[0] if right is not None else BOTTOM
        flag = _EMPTY_RIGHT if right is None else _BUSY_RIGHT
        return (dta.transition(base_l, base_r, a), flag)

    for a in sigma:
        target = step(None, None, a)
        table[(None, None, a)] = target
        discover(target)
    processed = 0
    while processed < len(values):
        current = values[processed]
        processed += 1
        known = values[:processed]
        combos = [(current, None), (None, current), (current, current)]
        combos += [(current, other) for other in known if other != current]
        combos += [(other, current) for other in known if other != current]
        for left, right in combos:
            for a in sigma:
                key = (left, right, a)
                if key in table:
                    continue
                target = step(left, right, a)
                table[key] = target
                discover(target)
    return values, table


def _useful_states(values, table, accepting: set) -> set:
    """Backward closure from the accepting product states over the state graph."""
    rev: Dict[tuple, set] = {v: set() for v in values}
    for (left, right, _a), target in table.items():
        for child in (left, right):
            if child is not None:
                rev[target].add(child)
    useful = set(accepting)
    queue = deque(useful)
    while queue:
        v = queue.popleft()
        for p in rev.get(v, ()):
            if p not in useful:
                useful.add(p)
                queue.append(p)
    return useful


def _missing_pattern(values, table, sigma, useful, alphabet, witnesses):
    """Smallest (symbol, left-subtree) pattern never realised inside an
    accepted tree, or None. The left slot ranges over the absent marker and
    every reachable product state."""
    candidates = []
    slots = [None] + list(values)
    for q in slots:
        for a in sigma:
            if all(table[(q, r, a)] not in useful for r in slots):
                tree = None if q is None else witnesses[q]
                candidates.append((tree, a))
    if not candidates:
        return None
    return min(
        candidates,
        key=lambda item: (canonical_key(item[0], alphabet), alphabet.index[item[1]]),
    )


def decide_unranked(aut, max_states: int = DEFAULT_SUBSET_CAP) -> DensityVerdict:
    """Density verdict for the unranked language encoded by the automaton.

    The input must accept only trees in the encoding image (root without a
    right child). The verdict witness, when present, is the encoding
    conc_a(B, empty) of the forbidden (kind "zero") or forcing (kind "one")
    unranked subtree: an a-labelled node whose child forest decodes from B.
    """
    dta = _coerce_deterministic(aut, max_states)
    values, table = _encoding_product(dta)
    sigma = dta.alphabet.symbols

    for (q, flag) in values:
        if flag == _BUSY_RIGHT and q in dta.accepting:
            raise ValueError(
                "not an unranked encoding: the automaton accepts a tree whose root has a right child"
            )

    # Witnesses on the product automaton, for building pattern trees.
    product_entries = [(l, r, a, t) for (l, r, a), t in table.items()]
    product_states = list(values)
    product_nta = _ProductView(dta.alphabet, product_states, product_entries)
    witnesses = _saturate_witnesses(product_nta)

    accept_l = {v for v in values if v[1] == _EMPTY_RIGHT and v[0] in dta.accepting}
    useful = _useful_states(values, table, accept_l)
    hit = _missing_pattern(values, table, sigma, useful, dta.alphabet, witnesses)
    if hit is not None:
        tree, a = hit
        return DensityVerdict("zero", Node(a, tree, None), None)

    accept_c = {v for v in values if v[1] == _EMPTY_RIGHT and v[0] not in dta.accepting}
    useful_c = _useful_states(values, table, accept_c)
    hit = _missing_pattern(values, table, sigma, useful_c, dta.alphabet, witnesses)
    if hit is not None:
        tree, a = hit
        return DensityVerdict("one", Node(a, tree, None), None)
    return DensityVerdict("intermediate", None, None)


class _ProductView:
    """Just enough of the automaton interface for witness saturation."""

    def __init__(self, alphabet, states, entries):
        self.alphabet = alphabet
        self.states = tuple(states)
        self.transitions = tuple(entries)


# ---------------------------------------------------------------------------
# Text format


def parse_tree_automaton(text: str) -> TreeAutomaton:
    """Parse the line-based tree-automaton format.

    Directives: ``alphabet: a,b``, ``states: q0,q1``, ``accepting: q0``,
    and one ``trans: l,r,a -> q`` per transition with ``_`` for the absent
    child. ``#`` starts a comment; duplicate transitions are rejected.
    """
    alphabet = None
    states = None
    accepting = None
    transitions = []
    seen = set()
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
            if len(parts) != 3:
                raise FormatError(f"transition needs 'l,r,a -> q': {value!r}", lineno)
            lpart, rpart, sym = parts
            target = target.strip()
            declared = set(states)

            def child(token):
                if token == "_":
                    return BOTTOM
                if token not in declared:
                    raise FormatError(f"undeclared state {token!r}", lineno)
                return token

            ql, qr = child(lpart), child(rpart)
            if sym not in alphabet:
                raise FormatError(f"undeclared symbol {sym!r}", lineno)
            if target not in declared:
                raise FormatError(f"undeclared state {target!r}", lineno)
            entry = (ql, qr, sym, target)
            if entry in seen:
                raise FormatError(f"duplicate transition {value!r}", lineno)
            seen.add(entry)
            transitions.append(entry)
        else:
            raise FormatError(f"unknown directive {key!r}", lineno)
    if alphabet is None:
        raise FormatError("missing alphabet directive")
    if states is None:
        raise FormatError("missing states directive")
    if accepting is None:
        raise FormatError("missing accepting directive")
    for q in accepting:
        if q not in set(states):
            raise FormatError(f"accepting state {q!r} not declared")
    return TreeAutomaton(alphabet, states, transitions, accepting)


def verdict_json_dict(verdict: DensityVerdict) -> dict:
    """The documented JSON payload for a density verdict."""
    return {
        "kind": verdict.kind,
        "witness": format_tree(verdict.witness) if verdict.witness is not None else None,
        "sink": [str(q) for q in verdict.sink] if verdict.sink is not None else None,
    }
