"""Subset construction and the width-based size bounds."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .automaton import Automaton, isomorphic, minimize
from .errors import AlphabetMismatchError, CapExceededError, EmptyLanguageError
from .order import dfa_width

DEFAULT_CAP = 1 << 20


@dataclass
class PowersetResult:
    dfa: Automaton
    subsets: list[tuple[int, ...]]  # subsets[i] = NFA states behind DFA state i

    def stats(self) -> dict:
        return {"states": self.dfa.n, "edges": self.dfa.e}


def powerset_construct(a: Automaton, cap: int = DEFAULT_CAP) -> PowersetResult:
    """Reachable part of the subset construction, built breadth-first with
    labels visited in alphabet order. The empty set is never created."""
    start = (a.source,)
    index = {start: 0}
    subsets = [start]
    edges = []
    queue = deque([start])
    out = a.out_edges
    while queue:
        cur = queue.popleft()
        i = index[cur]
        moves: dict[int, set[int]] = {}
        for u in cur:
            for x, v in out[u]:
                moves.setdefault(x, set()).add(v)
        for x in sorted(moves):
            nxt = tuple(sorted(moves[x]))
            j = index.get(nxt)
            if j is None:
                if len(subsets) >= cap:
                    raise CapExceededError(f"subset construction exceeded {cap} states", cap)
                j = index[nxt] = len(subsets)
                subsets.append(nxt)
                queue.append(nxt)
            edges.append((i, j, x))
    finals = [i for i, s in enumerate(subsets) if not a.finals.isdisjoint(s)]
    dfa = Automaton(a.alphabet, len(subsets), 0, finals, edges)
    return PowersetResult(dfa, subsets)


def nfa_membership(a: Automaton, word) -> bool:
    return a.accepts(word)


def nfa_equivalent(a: Automaton, b: Automaton, cap: int = DEFAULT_CAP) -> bool:
    if a.alphabet != b.alphabet:
        raise AlphabetMismatchError("automata use different alphabets")
    try:
        ma = minimize(powerset_construct(a, cap).dfa)
    except EmptyLanguageError:
        ma = None
    try:
        mb = minimize(powerset_construct(b, cap).dfa)
    except EmptyLanguageError:
        mb = None
    if ma is None or mb is None:
        return ma is mb
    return isomorphic(ma, mb)


@dataclass
class BoundReport:
    n: int
    p: int
    powerset_states: int
    powerset_width: int
    state_bound: int
    width_bound: int

    @property
    def states_ok(self) -> bool:
        return self.powerset_states <= self.state_bound

    @property
    def width_ok(self) -> bool:
        return self.powerset_width <= self.width_bound

    @property
    def ok(self) -> bool:
        return self.states_ok and self.width_ok

    def as_dict(self) -> dict:
        return {
            "n": self.n, "p": self.p,
            "powerset_states": self.powerset_states,
            "powerset_width": self.powerset_width,
            "state_bound": self.state_bound,
            "width_bound": self.width_bound,
            "states_ok": self.states_ok, "width_ok": self.width_ok,
        }


def state_bound(n: int, p: int) -> int:
    return (1 << p) * (n - p + 1) - 1


def check_powerset_bounds(a: Automaton, p: int, cap: int = DEFAULT_CAP) -> BoundReport:
    """Compare the subset construction of ``a`` with the bounds implied by
    a co-lex order of width ``p``. Any valid upper bound on the width of
    ``a`` may be passed; the bounds grow with ``p``."""
    if not 1 <= p <= a.n:
        raise ValueError("p must lie in 1..n")
    res = powerset_construct(a, cap)
    w, _, _ = dfa_width(res.dfa)
    return BoundReport(a.n, p, res.dfa.n, w, state_bound(a.n, p), (1 << p) - 1)
