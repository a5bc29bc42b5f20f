"""Co-lex orders: axiom checking, the maximum order of a DFA, chain
partitions and exhaustive search for small NFAs."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .automaton import Automaton, require_dfa
from .errors import AxiomViolationError, CapExceededError


@dataclass(frozen=True, eq=False)
class PartialOrder:
    """Strict partial order over ``0..n-1`` stored as a boolean matrix:
    ``less[u, v]`` means u < v."""

    less: np.ndarray

    def __post_init__(self):
        m = np.array(self.less, dtype=bool)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("order matrix must be square")
        m.setflags(write=False)
        object.__setattr__(self, "less", m)

    @property
    def n(self) -> int:
        return self.less.shape[0]

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "PartialOrder":
        """Transitive closure of ``pairs``; raises on a cycle."""
        m = np.zeros((n, n), dtype=bool)
        for u, v in pairs:
            m[u, v] = True
        m = _closure(m)
        if m.diagonal().any():
            raise ValueError("pairs contain a cycle")
        return cls(m)

    def lt(self, u: int, v: int) -> bool:
        return bool(self.less[u, v])

    def le(self, u: int, v: int) -> bool:
        return u == v or bool(self.less[u, v])

    def comparable(self, u: int, v: int) -> bool:
        return u == v or bool(self.less[u, v] or self.less[v, u])

    def is_strict_order(self) -> bool:
        m = self.less
        if m.diagonal().any() or (m & m.T).any():
            return False
        return bool((_closure(m) == m).all())

    def pairs(self):
        return [tuple(map(int, p)) for p in np.argwhere(self.less)]

    def __eq__(self, other):
        return isinstance(other, PartialOrder) and np.array_equal(self.less, other.less)

    def __hash__(self):
        return hash(self.less.tobytes())


def _closure(m: np.ndarray) -> np.ndarray:
    m = m.copy()
    for k in range(m.shape[0]):
        m |= np.outer(m[:, k], m[k, :])
    return m


# -- axioms --------------------------------------------------------------------


@dataclass
class AxiomReport:
    ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def _axiom1_allowed(a: Automaton) -> np.ndarray:
    """``allowed[u, v]`` iff max label into u is at most min label into v."""
    big = a.sigma + 1
    mx = np.array([big if x is None else x for x in a.max_in_label])
    mn = np.array([-2 if x is None else x for x in a.min_in_label])
    allowed = mx[:, None] <= mn[None, :]
    np.fill_diagonal(allowed, False)
    return allowed


def _edges_by_label(a: Automaton):
    groups = [[] for _ in range(a.sigma)]
    for u, v, x in a.edges:
        groups[x].append((u, v))
    return groups


def check_colex_axioms(a: Automaton, po: PartialOrder) -> AxiomReport:
    """Check a candidate order against both co-lex axioms.

    Violations are ``("order", u, v)`` when the relation is not a strict
    partial order, ``("labels", u, v)`` when u < v but u is entered by a
    larger label than some label entering v, and ``("edges", u, v, u2, v2)``
    when u < v, u is entered from u2 and v from v2 by the same label, but
    v2 < u2.
    """
    if po.n != a.n:
        raise ValueError("order and automaton sizes differ")
    viol = []
    if not po.is_strict_order():
        viol.append(("order",))
    allowed = _axiom1_allowed(a)
    for u, v in zip(*np.nonzero(po.less & ~allowed)):
        viol.append(("labels", int(u), int(v)))
    less = po.less
    for group in _edges_by_label(a):
        for (u2, u), (v2, v) in _ordered_pairs(group):
            if less[u, v] and u2 != v2 and not less[u2, v2]:
                viol.append(("edges", u, v, u2, v2))
    return AxiomReport(not viol, viol)


def _ordered_pairs(group):
    for e in group:
        for f in group:
            if e is not f:
                yield e, f


# -- maximum order of a DFA ----------------------------------------------------


def compute_max_colex_order(d: Automaton) -> PartialOrder:
    """Maximum co-lex order of a DFA.

    A pair (u, v) is dropped when the labels forbid u < v, or when it is
    reached by one label from a pair that was already dropped. Whatever
    survives is the order.
    """
    require_dfa(d)
    bad = ~_axiom1_allowed(d)
    np.fill_diagonal(bad, False)
    bad_list = bad.tolist()
    delta = d.delta
    stack = [(int(u), int(v)) for u, v in zip(*np.nonzero(bad))]
    while stack:
        u2, v2 = stack.pop()
        du, dv = delta[u2], delta[v2]
        if len(dv) < len(du):
            du, dv, swap = dv, du, True
        else:
            swap = False
        for x, t in du.items():
            w = dv.get(x)
            if w is None:
                continue
            u, v = (w, t) if swap else (t, w)
            if u != v and not bad_list[u][v]:
                bad_list[u][v] = True
                stack.append((u, v))
    less = ~np.array(bad_list, dtype=bool)
    np.fill_diagonal(less, False)
    return PartialOrder(less)


# -- chain partitions ----------------------------------------------------------


@dataclass(frozen=True)
class ChainPartition:
    """Chains listed smallest element first. The chain holding the source
    comes first; the rest are ordered by their smallest state id."""

    chains: tuple[tuple[int, ...], ...]
    antichain: tuple[int, ...]

    @property
    def width(self) -> int:
        return len(self.chains)

    def chain_of(self) -> list[int]:
        owner = [0] * sum(map(len, self.chains))
        for i, ch in enumerate(self.chains):
            for u in ch:
                owner[u] = i
        return owner

    def layout(self) -> list[int]:
        """States in transform order: by chain, then by position."""
        return [u for ch in self.chains for u in ch]


def chain_partition(po: PartialOrder, source: int = 0) -> ChainPartition:
    """Minimum chain partition with a maximum antichain as certificate.

    Chains come from a maximum matching in the comparability bipartite
    graph. The matching starts greedily (each element takes its smallest
    free successor) and is completed by augmenting paths, which keeps the
    result deterministic. The antichain is read off a minimum vertex cover.
    """
    n = po.n
    less = po.less
    succ = [list(map(int, np.nonzero(less[u])[0])) for u in range(n)]
    match_l = [-1] * n
    match_r = [-1] * n
    for u in range(n):
        for v in succ[u]:
            if match_r[v] < 0:
                match_l[u], match_r[v] = v, u
                break

    def augment(u, seen):
        for v in succ[u]:
            if v in seen:
                continue
            seen.add(v)
            if match_r[v] < 0 or augment(match_r[v], seen):
                match_l[u], match_r[v] = v, u
                return True
        return False

    for u in range(n):
        if match_l[u] < 0:
            augment(u, set())

    chains = []
    for u in range(n):
        if match_r[u] < 0:
            ch = [u]
            while match_l[ch[-1]] >= 0:
                ch.append(match_l[ch[-1]])
            chains.append(tuple(ch))
    chains.sort(key=lambda ch: (source not in ch, min(ch)))

    # alternating reachability from unmatched left vertices
    zl, zr = set(), set()
    stack = [u for u in range(n) if match_l[u] < 0]
    zl.update(stack)
    while stack:
        u = stack.pop()
        for v in succ[u]:
            if v not in zr and match_l[u] != v:
                zr.add(v)
                w = match_r[v]
                if w >= 0 and w not in zl:
                    zl.add(w)
                    stack.append(w)
    antichain = tuple(sorted(x for x in range(n) if x in zl and x not in zr))
    return ChainPartition(tuple(chains), antichain)


def dfa_width(d: Automaton) -> tuple[int, ChainPartition, PartialOrder]:
    po = compute_max_colex_order(d)
    cp = chain_partition(po, d.source)
    return cp.width, cp, po


def partition_from_chains(po: PartialOrder, chains, source: int = 0) -> ChainPartition:
    """Validate a user-supplied chain partition of ``po`` and normalise its
    chain order."""
    seen = sorted(u for ch in chains for u in ch)
    if seen != list(range(po.n)):
        raise ValueError("chains must partition the states")
    fixed = []
    for ch in chains:
        ch = sorted(ch, key=lambda u: int(po.less[:, u].sum()))
        for x, y in zip(ch, ch[1:]):
            if not po.lt(x, y):
                raise ValueError(f"states {x} and {y} are not comparable")
        fixed.append(tuple(ch))
    fixed.sort(key=lambda ch: (source not in ch, min(ch)))
    return ChainPartition(tuple(fixed), ())


# -- small NFAs ----------------------------------------------------------------


def _edge_constraints(a: Automaton):
    """Tuples (u, v, u2, v2): if u < v then u2 <= v2 must hold."""
    cons = []
    for group in _edges_by_label(a):
        for (u2, u), (v2, v) in _ordered_pairs(group):
            if u != v and u2 != v2:
                cons.append((u, v, u2, v2))
    return cons


def brute_force_nfa_width(a: Automaton, max_states: int = 5) -> tuple[int, PartialOrder]:
    """Smallest width over all co-lex orders of ``a``, by exhaustive search.

    Orders are grown one element at a time: a new element picks a
    down-closed set of smaller elements and an up-closed set of larger ones.
    Label compatibility filters the candidates, and the edge axiom is checked
    as soon as the four states it mentions are all placed.
    """
    n = a.n
    if n > max_states:
        raise CapExceededError(f"exhaustive search is capped at {max_states} states", max_states)
    allowed = _axiom1_allowed(a).tolist()
    cons_at = [[] for _ in range(n)]
    for c in _edge_constraints(a):
        cons_at[max(c)].append(c)
    below = [0] * n
    above = [0] * n
    best = [n + 1, None]

    def subsets(cands):
        for r in range(len(cands) + 1):
            for combo in combinations(cands, r):
                mask = 0
                for y in combo:
                    mask |= 1 << y
                yield mask

    def consistent(x):
        for u, v, u2, v2 in cons_at[x]:
            if below[v] >> u & 1 and not below[v2] >> u2 & 1:
                return False
        return True

    def width_now():
        m = np.zeros((n, n), dtype=bool)
        for v in range(n):
            for u in range(n):
                if below[v] >> u & 1:
                    m[u, v] = True
        po = PartialOrder(m)
        return chain_partition(po, a.source).width, po

    def place(x):
        if best[0] == 1:
            return
        if x == n:
            w, po = width_now()
            if w < best[0]:
                best[0], best[1] = w, po
            return
        down_c = [y for y in range(x) if allowed[y][x]]
        up_c = [y for y in range(x) if allowed[x][y]]
        ups = [m for m in subsets(up_c) if all(above[u] & ~m == 0 for u in _bits(m))]
        for dmask in subsets(down_c):
            if any(below[d] & ~dmask for d in _bits(dmask)):
                continue
            for umask in ups:
                if dmask & umask:
                    continue
                if any(above[d] & umask != umask for d in _bits(dmask)):
                    continue
                below[x], above[x] = dmask, umask
                for d in _bits(dmask):
                    above[d] |= 1 << x
                for u in _bits(umask):
                    below[u] |= 1 << x
                if consistent(x):
                    place(x + 1)
                for d in _bits(dmask):
                    above[d] &= ~(1 << x)
                for u in _bits(umask):
                    below[u] &= ~(1 << x)
                below[x] = above[x] = 0
                if best[0] == 1:
                    return

    place(0)
    return best[0], best[1]


def _bits(mask):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def maximal_colex_order(a: Automaton) -> PartialOrder:
    """A co-lex order of ``a`` that cannot be extended by any single pair.

    Candidate pairs are tried in a fixed order; each is added together with
    everything it forces (transitivity and the edge axiom) and kept only if
    the result still satisfies both axioms. Works for NFAs; for DFAs it is
    a slower route to the maximum order.
    """
    n = a.n
    allowed = _axiom1_allowed(a)
    cons = [[] for _ in range(n * n)]
    for u, v, u2, v2 in _edge_constraints(a):
        cons[u * n + v].append((u2, v2))
    less = np.zeros((n, n), dtype=bool)

    def extend(u, v):
        m = less.copy()
        todo = [(u, v)]
        while todo:
            x, y = todo.pop()
            if m[x, y]:
                continue
            if not allowed[x, y] or m[y, x]:
                return None
            # add x < y and close transitively
            lo = np.nonzero(m[:, x])[0].tolist() + [x]
            hi = np.nonzero(m[y, :])[0].tolist() + [y]
            for p in lo:
                for q in hi:
                    if p == q:
                        return None
                    if not m[p, q]:
                        if not allowed[p, q] or m[q, p]:
                            return None
                        m[p, q] = True
                        for u2, v2 in cons[p * n + q]:
                            if not m[u2, v2]:
                                todo.append((u2, v2))
        return m

    cands = sorted(
        (tuple(map(int, p)) for p in np.argwhere(allowed)),
        key=lambda p: (a.max_in_label[p[0]], a.min_in_label[p[1]], p),
    )
    for u, v in cands:
        if less[u, v] or less[v, u]:
            continue
        m = extend(u, v)
        if m is not None:
            less = m
    po = PartialOrder(less)
    report = check_colex_axioms(a, po)
    if not report:
        raise AxiomViolationError(f"greedy order broke an axiom: {report.violations[:3]}")
    return po


# -- presentation --------------------------------------------------------------


def hasse_edges(po: PartialOrder) -> list[tuple[int, int]]:
    less = po.less
    out = []
    for u, v in po.pairs():
        if not (less[u] & less[:, v]).any():
            out.append((u, v))
    return out


def to_dot(po: PartialOrder, names=None) -> str:
    names = names or [str(u + 1) for u in range(po.n)]
    lines = ["digraph order {", "  rankdir=BT;"]
    lines += [f'  "{names[u]}";' for u in range(po.n)]
    lines += [f'  "{names[u]}" -> "{names[v]}";' for u, v in hasse_edges(po)]
    lines.append("}")
    return "\n".join(lines) + "\n"
