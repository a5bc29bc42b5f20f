"""Deterministic width of a regular language.

A language has deterministic width at least k exactly when its minimum DFA
has k distinct states u_1..u_k, words mu_j leading from the source to u_j,
and one nonempty word gamma labelling a cycle at every u_j, such that gamma
is co-lex larger than every mu_j or smaller than every mu_j, and gamma is not
a suffix of any mu_j. This module searches for such witnesses with
dynamic programs over co-lex-extremal paths, replays them independently, and
turns them into decisions and bounds.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from itertools import combinations

from .automaton import Automaton, minimize, require_dfa
from .errors import BudgetError, NotMinimumError
from .order import dfa_width

MUS_BELOW = "mus_below_gamma"
GAMMA_BELOW = "gamma_below_mus"

DEFAULT_BUDGET = 256 * 1024 * 1024
# rough cost of one table entry (dict slot, key tuple, back pointer)
ENTRY_BYTES = 100


def colex_less(x, y) -> bool:
    """Co-lex comparison: read both words from the right."""
    return tuple(reversed(x)) < tuple(reversed(y))


def is_suffix(x, y) -> bool:
    """Whether ``x`` is a suffix of ``y``."""
    x, y = tuple(x), tuple(y)
    return len(x) <= len(y) and y[len(y) - len(x):] == x


@dataclass(frozen=True)
class WitnessCertificate:
    k: int
    states: tuple[int, ...]
    mus: tuple[tuple[int, ...], ...]
    gamma: tuple[int, ...]
    side: str

    def as_dict(self, alphabet=None) -> dict:
        d = asdict(self)
        if alphabet is not None:
            show = lambda w: " ".join(alphabet[a] for a in w)  # noqa: E731
            d["mus"] = [show(m) for m in self.mus]
            d["gamma"] = show(self.gamma)
        d["states"] = [u + 1 for u in self.states]
        return d


def replay_certificate(d: Automaton, w: WitnessCertificate) -> bool:
    """Check a certificate against ``d`` directly, without any tables."""
    delta = require_dfa(d).delta

    def run(u, word):
        for a in word:
            u = delta[u].get(a)
            if u is None:
                return None
        return u

    if w.k < 2 or len(w.states) != w.k or len(w.mus) != w.k:
        return False
    if len(set(w.states)) != w.k or not w.gamma:
        return False
    for u, mu in zip(w.states, w.mus):
        if run(d.source, mu) != u or run(u, w.gamma) != u:
            return False
        if is_suffix(w.gamma, mu):
            return False
        if w.side == MUS_BELOW and not colex_less(mu, w.gamma):
            return False
        if w.side == GAMMA_BELOW and not colex_less(w.gamma, mu):
            return False
        if w.side not in (MUS_BELOW, GAMMA_BELOW):
            return False
    return True


class _Meter:
    def __init__(self, budget_bytes):
        self.budget = budget_bytes
        self.entries = 0

    def add(self, k):
        self.entries += k
        if self.budget is not None and self.entries * ENTRY_BYTES > self.budget:
            raise BudgetError(
                "witness tables exceeded the memory budget; try bounded search",
                self.entries * ENTRY_BYTES, self.budget,
            )


class ExtremalPaths:
    """For each length up to ``cap``, the co-lex smallest (or largest) label
    string of a walk from ``start`` to each node.

    Strings are kept as back pointers. Within one length, nodes are ranked by
    their string, so extending by one symbol compares ``(symbol, rank of the
    predecessor)``: co-lex order looks at the last symbol first.
    """

    def __init__(self, start, succ, cap: int, largest: bool, meter: _Meter | None = None):
        self.largest = largest
        self.back = [{start: None}]
        ranks = {start: 0}
        for _ in range(cap):
            best = {}
            for node, r in ranks.items():
                for a, nxt in succ(node):
                    key = (a, r)
                    cur = best.get(nxt)
                    if cur is None or (key > cur[0] if largest else key < cur[0]):
                        best[nxt] = (key, node)
            if meter is not None:
                meter.add(len(best))
            if not best:
                break
            self.back.append({v: (prev, key[0]) for v, (key, prev) in best.items()})
            order = sorted(best, key=lambda v: best[v][0])
            ranks = {v: i for i, v in enumerate(order)}
        self._cache = {}

    def has(self, length: int, node) -> bool:
        return length < len(self.back) and node in self.back[length]

    def word(self, length: int, node) -> tuple[int, ...] | None:
        if not self.has(length, node):
            return None
        key = (length, node)
        w = self._cache.get(key)
        if w is None:
            out = []
            for ell in range(length, 0, -1):
                prev, a = self.back[ell][node]
                out.append(a)
                node = prev
            w = self._cache[key] = tuple(reversed(out))
        return w


def _cycle_states(d: Automaton) -> list[int]:
    """States lying on some cycle."""
    out = [[v for _, v in lst] for lst in d.out_edges]
    res = []
    for u in range(d.n):
        seen = set()
        stack = list(out[u])
        while stack:
            v = stack.pop()
            if v == u:
                res.append(u)
                break
            if v not in seen:
                seen.add(v)
                stack.extend(out[v])
    return res


def _product_succ(delta):
    def succ(tup):
        common = set(delta[tup[0]])
        for u in tup[1:]:
            common &= delta[u].keys()
        return [(a, tuple(delta[u][a] for u in tup)) for a in sorted(common)]

    return succ


def _share_cycle(delta, u, v, cap) -> bool:
    """Whether some word of length <= cap labels cycles at both u and v."""
    succ = _product_succ(delta)
    frontier = {(u, v)}
    seen = set()
    for _ in range(cap):
        nxt = set()
        for tup in frontier:
            for _, t in succ(tup):
                if t == (u, v):
                    return True
                if t not in seen:
                    seen.add(t)
                    nxt.add(t)
        frontier = nxt
        if not frontier:
            return False
    return False


def exact_cap(n_states: int, k: int) -> int:
    """Length bound for gamma that makes the witness search complete."""
    return 2 * (2 * k - 2 + sum(n_states ** t for t in range(1, 2 * k + 1)))


def estimate_bytes(n_states: int, k: int, cap: int) -> int:
    return cap * (2 * n_states + 2 * n_states ** k) * ENTRY_BYTES


def find_width_witness(d: Automaton, k: int, length_cap: int, exact: bool = False,
                       budget_bytes: int | None = DEFAULT_BUDGET,
                       check_minimum: bool = True) -> WitnessCertificate | None:
    """Search the minimum DFA ``d`` for a k-state witness.

    In bounded mode both the mu_j and gamma have length at most
    ``length_cap``. In exact mode the mu_j must be strictly shorter than
    gamma (which then cannot be a suffix of them); with the length bound
    from ``exact_cap`` this is a complete test.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if length_cap < 1:
        raise ValueError("length cap must be positive")
    require_dfa(d)
    if check_minimum and minimize(d).n != d.n:
        raise NotMinimumError("witness search needs the minimum DFA")
    delta = d.delta
    cands = _cycle_states(d)
    if len(cands) < k:
        return None
    meter = _Meter(budget_bytes)
    out_succ = lambda u: [(a, v) for a, v in d.out_edges[u]]  # noqa: E731
    low_mu = ExtremalPaths(d.source, out_succ, length_cap, False, meter)
    high_mu = ExtremalPaths(d.source, out_succ, length_cap, True, meter)
    mu_lengths = range(0, length_cap + 1)

    if k >= 3:
        ok_pair = {}
        for u, v in combinations(cands, 2):
            ok_pair[u, v] = _share_cycle(delta, u, v, length_cap)
        tuples = (
            t for t in combinations(cands, k)
            if all(ok_pair[x, y] for x, y in combinations(t, 2))
        )
    else:
        tuples = combinations(cands, k)

    succ = _product_succ(delta)
    for tup in tuples:
        high_g = ExtremalPaths(tup, succ, length_cap, True, meter)
        low_g = ExtremalPaths(tup, succ, length_cap, False, meter)
        for ell in range(1, length_cap + 1):
            allowed = range(0, ell) if exact else mu_lengths
            gamma = high_g.word(ell, tup)
            if gamma is not None:
                mus = _pick_mus(tup, allowed, lambda m: colex_less(m, gamma), low_mu)
                if mus is not None:
                    return WitnessCertificate(k, tup, mus, gamma, MUS_BELOW)
            gamma = low_g.word(ell, tup)
            if gamma is not None:
                mus = _pick_mus(
                    tup, allowed,
                    lambda m: colex_less(gamma, m) and not is_suffix(gamma, m), high_mu,
                )
                if mus is not None:
                    return WitnessCertificate(k, tup, mus, gamma, GAMMA_BELOW)
        meter.entries -= sum(map(len, high_g.back)) + sum(map(len, low_g.back))
    return None


def _pick_mus(tup, lengths, good, table):
    mus = []
    for u in tup:
        for ell in lengths:
            m = table.word(ell, u)
            if m is not None and good(m):
                mus.append(m)
                break
        else:
            return None
    return tuple(mus)


@dataclass
class WidthDecision:
    query_p: int
    answer: str  # "leq", "gt" or "unknown"
    lower_bound: int
    certificate: WitnessCertificate | None
    upper_bound: int | None
    upper_source: str | None
    mode: str

    def as_dict(self, alphabet=None) -> dict:
        return {
            "query_p": self.query_p,
            "answer": self.answer,
            "lower_bound": self.lower_bound,
            "certificate": None if self.certificate is None else self.certificate.as_dict(alphabet),
            "upper_bound": self.upper_bound,
            "upper_source": self.upper_source,
            "mode": self.mode,
        }


def decide_width_leq(d: Automaton, p: int, mode: str = "bounded_search",
                     cap: int | None = None,
                     budget_bytes: int | None = DEFAULT_BUDGET) -> WidthDecision:
    """Decide whether the deterministic width of the language of ``d`` is at
    most ``p``. ``mode`` is ``"exact"`` or ``"bounded_search"``."""
    if p < 1:
        raise ValueError("p must be at least 1")
    if mode not in ("exact", "bounded_search"):
        raise ValueError(f"unknown mode {mode!r}")
    m = minimize(d)
    upper, _, _ = dfa_width(m)
    k = p + 1
    if upper <= p:
        return WidthDecision(p, "leq", 1, None, upper, "dfa_width", mode)
    if mode == "exact":
        n_cap = exact_cap(m.n, k)
        if len(_cycle_states(m)) < k:
            return WidthDecision(p, "leq", 1, None, p, "exact", mode)
        need = estimate_bytes(m.n, k, n_cap)
        if budget_bytes is not None and need > budget_bytes:
            raise BudgetError(
                f"exact mode needs about {need} bytes of tables (length bound {n_cap}); "
                "use bounded_search instead", need, budget_bytes,
            )
        w = find_width_witness(m, k, n_cap, exact=True, budget_bytes=None, check_minimum=False)
        if w is None:
            return WidthDecision(p, "leq", 1, None, p, "exact", mode)
        return WidthDecision(p, "gt", k, w, upper, "dfa_width", mode)

    if cap is None:
        raise ValueError("bounded search needs a length cap")
    w = find_width_witness(m, k, cap, budget_bytes=budget_bytes, check_minimum=False)
    if w is not None:
        return WidthDecision(p, "gt", k, w, upper, "dfa_width", mode)
    lower, cert = 1, None
    for j in range(2, k):
        wj = find_width_witness(m, j, cap, budget_bytes=budget_bytes, check_minimum=False)
        if wj is None:
            break
        lower, cert = j, wj
    return WidthDecision(p, "unknown", lower, cert, upper, "dfa_width", mode)


@dataclass
class WidthBounds:
    lower: int
    certificate: WitnessCertificate | None
    upper: int
    minimum_dfa: Automaton


def language_width_bounds(d: Automaton, cap: int,
                          budget_bytes: int | None = DEFAULT_BUDGET) -> WidthBounds:
    """Certified lower bound (largest k with a witness within ``cap``) and
    the width of the minimum DFA as upper bound."""
    m = minimize(d)
    upper, _, _ = dfa_width(m)
    lower, cert = 1, None
    for k in range(2, upper + 1):
        w = find_width_witness(m, k, cap, budget_bytes=budget_bytes, check_minimum=False)
        if w is None:
            break
        lower, cert = k, w
    return WidthBounds(lower, cert, upper, m)
