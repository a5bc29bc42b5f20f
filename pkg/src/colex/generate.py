"""Random trim automata for tests and benchmarks."""

from __future__ import annotations

import random
import string

from .automaton import Automaton


def alphabet_of(sigma: int) -> tuple[str, ...]:
    if sigma > len(string.ascii_lowercase):
        return tuple(f"s{i}" for i in range(sigma))
    return tuple(string.ascii_lowercase[:sigma])


def _make_coreachable(n, edges, finals):
    back = [[] for _ in range(n)]
    for u, v, _ in edges:
        back[v].append(u)
    while True:
        seen = set(finals)
        stack = list(finals)
        while stack:
            v = stack.pop()
            for u in back[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        missing = [u for u in range(n) if u not in seen]
        if not missing:
            return finals
        # the last unreached state in BFS-tree order cannot hurt determinism
        finals.add(missing[-1])


def random_dfa(rng: random.Random, n: int, sigma: int, density: float = 0.5,
               final_prob: float = 0.3) -> Automaton:
    """Trim DFA with exactly ``n`` states, source 0."""
    if n < 1 or sigma < 1:
        raise ValueError("need n >= 1 and sigma >= 1")
    free = {0: list(range(sigma))}
    edges = []
    for v in range(1, n):
        u = rng.choice([x for x in free if free[x]])
        a = free[u].pop(rng.randrange(len(free[u])))
        edges.append((u, v, a))
        free[v] = list(range(sigma))
    for u in range(n):
        for a in list(free[u]):
            if rng.random() < density:
                edges.append((u, rng.randrange(n), a))
    finals = {u for u in range(n) if rng.random() < final_prob}
    finals = _make_coreachable(n, edges, finals)
    return Automaton(alphabet_of(sigma), n, 0, finals, edges)


def random_nfa(rng: random.Random, n: int, sigma: int, extra: float = 1.0,
               final_prob: float = 0.3) -> Automaton:
    """Trim NFA with exactly ``n`` states, source 0, about ``extra * n``
    edges beyond a spanning tree."""
    if n < 1 or sigma < 1:
        raise ValueError("need n >= 1 and sigma >= 1")
    edges = set()
    for v in range(1, n):
        edges.add((rng.randrange(v), v, rng.randrange(sigma)))
    for _ in range(int(round(extra * n * rng.random() * 2))):
        edges.add((rng.randrange(n), rng.randrange(n), rng.randrange(sigma)))
    edges = sorted(edges)
    finals = {u for u in range(n) if rng.random() < final_prob}
    finals = _make_coreachable(n, edges, finals)
    return Automaton(alphabet_of(sigma), n, 0, finals, edges)


def random_words(rng: random.Random, sigma: int, count: int, max_len: int):
    return [tuple(rng.randrange(sigma) for _ in range(rng.randint(0, max_len))) for _ in range(count)]
