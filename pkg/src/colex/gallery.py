"""Small reference automata with known orders, widths and transforms.

They back the self-test command and the golden tests. States are 0-based;
comments give 1-based names where the usual naming is 1-based.
"""

from __future__ import annotations

from .automaton import Automaton

ALPHA_ABC = ("a", "b", "c")


def running_dfa() -> Automaton:
    """Seven-state DFA for ab(aa)*(b(b+c))*; states v1..v7 are 0..6."""
    edges = [
        (1, 2, "a"), (2, 6, "b"), (6, 3, "a"), (6, 7, "b"), (3, 5, "a"),
        (5, 3, "a"), (5, 7, "b"), (7, 4, "b"), (7, 4, "c"), (4, 7, "b"),
    ]
    return Automaton.from_symbols(
        ALPHA_ABC, 7, 0, [3, 4, 5], [(u - 1, v - 1, a) for u, v, a in edges]
    )


def chain_nfa() -> Automaton:
    """Six-state NFA whose maximum co-lex order is total."""
    edges = [
        (0, 1, "a"), (0, 0, "a"), (0, 2, "b"), (0, 3, "b"),
        (1, 4, "b"), (2, 4, "b"), (3, 5, "b"), (3, 5, "c"),
    ]
    return Automaton.from_symbols(ALPHA_ABC, 6, 0, [4, 5], edges)


FAN_ALPHABET = ("a", "b", "c", "d", "e", "f", "g", "h", "k")

_FAN_EDGES = [
    (0, 1, "a"), (0, 2, "b"), (0, 3, "k"), (0, 3, "f"), (0, 4, "e"),
    (0, 4, "h"), (0, 5, "g"), (5, 3, "d"), (4, 3, "e"), (1, 3, "d"),
    (1, 1, "c"), (2, 2, "c"),
]


def fan_dfa() -> Automaton:
    """Minimum DFA of width 3; all states final."""
    return Automaton.from_symbols(FAN_ALPHABET, 6, 0, range(6), _FAN_EDGES)


def fan_dfa_split_k() -> Automaton:
    """Same language as ``fan_dfa``; the k-edge gets its own target (6)."""
    edges = [e for e in _FAN_EDGES if e != (0, 3, "k")] + [(0, 6, "k")]
    return Automaton.from_symbols(FAN_ALPHABET, 7, 0, range(7), edges)


def fan_dfa_split_h() -> Automaton:
    """Same language as ``fan_dfa``; the h-edge gets its own target (6)."""
    edges = [e for e in _FAN_EDGES if e != (0, 4, "h")] + [(0, 6, "h"), (6, 3, "e")]
    return Automaton.from_symbols(FAN_ALPHABET, 7, 0, range(7), edges)


def staircase_dfa(n: int, alphabet=("b", "a")) -> Automaton:
    """Minimum DFA of the union over j of b^(j-1) a b* a^j.

    Its deterministic language width is ``n`` under either symbol order.
    The DFA's own width is ``n`` only when b precedes a (the default); with
    a first it is ``2n``. Rungs j = 1..n use states q_j = 3(j-1),
    r_j = q_j + 1 and s_j = q_j + 2.
    """
    if n < 1:
        raise ValueError("n must be positive")
    q = lambda j: 3 * (j - 1)  # noqa: E731
    edges = []
    for j in range(1, n + 1):
        edges += [(q(j), q(j) + 1, "a"), (q(j) + 1, q(j) + 1, "b"), (q(j) + 1, q(j) + 2, "a")]
        if j < n:
            edges += [(q(j), q(j + 1), "b"), (q(j + 1) + 2, q(j) + 2, "a")]
    return Automaton.from_symbols(tuple(alphabet), 3 * n, 0, [2], edges)


def staircase_witness_state(j: int) -> int:
    """The state r_j reached by b^(j-1) a."""
    return 3 * (j - 1) + 1


_TWIN_COMMON = [(1, 2, "a"), (1, 5, "a"), (5, 6, "d"), (6, 6, "b"), (4, 4, "d")]


def twin_nfas() -> tuple[Automaton, Automaton]:
    """Two non-isomorphic NFAs on states v1..v6 (0..5) that share one
    transform under the orders in ``TWIN_ORDER_PAIRS``."""
    alpha = ("a", "b", "c", "d")
    e1 = _TWIN_COMMON + [(2, 3, "c"), (5, 4, "c")]
    e2 = _TWIN_COMMON + [(2, 4, "c"), (5, 3, "c")]
    shift = lambda es: [(u - 1, v - 1, a) for u, v, a in es]  # noqa: E731
    n1 = Automaton.from_symbols(alpha, 6, 0, [2, 3, 5], shift(e1))
    n2 = Automaton.from_symbols(alpha, 6, 0, [2, 3, 5], shift(e2))
    return n1, n2


# v1 < v2 < v5 < v3 < v4 and v5 < v6 for the first twin; v1 < v5 < v2 < v3 < v4
# and v2 < v6 for the second.
TWIN_ORDER_PAIRS = (
    [(0, 1), (1, 4), (4, 2), (2, 3), (4, 5)],
    [(0, 4), (4, 1), (1, 2), (2, 3), (1, 5)],
)
TWIN_CHAINS = [[0, 1, 2, 3], [4, 5]]
