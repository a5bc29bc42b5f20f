"""Finite automata: the value type, the text format, trimming, minimization
and isomorphism.

States are the integers ``0..n-1``; the text format numbers them ``1..n`` in
file order, so ``parse`` and ``serialize`` shift by one. Labels are stored as
ranks into the alphabet tuple, whose order is the total order on symbols.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    AlphabetMismatchError,
    EmptyLanguageError,
    FormatError,
    NotDeterministicError,
)

# Rank of the sentinel symbol that only the source "reads"; smaller than
# every real label.
SENTINEL = -1


def _edge_key(e):
    return (e[0], e[2], e[1])


@dataclass(frozen=True)
class Automaton:
    """An automaton with a single initial state.

    ``edges`` holds ``(src, dst, label)`` triples, kept sorted by source,
    label, then destination, so two automata with the same edge set compare
    equal regardless of how they were built.
    """

    alphabet: tuple[str, ...]
    n: int
    source: int
    finals: frozenset[int]
    edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "finals", frozenset(self.finals))
        given = [tuple(e) for e in self.edges]
        edges = tuple(sorted(set(given), key=_edge_key))
        if len(edges) != len(given):
            raise FormatError("duplicate edge")
        object.__setattr__(self, "edges", edges)
        if len(set(self.alphabet)) != len(self.alphabet):
            raise FormatError("duplicate alphabet symbol")
        if self.n < 1:
            raise FormatError("an automaton needs at least one state")
        if not 0 <= self.source < self.n:
            raise FormatError(f"source {self.source} out of range")
        for f in self.finals:
            if not 0 <= f < self.n:
                raise FormatError(f"final state {f} out of range")
        sigma = len(self.alphabet)
        for u, v, a in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise FormatError(f"edge {u}->{v} references a missing state")
            if not 0 <= a < sigma:
                raise FormatError(f"edge label {a} outside the alphabet")

    # -- construction helpers ------------------------------------------------

    @classmethod
    def from_symbols(cls, alphabet: Sequence[str], n: int, source: int,
                     finals: Iterable[int], edges: Iterable[tuple[int, int, str]]):
        """Build from edges whose labels are symbol strings."""
        rank = {s: i for i, s in enumerate(alphabet)}
        try:
            coded = [(u, v, rank[a]) for u, v, a in edges]
        except KeyError as exc:
            raise FormatError(f"unknown symbol {exc.args[0]!r}") from None
        return cls(tuple(alphabet), n, source, frozenset(finals), tuple(coded))

    @property
    def sigma(self) -> int:
        return len(self.alphabet)

    @property
    def e(self) -> int:
        return len(self.edges)

    # -- adjacency -----------------------------------------------------------

    @cached_property
    def out_edges(self) -> list[list[tuple[int, int]]]:
        """``out_edges[u]`` lists ``(label, dst)`` sorted."""
        out = [[] for _ in range(self.n)]
        for u, v, a in self.edges:
            out[u].append((a, v))
        return out

    @cached_property
    def in_edges(self) -> list[list[tuple[int, int]]]:
        """``in_edges[v]`` lists ``(label, src)`` sorted."""
        inn = [[] for _ in range(self.n)]
        for u, v, a in self.edges:
            inn[v].append((a, u))
        for lst in inn:
            lst.sort()
        return inn

    @cached_property
    def min_in_label(self) -> list[int | None]:
        """Smallest incoming label; the source gets the sentinel."""
        res = [lst[0][0] if lst else None for lst in self.in_edges]
        res[self.source] = SENTINEL
        return res

    @cached_property
    def max_in_label(self) -> list[int | None]:
        res = [lst[-1][0] if lst else None for lst in self.in_edges]
        if res[self.source] is None:
            res[self.source] = SENTINEL
        return res

    def is_deterministic(self) -> bool:
        for lst in self.out_edges:
            for (a, _), (b, _) in zip(lst, lst[1:]):
                if a == b:
                    return False
        return True

    @cached_property
    def delta(self) -> list[dict[int, int]]:
        """Transition maps of a DFA; raises for nondeterministic input."""
        if not self.is_deterministic():
            raise NotDeterministicError("automaton has two edges with one label leaving a state")
        return [dict(lst) for lst in self.out_edges]

    # -- words ---------------------------------------------------------------

    def encode(self, word) -> tuple[int, ...]:
        return encode_word(self.alphabet, word)

    def decode(self, word: Sequence[int], sep: str = "") -> str:
        if sep == "" and not all(len(s) == 1 for s in self.alphabet):
            sep = " "
        return sep.join(self.alphabet[a] for a in word)

    def step(self, states: Iterable[int], a: int) -> frozenset[int]:
        out = self.out_edges
        return frozenset(v for u in states for b, v in out[u] if b == a)

    def run(self, word) -> frozenset[int]:
        """States reached from the source by reading ``word``."""
        cur = frozenset([self.source])
        for a in self.encode(word):
            cur = self.step(cur, a)
            if not cur:
                break
        return cur

    def accepts(self, word) -> bool:
        return not self.finals.isdisjoint(self.run(word))

    # -- reachability --------------------------------------------------------

    def reachable(self) -> set[int]:
        seen = {self.source}
        stack = [self.source]
        while stack:
            u = stack.pop()
            for _, v in self.out_edges[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    def coreachable(self) -> set[int]:
        seen = set(self.finals)
        stack = list(self.finals)
        while stack:
            v = stack.pop()
            for _, u in self.in_edges[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return seen

    def is_trim(self) -> bool:
        return len(self.reachable() & self.coreachable()) == self.n

    def restrict(self, keep: Iterable[int]) -> "Automaton":
        """Induced sub-automaton on ``keep`` (which must hold the source).

        Surviving states keep their relative order.
        """
        keep = sorted(set(keep))
        if self.source not in keep:
            raise EmptyLanguageError("the source would be removed")
        new = {u: i for i, u in enumerate(keep)}
        edges = [(new[u], new[v], a) for u, v, a in self.edges if u in new and v in new]
        finals = [new[f] for f in self.finals if f in new]
        return Automaton(self.alphabet, len(keep), new[self.source], finals, edges)

    def trim(self) -> "Automaton":
        useful = self.reachable() & self.coreachable()
        if self.source not in useful:
            raise EmptyLanguageError("the automaton accepts no word")
        return self.restrict(useful)

    def with_source_first(self) -> "Automaton":
        """Renumber so that the source is state 0."""
        order = [self.source] + [u for u in range(self.n) if u != self.source]
        return self.permute(order)

    def permute(self, order: Sequence[int]) -> "Automaton":
        """Renumber so that old state ``order[i]`` becomes ``i``."""
        new = {u: i for i, u in enumerate(order)}
        edges = [(new[u], new[v], a) for u, v, a in self.edges]
        return Automaton(self.alphabet, self.n, new[self.source],
                         [new[f] for f in self.finals], edges)

    def __str__(self):
        return serialize(self)


def encode_word(alphabet: Sequence[str], word) -> tuple[int, ...]:
    """Turn a word into label ranks.

    A string is split into characters when every symbol is one character
    long, and on whitespace otherwise. Sequences of symbols or ranks pass
    through.
    """
    rank = {s: i for i, s in enumerate(alphabet)}
    if isinstance(word, str):
        if all(len(s) == 1 for s in alphabet) and " " not in word:
            tokens = list(word)
        else:
            tokens = word.split()
    else:
        tokens = list(word)
    out = []
    for t in tokens:
        if isinstance(t, int):
            if not 0 <= t < len(alphabet):
                raise AlphabetMismatchError(f"label {t} outside the alphabet")
            out.append(t)
        elif t in rank:
            out.append(rank[t])
        else:
            raise AlphabetMismatchError(f"symbol {t!r} not in alphabet")
    return tuple(out)


def require_dfa(a: Automaton) -> Automaton:
    if not a.is_deterministic():
        raise NotDeterministicError("a deterministic automaton is required")
    return a


# -- text format ---------------------------------------------------------------


def parse(text: str) -> Automaton:
    """Parse the line-oriented text format.

    Header lines ``alphabet``, ``states``, ``source`` and ``finals`` come in
    any order before or between ``edge <from> <to> <symbol>`` lines. Lines
    starting with ``#`` are comments. State ids in the file are ``1..n``.
    """
    alphabet = None
    n = None
    source = None
    finals = None
    raw_edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, *rest = line.split()
        if head == "alphabet":
            if alphabet is not None:
                raise FormatError("alphabet given twice", lineno)
            if any(s.startswith("#") for s in rest):
                raise FormatError("'#' is reserved and cannot start a symbol", lineno)
            if len(set(rest)) != len(rest):
                raise FormatError("duplicate alphabet symbol", lineno)
            alphabet = tuple(rest)
        elif head == "states":
            if n is not None or len(rest) != 1:
                raise FormatError("expected a single 'states <n>' line", lineno)
            n = _int(rest[0], lineno)
            if n < 1:
                raise FormatError("state count must be positive", lineno)
        elif head == "source":
            if source is not None or len(rest) != 1:
                raise FormatError("exactly one initial state is allowed", lineno)
            source = _int(rest[0], lineno)
        elif head == "finals":
            if finals is not None:
                raise FormatError("finals given twice", lineno)
            finals = [_int(t, lineno) for t in rest]
        elif head == "edge":
            if len(rest) != 3:
                raise FormatError("expected 'edge <from> <to> <symbol>'", lineno)
            raw_edges.append((_int(rest[0], lineno), _int(rest[1], lineno), rest[2], lineno))
        else:
            raise FormatError(f"unknown directive {head!r}", lineno)
    if alphabet is None or n is None or source is None:
        raise FormatError("missing alphabet, states or source line")
    finals = finals or []
    rank = {s: i for i, s in enumerate(alphabet)}

    def state(x, lineno):
        if not 1 <= x <= n:
            raise FormatError(f"state {x} outside 1..{n}", lineno)
        return x - 1

    seen = set()
    edges = []
    for u, v, sym, lineno in raw_edges:
        if sym not in rank:
            raise FormatError(f"unknown symbol {sym!r}", lineno)
        e = (state(u, lineno), state(v, lineno), rank[sym])
        if e in seen:
            raise FormatError("duplicate edge", lineno)
        seen.add(e)
        edges.append(e)
    return Automaton(alphabet, n, state(source, None), [state(f, None) for f in finals], edges)


def _int(tok, lineno):
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"expected an integer, got {tok!r}", lineno) from None


def serialize(a: Automaton) -> str:
    lines = [
        "alphabet " + " ".join(a.alphabet) if a.alphabet else "alphabet",
        f"states {a.n}",
        f"source {a.source + 1}",
        " ".join(["finals"] + [str(f + 1) for f in sorted(a.finals)]),
    ]
    lines += [f"edge {u + 1} {v + 1} {a.alphabet[x]}" for u, v, x in a.edges]
    return "\n".join(lines) + "\n"


def load(path) -> Automaton:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def save(a: Automaton, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(a))


# -- minimization and isomorphism ---------------------------------------------


def canonical(a: Automaton) -> Automaton:
    """Renumber a DFA by breadth-first discovery from the source, visiting
    labels in alphabet order. Unreachable states are dropped."""
    delta = require_dfa(a).delta
    order = [a.source]
    index = {a.source: 0}
    q = deque([a.source])
    while q:
        u = q.popleft()
        for x in sorted(delta[u]):
            v = delta[u][x]
            if v not in index:
                index[v] = len(order)
                order.append(v)
                q.append(v)
    if len(order) < a.n:
        a = a.restrict(order)
        return canonical(a)
    return a.permute(order)


def isomorphic(a: Automaton, b: Automaton) -> bool:
    """Isomorphism test for deterministic automata."""
    if a.alphabet != b.alphabet or a.n != b.n or a.e != b.e:
        return False
    return canonical(a) == canonical(b)


def minimize(a: Automaton) -> Automaton:
    """Minimum trim DFA of a deterministic automaton (Hopcroft refinement).

    The result is canonically numbered, so equal languages give equal
    values.
    """
    require_dfa(a)
    a = a.restrict(a.reachable())
    n, sigma = a.n, a.sigma
    dead = n
    delta = [[dead] * sigma for _ in range(n + 1)]
    for u, v, x in a.edges:
        delta[u][x] = v
    total = n + 1
    inv = [[[] for _ in range(total)] for _ in range(sigma)]
    for u in range(total):
        for x in range(sigma):
            inv[x][delta[u][x]].append(u)

    finals = set(a.finals)
    if not finals:
        raise EmptyLanguageError("the automaton accepts no word")
    blocks = [set(finals)]
    rest = set(range(total)) - finals
    if rest:
        blocks.append(rest)
    block_of = [0] * total
    for i, b in enumerate(blocks):
        for u in b:
            block_of[u] = i
    pending = set()
    smaller = 0 if len(blocks) == 1 or len(blocks[0]) <= len(blocks[1]) else 1
    for x in range(sigma):
        pending.add((smaller, x))
    while pending:
        bid, x = pending.pop()
        pre = set()
        for v in blocks[bid]:
            pre.update(inv[x][v])
        touched = {}
        for u in pre:
            touched.setdefault(block_of[u], set()).add(u)
        for yid, inter in touched.items():
            y = blocks[yid]
            if len(inter) == len(y):
                continue
            y -= inter
            zid = len(blocks)
            blocks.append(inter)
            for u in inter:
                block_of[u] = zid
            for c in range(sigma):
                if (yid, c) in pending:
                    pending.add((zid, c))
                else:
                    pending.add((zid, c) if len(inter) <= len(y) else (yid, c))

    dead_block = block_of[dead]
    useful = [b for b in range(len(blocks)) if b != dead_block]
    # the dead block can only contain states that reach no final
    rep = {b: min(blocks[b]) for b in useful}
    new = {b: i for i, b in enumerate(useful)}
    edges = set()
    for b in useful:
        u = rep[b]
        for x in range(sigma):
            t = block_of[delta[u][x]]
            if t != dead_block:
                edges.add((new[b], new[t], x))
    fin = {new[block_of[f]] for f in finals}
    out = Automaton(a.alphabet, len(useful), new[block_of[a.source]], fin, edges)
    return canonical(out)
