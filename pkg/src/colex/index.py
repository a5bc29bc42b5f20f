"""Path index over the transform.

A search state keeps, for every chain ``Q_i``, three cut points: ``l_i``
(states reached only by words smaller than the pattern form ``Q_i[1, l_i]``),
``t_i`` (the states matched so far end at ``Q_i[t_i]``) and ``r_i`` (states
reached only by larger words form ``Q_i[r_i, end]``). One forward step per
pattern symbol updates all three with rank/select queries.

Subpath search starts from "every state"; source-anchored search starts from
a virtual edge into the source, so it finds exactly the states reached from
the source by the pattern.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from .abwt import Abwt, _Reader, _Writer
from .automaton import encode_word
from .errors import FormatError
from .succinct import BitVector, IntDictionary

MAGIC = b"ABIX"
VERSION = 1


@dataclass(frozen=True)
class SearchState:
    """Per-chain cut points, chains numbered from 1 (index 0 unused)."""

    l: tuple[int, ...]
    t: tuple[int, ...]
    r: tuple[int, ...]

    def ranges(self) -> list[tuple[int, int, int]]:
        """Nonempty ``(chain, first, last)`` ranges, positions chain-relative."""
        return [(i, self.l[i] + 1, self.t[i]) for i in range(1, len(self.l)) if self.t[i] > self.l[i]]

    def count(self) -> int:
        return sum(max(0, self.t[i] - self.l[i]) for i in range(1, len(self.l)))

    def empty(self) -> bool:
        return self.count() == 0


@dataclass
class QueryResult:
    ranges: list[tuple[int, int, int]]
    count: int
    states: list[int]  # automaton state ids, sorted

    @property
    def exists(self) -> bool:
        return self.count > 0


class Index:
    """Transform plus the auxiliary IN' bit vector and one label dictionary
    per chain."""

    def __init__(self, t: Abwt, in_prime: BitVector | None = None,
                 sigmas: list[IntDictionary] | None = None):
        self.t = t
        self.p = t.p
        bounds = [(0, -1)] + [t.chain_bounds(i) for i in range(1, t.p + 1)]
        self.first = [lo for lo, _ in bounds]
        self.size = [hi - lo + 1 for lo, hi in bounds]
        self.size[0] = 0
        # number of IN entries before chain i
        self.in_offset = [0] + [self._in_before(self.first[i]) for i in range(1, t.p + 1)]
        want_prime, want_sigmas = self._derive()
        if in_prime is not None and in_prime != want_prime:
            raise FormatError("IN' does not match the transform")
        if sigmas is not None and list(sigmas) != want_sigmas[1:]:
            raise FormatError("chain label dictionaries do not match the transform")
        self.in_prime = want_prime
        self.sigmas = want_sigmas
        self.out_before = [self._out_before(self.first[i]) for i in range(t.p + 1)]
        self.out_end = [self._out_before(self.first[i] + self.size[i]) for i in range(t.p + 1)]
        # chains whose OUT block holds a given pair; the forward step only
        # needs to visit these
        self.pair_sources: dict[tuple[int, int], list[int]] = {}
        for j in range(1, t.p + 1):
            for x in range(self.out_before[j] + 1, self.out_end[j] + 1):
                srcs = self.pair_sources.setdefault(t.out[x], [])
                if not srcs or srcs[-1] != j:
                    srcs.append(j)

    # -- construction -------------------------------------------------------

    def _derive(self):
        """IN' and the per-chain label sets.

        Labels entering a chain are read off OUT; the co-lex order forces
        them to be assigned to the chain's states in sorted order, so sorting
        the chain's multiset and concatenating gives IN chain by chain.
        """
        t = self.t
        per_chain = [[] for _ in range(self.p + 1)]
        for c, a in t.out:
            per_chain[c].append(a)
        bits = []
        sigmas = [IntDictionary()]
        for i in range(1, self.p + 1):
            labels = sorted(per_chain[i])
            for k, a in enumerate(labels):
                bits.append(1 if k == 0 or a != labels[k - 1] else 0)
            sigmas.append(IntDictionary(labels))
        return BitVector(bits), sigmas

    def in_labels(self) -> list[int]:
        """IN: labels of all edges sorted by target position, then label."""
        out = []
        for i in range(1, self.p + 1):
            out += sorted(a for c, a in self.t.out if c == i)
        return out

    # -- position arithmetic ------------------------------------------------

    def _in_before(self, g: int) -> int:
        """Number of edges entering global positions < g."""
        d = self.t.in_deg
        return d.rank(d.select(g - 1, 1), 0)

    def _out_before(self, g: int) -> int:
        """Number of edges leaving global positions < g."""
        d = self.t.out_deg
        return d.rank(d.select(g - 1, 1), 0)

    def _target_of_in(self, x: int) -> int:
        """Global position of the state entered by the x-th IN edge."""
        d = self.t.in_deg
        return d.rank(d.select(x, 0), 1) + 1

    def _run(self, i: int, a: int) -> tuple[int, int]:
        """Start and length of the run of ``a`` among IN edges of chain i."""
        base = self.in_prime.rank(self.in_offset[i], 1)
        k = self.sigmas[i].rank(a)
        g = self.in_prime.select(base + k, 1)
        nxt = self.in_prime.select(base + k + 1, 1)
        return g, nxt - g

    # -- the four primitive queries, plus one for the upper cut -------------

    def out_prefix(self, j: int, k: int, i: int, a: int) -> int:
        """Edges labelled ``a`` leaving ``Q_j[1, k]`` and entering chain i."""
        if k <= 0:
            return 0
        out = self.t.out
        pair = (i, a)
        lo = self.out_before[j]
        hi = self._out_before(self.first[j] + k)
        return out.rank(hi, pair) - out.rank(lo, pair)

    def in_prefix(self, i: int, k: int, a: int) -> int:
        """Edges labelled ``a`` entering ``Q_i[1, k]``."""
        if a not in self.sigmas[i] or k <= 0:
            return 0
        g, cnt = self._run(i, a)
        last = self._in_before(self.first[i] + k)
        return max(0, min(cnt, last - g + 1))

    def in_prefix_le(self, i: int, a: int, h: int) -> int:
        """Largest k with ``in(Q_i[1, k], a) <= h``."""
        if a not in self.sigmas[i]:
            return self.size[i]
        g, cnt = self._run(i, a)
        if h >= cnt:
            return self.size[i]
        return self._target_of_in(g + h) - self.first[i]

    def in_prefix_ge(self, i: int, a: int, z: int) -> int | None:
        """Smallest k with ``in(Q_i[1, k], a) >= z``; None if there is none."""
        if z <= 0:
            return 0
        k = self.in_prefix_le(i, a, z - 1)
        return None if k == self.size[i] else k + 1

    def max_label_le(self, i: int, a: int) -> int:
        """Largest h such that every label entering ``Q_i[h]`` is <= a."""
        b = self.sigmas[i].succ(a)
        if b is None:
            return self.size[i]
        return self.in_prefix_le(i, b, 0)

    def min_label_ge(self, i: int, a: int) -> int:
        """Smallest k such that every label entering ``Q_i[k]`` is >= a
        (the source counts as entered by a symbol below all others)."""
        floor = 2 if i == 1 else 1
        b = self.sigmas[i].pred(a - 1)
        if b is None:
            return floor
        g, cnt = self._run(i, b)
        last = self._target_of_in(g + cnt - 1)
        return max(floor, last - self.first[i] + 2)

    # -- search -------------------------------------------------------------

    def initial_state(self, anchored: bool = False) -> SearchState:
        """State for the empty pattern. Anchored search starts from the
        virtual edge into the source, so only the source is matched."""
        p = self.p
        l = (0,) * (p + 1)
        r = (0, 2) + (1,) * (p - 1)
        if anchored:
            t = (0, 1) + (0,) * (p - 1)
        else:
            t = tuple(self.size)
        return SearchState(l, t, r)

    def forward_step(self, st: SearchState, a: int) -> SearchState:
        p = self.p
        out = self.t.out
        first = self.first
        ob = self._out_before
        lo_e = self.out_before
        end_e = self.out_end
        l_e = [0] + [ob(first[j] + st.l[j]) for j in range(1, p + 1)]
        t_e = [0] + [ob(first[j] + st.t[j]) for j in range(1, p + 1)]
        r_e = [0] + [ob(first[j] + st.r[j] - 1) for j in range(1, p + 1)]
        nl, nt, nr = [0], [0], [0]
        for i in range(1, p + 1):
            if a not in self.sigmas[i]:
                # no a-edge enters chain i
                k = self.max_label_le(i, a)
                nl.append(k)
                nt.append(k)
                nr.append(self.min_label_ge(i, a))
                continue
            pair = (i, a)
            c = d = above = 0
            for j in self.pair_sources.get(pair, ()):
                base = out.rank(lo_e[j], pair)
                c += out.rank(l_e[j], pair) - base
                d += out.rank(t_e[j], pair) - base
                above += out.rank(end_e[j], pair) - out.rank(r_e[j], pair)
            li = min(self.in_prefix_le(i, a, c), self.max_label_le(i, a))
            ti = li if d == c else self.in_prefix_ge(i, a, d)
            _, total = self._run(i, a)
            ri = max(self.in_prefix_ge(i, a, total - above) + 1, self.min_label_ge(i, a))
            nl.append(li)
            nt.append(ti)
            nr.append(ri)
        return SearchState(tuple(nl), tuple(nt), tuple(nr))

    def search(self, word, anchored: bool = False) -> SearchState:
        st = self.initial_state(anchored)
        for a in self.encode(word):
            if st.empty():
                break
            st = self.forward_step(st, a)
        return st

    def encode(self, word) -> tuple[int, ...]:
        return encode_word(self.t.alphabet, word)

    def positions(self, st: SearchState) -> list[int]:
        """Global 1-based positions covered by the state's ranges."""
        return [self.first[i] + k - 1 for i, lo, hi in st.ranges() for k in range(lo, hi + 1)]

    def single_position(self, st: SearchState) -> int | None:
        rs = st.ranges()
        if len(rs) == 1 and rs[0][1] == rs[0][2]:
            i, k, _ = rs[0]
            return self.first[i] + k - 1
        return None

    def state_ids(self, positions) -> list[int]:
        layout = self.t.layout
        if layout is None:
            return sorted(g - 1 for g in positions)
        return sorted(layout[g - 1] for g in positions)

    def has_final(self, st: SearchState) -> bool:
        fin = self.t.final
        for i, lo, hi in st.ranges():
            f = self.first[i]
            if fin.rank(f + hi - 1) - fin.rank(f + lo - 2) > 0:
                return True
        return False

    # -- queries ------------------------------------------------------------

    def match_subpaths(self, word) -> QueryResult:
        st = self.search(word)
        return QueryResult(st.ranges(), st.count(), self.state_ids(self.positions(st)))

    def exists(self, word) -> bool:
        return not self.search(word).empty()

    def count(self, word) -> int:
        return self.search(word).count()

    def locate(self, word) -> list[int]:
        return self.match_subpaths(word).states

    def accepts_from_source(self, word) -> tuple[QueryResult, bool]:
        st = self.search(word, anchored=True)
        res = QueryResult(st.ranges(), st.count(), self.state_ids(self.positions(st)))
        return res, self.has_final(st)

    def member(self, word) -> bool:
        return self.accepts_from_source(word)[1]

    # -- binary -------------------------------------------------------------

    def to_bytes(self) -> bytes:
        w = _Writer()
        w.raw(MAGIC)
        w.raw(struct.pack("<I", VERSION))
        w.blob(self.t.to_bytes())
        w.varint(len(self.in_prime))
        w.blob(self.in_prime.to_bytes())
        for i in range(1, self.p + 1):
            keys = list(self.sigmas[i])
            w.varint(len(keys))
            for k in keys:
                w.varint(k)
        return w.getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> "Index":
        r = _Reader(data)
        if r.raw(4) != MAGIC:
            raise FormatError("not an index file (bad magic)")
        (version,) = struct.unpack("<I", r.raw(4))
        if version != VERSION:
            raise FormatError(f"unsupported index version {version}")
        t = Abwt.from_bytes(r.blob())
        length = r.varint()
        try:
            in_prime = BitVector.from_bytes(r.blob(), length)
        except ValueError as exc:
            raise FormatError(str(exc)) from None
        sigmas = []
        for _ in range(t.p):
            sigmas.append(IntDictionary(r.varint() for _ in range(r.varint())))
        r.expect_end()
        return cls(t, in_prime, sigmas)

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def load(cls, path) -> "Index":
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())


def build_index(t: Abwt) -> Index:
    return Index(t)


def forward_step(ix: Index, st: SearchState, a: int) -> SearchState:
    return ix.forward_step(st, a)


def match_subpaths(ix: Index, pattern) -> QueryResult:
    return ix.match_subpaths(pattern)


def accepts_from_source(ix: Index, pattern) -> tuple[QueryResult, bool]:
    return ix.accepts_from_source(pattern)
