"""The automaton transform: five sequences that encode an automaton laid
out along a chain partition of a co-lex order, plus binary I/O and
inversion."""

from __future__ import annotations

import io
import struct
from collections import deque
from dataclasses import dataclass, field

from .automaton import Automaton
from .errors import AxiomViolationError, FormatError, InversionError
from .order import ChainPartition, PartialOrder, check_colex_axioms, dfa_width
from .succinct import BitVector, PairSequence

MAGIC = b"ABWT"
VERSION = 1


@dataclass(frozen=True)
class Abwt:
    """CHAIN, FINAL, IN_DEG and OUT_DEG bit vectors plus the OUT pair
    sequence. ``layout`` maps transform positions back to the automaton's
    state ids; it is carried along for reporting and ignored by equality."""

    alphabet: tuple[str, ...]
    p: int
    n: int
    e: int
    chain: BitVector
    final: BitVector
    in_deg: BitVector
    out_deg: BitVector
    out: PairSequence
    layout: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        n, e, p = self.n, self.e, self.p
        checks = [
            (len(self.chain) == n, "CHAIN length"),
            (len(self.final) == n, "FINAL length"),
            (self.chain.ones == p, "CHAIN must hold one 1 per chain"),
            (n == 0 or self.chain[1] == 1, "CHAIN must start with 1"),
            (len(self.in_deg) == n + e and self.in_deg.ones == n, "IN_DEG shape"),
            (len(self.out_deg) == n + e and self.out_deg.ones == n, "OUT_DEG shape"),
            (len(self.out) == e, "OUT length"),
        ]
        for ok, what in checks:
            if not ok:
                raise FormatError(f"invalid transform: {what}")
        sigma = len(self.alphabet)
        per_chain = [0] * (p + 1)
        for c, a in self.out:
            if not (1 <= c <= p and 0 <= a < sigma):
                raise FormatError(f"invalid transform: OUT pair ({c},{a}) out of range")
            per_chain[c] += 1
        for i in range(1, p + 1):
            lo, hi = self.chain_bounds(i)
            if self.in_degree_range(lo, hi) != per_chain[i]:
                raise FormatError(f"invalid transform: in-degrees of chain {i} disagree with OUT")
        if self.layout is not None and sorted(self.layout) != list(range(n)):
            raise FormatError("invalid transform: layout is not a permutation")

    # -- navigation ---------------------------------------------------------

    def chain_bounds(self, i: int) -> tuple[int, int]:
        """First and last global position (1-based) of chain i."""
        lo = self.chain.select(i, 1)
        hi = self.chain.select(i + 1, 1) - 1
        return lo, min(hi, self.n)

    def chain_sizes(self) -> list[int]:
        return [hi - lo + 1 for lo, hi in (self.chain_bounds(i) for i in range(1, self.p + 1))]

    def in_degree_range(self, lo: int, hi: int) -> int:
        """Total in-degree of global positions lo..hi."""
        if hi < lo:
            return 0
        a = self.in_deg.select(lo - 1, 1) if lo > 1 else 0
        b = self.in_deg.select(hi, 1)
        return (b - a) - (hi - lo + 1)

    def out_range(self, k: int) -> tuple[int, int]:
        """OUT positions of the edges leaving global position k."""
        s = self.out_deg.rank(self.out_deg.select(k - 1, 1), 0) + 1
        t = self.out_deg.rank(self.out_deg.select(k, 1), 0)
        return s, t

    def out_edges_of(self, k: int) -> list[tuple[int, int]]:
        s, t = self.out_range(k)
        return [self.out[x] for x in range(s, t + 1)]

    # -- text ---------------------------------------------------------------

    def pair_str(self, pair) -> str:
        return f"({pair[0]},{self.alphabet[pair[1]]})"

    def dump(self) -> str:
        lines = [
            "alphabet " + " ".join(self.alphabet),
            f"p {self.p}",
            f"n {self.n}",
            f"e {self.e}",
            f"CHAIN {self.chain}",
            f"FINAL {self.final}",
            f"IN_DEG {self.in_deg}",
            f"OUT_DEG {self.out_deg}",
            "OUT " + "".join(self.pair_str(x) for x in self.out),
        ]
        if self.layout is not None:
            lines.append("LAYOUT " + " ".join(str(u + 1) for u in self.layout))
        return "\n".join(lines) + "\n"

    # -- binary -------------------------------------------------------------

    def to_bytes(self) -> bytes:
        w = _Writer()
        w.raw(MAGIC)
        w.raw(struct.pack("<I", VERSION))
        w.varint(len(self.alphabet))
        for s in self.alphabet:
            w.blob(s.encode("utf-8"))
        w.varint(self.p)
        w.varint(self.n)
        w.varint(self.e)
        for bv in (self.chain, self.final, self.in_deg, self.out_deg):
            w.varint(len(bv))
            w.blob(bv.to_bytes())
        for c, a in self.out:
            w.varint(c)
            w.varint(a)
        if self.layout is None:
            w.varint(0)
        else:
            w.varint(1)
            for u in self.layout:
                w.varint(u)
        return w.getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> "Abwt":
        r = _Reader(data)
        abwt = cls.read(r)
        r.expect_end()
        return abwt

    @classmethod
    def read(cls, r: "_Reader") -> "Abwt":
        if r.raw(4) != MAGIC:
            raise FormatError("not a transform file (bad magic)")
        (version,) = struct.unpack("<I", r.raw(4))
        if version != VERSION:
            raise FormatError(f"unsupported transform version {version}")
        sigma = r.varint()
        alphabet = tuple(r.blob().decode("utf-8") for _ in range(sigma))
        p, n, e = r.varint(), r.varint(), r.varint()
        vecs = []
        for _ in range(4):
            length = r.varint()
            try:
                vecs.append(BitVector.from_bytes(r.blob(), length))
            except ValueError as exc:
                raise FormatError(str(exc)) from None
        out = PairSequence((r.varint(), r.varint()) for _ in range(e))
        layout = tuple(r.varint() for _ in range(n)) if r.varint() else None
        return cls(alphabet, p, n, e, *vecs, out, layout)

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def load(cls, path) -> "Abwt":
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())


def build_abwt(a: Automaton, partition: ChainPartition,
               order: PartialOrder | None = None) -> Abwt:
    """Transform of ``a`` for a chain partition of one of its co-lex orders.

    When ``order`` is given it is checked against the co-lex axioms and the
    chains against it.
    """
    layout = partition.layout()
    if sorted(layout) != list(range(a.n)):
        raise ValueError("partition does not cover the states exactly once")
    if layout[0] != a.source:
        raise ValueError("the first chain must start with the source")
    if order is not None:
        report = check_colex_axioms(a, order)
        if not report:
            raise AxiomViolationError(f"not a co-lex order: {report.violations[:3]}")
        for ch in partition.chains:
            for x, y in zip(ch, ch[1:]):
                if not order.lt(x, y):
                    raise AxiomViolationError(f"chain is not increasing at {x}, {y}")
    pos = {u: k for k, u in enumerate(layout)}
    chain_no = {}
    chain_bits = []
    for i, ch in enumerate(partition.chains, 1):
        for k, u in enumerate(ch):
            chain_no[u] = i
            chain_bits.append(1 if k == 0 else 0)
    final_bits = [1 if u in a.finals else 0 for u in layout]
    in_bits, out_bits = [], []
    for u in layout:
        in_bits += [0] * len(a.in_edges[u]) + [1]
        out_bits += [0] * len(a.out_edges[u]) + [1]
    edges = sorted(a.edges, key=lambda t: (pos[t[0]], t[2], pos[t[1]]))
    out = PairSequence((chain_no[v], x) for _, v, x in edges)
    return Abwt(
        a.alphabet, len(partition.chains), a.n, a.e,
        BitVector(chain_bits), BitVector(final_bits),
        BitVector(in_bits), BitVector(out_bits), out, tuple(layout),
    )


def abwt_of_dfa(d: Automaton) -> Abwt:
    """Transform of a DFA under its maximum co-lex order and the default
    minimum chain partition."""
    _, cp, po = dfa_width(d)
    return build_abwt(d, cp, po)


def invert_abwt_dfa(t: Abwt) -> Automaton:
    """Rebuild the DFA encoded by ``t``.

    Starting from the source, each discovered state is located exactly with
    the index's path search. Its outgoing labels come from OUT_DEG and OUT,
    and each successor is found by one forward step, which must give exactly
    one state. The result uses transform positions as state ids.
    """
    from .index import build_index

    ix = build_index(t)
    start = ix.initial_state(anchored=True)
    cell = ix.single_position(start)
    if cell != 1:
        raise InversionError("the source does not resolve to the first position")
    seen = {1: start}
    queue = deque([1])
    edges = []
    while queue:
        k = queue.popleft()
        st = seen[k]
        labels = [x for _, x in t.out_edges_of(k)]
        if len(set(labels)) != len(labels):
            raise InversionError(f"state at position {k} has two edges with one label")
        for x in labels:
            nxt = ix.forward_step(st, x)
            j = ix.single_position(nxt)
            if j is None:
                raise InversionError(
                    f"label {t.alphabet[x]!r} from position {k} does not lead to a single state"
                )
            edges.append((k - 1, j - 1, x))
            if j not in seen:
                seen[j] = nxt
                queue.append(j)
    if len(seen) != t.n:
        raise InversionError(f"only {len(seen)} of {t.n} states are reachable")
    finals = [k - 1 for k in range(1, t.n + 1) if t.final[k]]
    if len(edges) != t.e:
        raise InversionError("edge count disagrees with the transform")
    return Automaton(t.alphabet, t.n, 0, finals, edges)


def invert_abwt_nfa(t: Abwt, max_states: int = 12) -> Automaton:
    """Rebuild an NFA from its transform when every state is pinned down by
    some word, i.e. some word reaches that state and no other.

    All sets of states reachable by one word from the source are explored
    breadth first (at most 2^n of them, hence the size cap). Once a state is
    reached alone by some word, its successors under each label are exactly
    the states reached after appending that label.
    """
    from .index import build_index

    if t.n > max_states:
        raise InversionError(f"exhaustive inversion is capped at {max_states} states")
    ix = build_index(t)
    start = ix.initial_state(anchored=True)
    seen = {frozenset(ix.positions(start)): start}
    queue = deque([start])
    alone = {}
    while queue:
        st = queue.popleft()
        cur = frozenset(ix.positions(st))
        if len(cur) == 1:
            alone.setdefault(next(iter(cur)), st)
        for x in range(len(t.alphabet)):
            nxt = ix.forward_step(st, x)
            key = frozenset(ix.positions(nxt))
            if key and key not in seen:
                seen[key] = nxt
                queue.append(nxt)
    missing = [k for k in range(1, t.n + 1) if k not in alone]
    if missing:
        raise InversionError(
            "the transform does not determine the automaton: states at positions "
            f"{missing} are never reached alone by any word"
        )
    edges = []
    for k, st in alone.items():
        for x in sorted({x for _, x in t.out_edges_of(k)}):
            for j in ix.positions(ix.forward_step(st, x)):
                edges.append((k - 1, j - 1, x))
    if len(edges) != t.e:
        raise InversionError("edge count disagrees with the transform")
    finals = [k - 1 for k in range(1, t.n + 1) if t.final[k]]
    return Automaton(t.alphabet, t.n, 0, finals, edges)


# -- binary helpers -------------------------------------------------------------


class _Writer:
    def __init__(self):
        self._buf = io.BytesIO()

    def raw(self, b: bytes):
        self._buf.write(b)

    def varint(self, x: int):
        if x < 0:
            raise ValueError("varints are unsigned")
        while True:
            byte = x & 0x7F
            x >>= 7
            if x:
                self._buf.write(bytes([byte | 0x80]))
            else:
                self._buf.write(bytes([byte]))
                return

    def blob(self, b: bytes):
        self.varint(len(b))
        self.raw(b)

    def getvalue(self) -> bytes:
        return self._buf.getvalue()


class _Reader:
    def __init__(self, data: bytes):
        self._data = memoryview(data)
        self._pos = 0

    def raw(self, k: int) -> bytes:
        if self._pos + k > len(self._data):
            raise FormatError("truncated payload")
        out = bytes(self._data[self._pos:self._pos + k])
        self._pos += k
        return out

    def varint(self) -> int:
        x = shift = 0
        while True:
            (byte,) = self.raw(1)
            x |= (byte & 0x7F) << shift
            if not byte & 0x80:
                return x
            shift += 7
            if shift > 70:
                raise FormatError("varint too long")

    def blob(self) -> bytes:
        return self.raw(self.varint())

    def expect_end(self):
        if self._pos != len(self._data):
            raise FormatError("trailing bytes after payload")
