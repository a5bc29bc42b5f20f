"""Rank/select structures for the transform and its index.

Positions are 1-based throughout. ``rank(i, b)`` counts ``b`` in positions
``1..i`` (so ``rank(0) == 0``); ``select(j, b)`` is the position of the j-th
``b``, with ``select(0) == 0`` and ``len + 1`` when there are fewer than j.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from typing import Iterable

WORD = 64
_MASK = (1 << WORD) - 1


class BitVector:
    """Immutable bit vector: a popcount directory per 64-bit word for rank,
    position tables built on first use for select."""

    __slots__ = ("_len", "_value", "_words", "_cum1", "_ones", "_sel")

    def __init__(self, bits: Iterable[int] | str = ()):
        if isinstance(bits, str):
            bits = [_bit(c) for c in bits]
        value = 0
        n = 0
        for i, b in enumerate(bits):
            if b not in (0, 1, True, False):
                raise ValueError(f"bit expected, got {b!r}")
            if b:
                value |= 1 << i
            n = i + 1
        self._init(value, n)

    @classmethod
    def from_int(cls, value: int, length: int) -> "BitVector":
        if value < 0 or value >> length:
            raise ValueError("value does not fit the length")
        bv = cls.__new__(cls)
        bv._init(value, length)
        return bv

    def _init(self, value, n):
        self._len = n
        self._value = value
        nwords = (n + WORD - 1) // WORD
        self._words = [(value >> (WORD * k)) & _MASK for k in range(nwords)]
        cum = [0]
        for w in self._words:
            cum.append(cum[-1] + w.bit_count())
        self._cum1 = cum
        self._ones = cum[-1]
        self._sel = [None, None]

    def __len__(self):
        return self._len

    def __getitem__(self, i: int) -> int:
        if not 1 <= i <= self._len:
            raise IndexError(i)
        return (self._value >> (i - 1)) & 1

    access = __getitem__

    def __iter__(self):
        v = self._value
        for i in range(self._len):
            yield (v >> i) & 1

    def __eq__(self, other):
        return isinstance(other, BitVector) and self._len == other._len and self._value == other._value

    def __hash__(self):
        return hash((self._len, self._value))

    def __str__(self):
        return "".join("1" if b else "0" for b in self)

    def __repr__(self):
        return f"BitVector('{self}')"

    @property
    def ones(self) -> int:
        return self._ones

    @property
    def value(self) -> int:
        return self._value

    def count(self, b: int) -> int:
        return self._ones if b else self._len - self._ones

    def rank(self, i: int, b: int = 1) -> int:
        if i < 0:
            raise IndexError(i)
        i = min(i, self._len)
        k, r = divmod(i, WORD)
        ones = self._cum1[k]
        if r:
            ones += (self._words[k] & ((1 << r) - 1)).bit_count()
        return ones if b else i - ones

    def select(self, j: int, b: int = 1) -> int:
        if j <= 0:
            return 0
        if j > self.count(b):
            return self._len + 1
        table = self._sel[1 if b else 0]
        if table is None:
            table = self._build_select(b)
        return table[j - 1]

    def _build_select(self, b: int) -> list[int]:
        # explicit position sample: O(n) words, O(1) select
        v = self._value if b else ~self._value
        table = [i + 1 for i in range(self._len) if (v >> i) & 1]
        self._sel[1 if b else 0] = table
        return table

    def to_bytes(self) -> bytes:
        return self._value.to_bytes((self._len + 7) // 8, "little")

    @classmethod
    def from_bytes(cls, data: bytes, length: int) -> "BitVector":
        if len(data) != (length + 7) // 8:
            raise ValueError("payload size does not match bit length")
        return cls.from_int(int.from_bytes(data, "little"), length)


def _bit(c):
    if c == "1":
        return 1
    if c == "0":
        return 0
    raise ValueError(f"bit expected, got {c!r}")


class PairSequence:
    """Sequence over (chain, label) pairs with rank/select per pair.

    Each distinct pair keeps a sorted list of its positions, so rank and
    select are binary searches.
    """

    __slots__ = ("_items", "_pos")

    def __init__(self, items: Iterable[tuple[int, int]] = ()):
        self._items = tuple((int(c), int(a)) for c, a in items)
        pos: dict[tuple[int, int], list[int]] = {}
        for i, p in enumerate(self._items, 1):
            pos.setdefault(p, []).append(i)
        self._pos = pos

    def __len__(self):
        return len(self._items)

    def __getitem__(self, i: int) -> tuple[int, int]:
        if not 1 <= i <= len(self._items):
            raise IndexError(i)
        return self._items[i - 1]

    access = __getitem__

    def __iter__(self):
        return iter(self._items)

    def __eq__(self, other):
        return isinstance(other, PairSequence) and self._items == other._items

    def __hash__(self):
        return hash(self._items)

    def __repr__(self):
        return f"PairSequence({list(self._items)})"

    def rank(self, i: int, pair: tuple[int, int]) -> int:
        lst = self._pos.get(pair)
        return bisect_right(lst, i) if lst else 0

    def select(self, j: int, pair: tuple[int, int]) -> int:
        if j <= 0:
            return 0
        lst = self._pos.get(pair, ())
        return lst[j - 1] if j <= len(lst) else len(self._items) + 1

    def items(self) -> tuple[tuple[int, int], ...]:
        return self._items


class IntDictionary:
    """Static set of integers with rank, select, predecessor and successor."""

    __slots__ = ("_keys",)

    def __init__(self, keys: Iterable[int] = ()):
        self._keys = sorted(set(int(k) for k in keys))

    def __len__(self):
        return len(self._keys)

    def __contains__(self, x):
        i = bisect_left(self._keys, x)
        return i < len(self._keys) and self._keys[i] == x

    def __iter__(self):
        return iter(self._keys)

    def __eq__(self, other):
        return isinstance(other, IntDictionary) and self._keys == other._keys

    def __repr__(self):
        return f"IntDictionary({self._keys})"

    def rank(self, x: int) -> int:
        """Number of keys <= x."""
        return bisect_right(self._keys, x)

    def select(self, j: int) -> int | None:
        return self._keys[j - 1] if 1 <= j <= len(self._keys) else None

    def pred(self, x: int) -> int | None:
        """Largest key <= x."""
        i = bisect_right(self._keys, x)
        return self._keys[i - 1] if i else None

    def succ(self, x: int) -> int | None:
        """Smallest key > x."""
        i = bisect_right(self._keys, x)
        return self._keys[i] if i < len(self._keys) else None
