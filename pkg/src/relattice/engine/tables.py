"""Bit-level encoding of all relations over a small universe.

Headers become bitmasks over the sorted attribute list (bit i is attribute
i).  A relation on header h becomes an integer whose bit t is set when the
t-th tuple over h is present; tuples are indexed mixed-radix with the
lowest set bit of h as the least significant digit.  Projection between a
header and a subheader is then a precomputed index table, which is all the
randomized kernels need.

A universe is kernel-eligible when the tuple count over the full header
fits one machine word.  Larger universes still work through the
object-level evaluator; decode_rows keeps the two paths in agreement by
defining tuple order once, for masks of any width.
"""

from __future__ import annotations

from array import array
from typing import Iterable

from ..errors import SchemaError, UniverseMismatchError
from ..relations import Relation, Universe

__all__ = ["UniverseTables", "decode_rows", "encode_rows", "header_bits", "attrs_of_bits"]

MAX_WORD_TUPLES = 64
MAX_KERNEL_ATTRS = 10


def header_bits(u: Universe, header: Iterable[str]) -> int:
    attrs = u.attributes
    index = {a: i for i, a in enumerate(attrs)}
    bits = 0
    for a in header:
        if a not in index:
            raise UniverseMismatchError(f"attribute {a!r} is not in the universe")
        bits |= 1 << index[a]
    return bits


def attrs_of_bits(u: Universe, h: int) -> tuple[str, ...]:
    return tuple(a for i, a in enumerate(u.attributes) if (h >> i) & 1)


def decode_rows(u: Universe, header: tuple[str, ...], mask: int) -> frozenset[tuple[str, ...]]:
    """Rows named by the set bits of mask, in the shared mixed-radix order."""
    domains = [u.domain(a) for a in header]
    rows = []
    t = 0
    while mask:
        if mask & 1:
            idx = t
            row = []
            for dom in domains:
                row.append(dom[idx % len(dom)])
                idx //= len(dom)
            rows.append(tuple(row))
        mask >>= 1
        t += 1
    return frozenset(rows)


def encode_rows(u: Universe, header: tuple[str, ...], rows: Iterable[tuple[str, ...]]) -> int:
    domains = [u.domain(a) for a in header]
    value_index = [{v: i for i, v in enumerate(dom)} for dom in domains]
    mask = 0
    for row in rows:
        idx = 0
        stride = 1
        for pos, (vi, dom) in enumerate(zip(value_index, domains)):
            if row[pos] not in vi:
                raise SchemaError(f"value {row[pos]!r} is outside the domain of {header[pos]!r}")
            idx += vi[row[pos]] * stride
            stride *= len(dom)
        mask |= 1 << idx
    return mask


class UniverseTables:
    """Per-universe lookup tables for the mask encoding."""

    def __init__(self, u: Universe):
        self.universe = u
        self.attrs = u.attributes
        self.k = len(self.attrs)
        self.H = 1 << self.k
        self.dom_sizes = tuple(len(u.domain(a)) for a in self.attrs)
        sizes = []
        for h in range(self.H):
            n = 1
            for i in range(self.k):
                if (h >> i) & 1:
                    n *= self.dom_sizes[i]
            sizes.append(n)
        self.sizes = sizes
        self.full = self.H - 1
        self.full_size = sizes[self.full]
        self.all_mask = (1 << self.full_size) - 1
        self.eligible = self.full_size <= MAX_WORD_TUPLES and self.k <= MAX_KERNEL_ATTRS
        self._proj: dict[tuple[int, int], list[int]] = {}
        self._down: dict[tuple[int, int], list[int]] = {}
        self._dense = None

    def header_attrs(self, h: int) -> tuple[str, ...]:
        return tuple(a for i, a in enumerate(self.attrs) if (h >> i) & 1)

    def proj(self, h_sup: int, h_sub: int) -> list[int]:
        """Tuple-index map from h_sup down to h_sub (h_sub must be a subset)."""
        key = (h_sup, h_sub)
        cached = self._proj.get(key)
        if cached is not None:
            return cached
        table = [0] * self.sizes[h_sup]
        for t in range(self.sizes[h_sup]):
            idx = t
            sub = 0
            sub_stride = 1
            for i in range(self.k):
                if not (h_sup >> i) & 1:
                    continue
                d = self.dom_sizes[i]
                digit = idx % d
                idx //= d
                if (h_sub >> i) & 1:
                    sub += digit * sub_stride
                    sub_stride *= d
            table[t] = sub
        self._proj[key] = table
        return table

    def down(self, h_sup: int, h_sub: int) -> list[int]:
        """Per sub-tuple index, the mask of sup-tuple indices projecting onto it."""
        key = (h_sup, h_sub)
        cached = self._down.get(key)
        if cached is not None:
            return cached
        table = [0] * self.sizes[h_sub]
        for t, s in enumerate(self.proj(h_sup, h_sub)):
            table[s] |= 1 << t
        self._down[key] = table
        return table

    def mask_of(self, rel: Relation) -> tuple[int, int]:
        if rel.universe is not None and rel.universe != self.universe:
            raise UniverseMismatchError("relation belongs to a different universe")
        h = header_bits(self.universe, rel.header)
        return h, encode_rows(self.universe, rel.header, rel.rows)

    def relation_of(self, h: int, mask: int) -> Relation:
        header = self.header_attrs(h)
        return Relation(header, decode_rows(self.universe, header, mask), self.universe)

    def dense(self):
        """Flat arrays for the compiled kernels; built once per universe."""
        if self._dense is None:
            if not self.eligible:
                raise SchemaError("universe is too large for the word-sized kernels")
            pair_off = array("i", [-1] * (self.H * self.H))
            data = array("i")
            for h_sup in range(self.H):
                sub = h_sup
                while True:
                    pair_off[h_sup * self.H + sub] = len(data)
                    data.extend(self.proj(h_sup, sub))
                    if sub == 0:
                        break
                    sub = (sub - 1) & h_sup
            self._dense = (array("i", self.sizes), pair_off, data)
        return self._dense
