"""Compressed sets of 32-bit unsigned integers.

A RoaringBitmap keeps a sorted dynamic index of 16-bit keys (the high half
of each member) and one container per key holding the matching low halves.
The key index is searched with binary search; containers promote/demote
between the array and bitmap kinds around the 4096-cardinality threshold.

Serialized form (little-endian throughout):

    u32 magic 0x524F4152, u32 entry count, then per entry:
    u16 key, u16 cardinality-1, payload.

The payload is ``cardinality`` sorted u16 values when cardinality <= 4096,
else the 8192 bitmap bytes (word 0 first).  The container kind is a function
of the cardinality, so no kind flag is stored.
"""

import heapq
import itertools
import struct
import sys
from array import array
from bisect import bisect_left

from .container import (
    ARRAY_MAX,
    WORDS_PER_CONTAINER,
    ArrayContainer,
    BitmapContainer,
    container_and,
    container_or,
    container_or_inplace,
)

MAGIC = 0x524F4152
UNIVERSE_SIZE = 1 << 32


class FormatError(ValueError):
    """Malformed serialized stream; message names the offset and rule."""


def _check_value(x):
    if not isinstance(x, int) or not 0 <= x < UNIVERSE_SIZE:
        raise ValueError(f"value {x!r} is not a 32-bit unsigned integer")


def _native(arr):
    # array.tobytes emits native byte order; the wire format is little-endian
    if sys.byteorder == "big":
        arr = array(arr.typecode, arr)
        arr.byteswap()
    return arr


class RoaringBitmap:
    """Mutable set of 32-bit unsigned integers."""

    __slots__ = ("_keys", "_containers")

    def __init__(self, values=()):
        self._keys = array("H")
        self._containers = []
        vals = sorted(set(values))
        if not vals:
            return
        _check_value(vals[0])
        _check_value(vals[-1])
        i = 0
        n = len(vals)
        while i < n:
            hi = vals[i] >> 16
            j = bisect_left(vals, (hi + 1) << 16, i)
            lows = [v & 0xFFFF for v in vals[i:j]]
            if j - i <= ARRAY_MAX:
                c = ArrayContainer(array("H", lows))
            else:
                words = array("Q", bytes(8 * WORDS_PER_CONTAINER))
                for v in lows:
                    words[v >> 6] |= 1 << (v & 63)
                c = BitmapContainer(words, j - i)
            self._keys.append(hi)
            self._containers.append(c)
            i = j

    # -- basic set protocol -------------------------------------------------

    def __len__(self):
        # sum of per-container counters; no per-element work
        return sum(c.cardinality for c in self._containers)

    def __bool__(self):
        return bool(self._keys)

    def __contains__(self, x):
        _check_value(x)
        keys = self._keys
        i = bisect_left(keys, x >> 16)
        if i == len(keys) or keys[i] != x >> 16:
            return False
        return self._containers[i].contains(x & 0xFFFF)

    def __iter__(self):
        for key, c in zip(self._keys, self._containers):
            base = key << 16
            for low in c:
                yield base | low

    def __eq__(self, other):
        if not isinstance(other, RoaringBitmap):
            return NotImplemented
        return self._keys == other._keys and self._containers == other._containers

    def __repr__(self):
        return f"RoaringBitmap(card={len(self)}, containers={len(self._keys)})"

    def copy(self):
        out = RoaringBitmap()
        out._keys = array("H", self._keys)
        out._containers = [c.copy() for c in self._containers]
        return out

    def add(self, x):
        _check_value(x)
        hi, lo = x >> 16, x & 0xFFFF
        keys = self._keys
        i = bisect_left(keys, hi)
        if i < len(keys) and keys[i] == hi:
            c = self._containers[i]
            if isinstance(c, ArrayContainer):
                self._containers[i] = c.add(lo)
            else:
                c.set(lo)
        else:
            keys.insert(i, hi)
            self._containers.insert(i, ArrayContainer(array("H", [lo])))

    def discard(self, x):
        """Remove x; no-op when absent.  A container emptied by the removal
        is deleted together with its key."""
        _check_value(x)
        hi, lo = x >> 16, x & 0xFFFF
        keys = self._keys
        i = bisect_left(keys, hi)
        if i == len(keys) or keys[i] != hi:
            return
        c = self._containers[i]
        if isinstance(c, ArrayContainer):
            c = c.remove(lo)
        else:
            c = c.clear(lo)
        if c.cardinality == 0:
            del keys[i]
            del self._containers[i]
        else:
            self._containers[i] = c

    # -- whole-bitmap operations ---------------------------------------------

    def __or__(self, other):
        if not isinstance(other, RoaringBitmap):
            return NotImplemented
        out = RoaringBitmap()
        rk, rc = out._keys, out._containers
        ka, ca = self._keys, self._containers
        kb, cb = other._keys, other._containers
        i = j = 0
        la, lb = len(ka), len(kb)
        while i < la and j < lb:
            x, y = ka[i], kb[j]
            if x == y:
                rk.append(x)
                rc.append(container_or(ca[i], cb[j]))
                i += 1
                j += 1
            elif x < y:
                rk.append(x)
                rc.append(ca[i].copy())
                i += 1
            else:
                rk.append(y)
                rc.append(cb[j].copy())
                j += 1
        while i < la:
            rk.append(ka[i])
            rc.append(ca[i].copy())
            i += 1
        while j < lb:
            rk.append(kb[j])
            rc.append(cb[j].copy())
            j += 1
        return out

    def __and__(self, other):
        if not isinstance(other, RoaringBitmap):
            return NotImplemented
        out = RoaringBitmap()
        rk, rc = out._keys, out._containers
        ka, ca = self._keys, self._containers
        kb, cb = other._keys, other._containers
        i = j = 0
        la, lb = len(ka), len(kb)
        # terminates as soon as either key list is exhausted
        while i < la and j < lb:
            x, y = ka[i], kb[j]
            if x == y:
                c = container_and(ca[i], cb[j])
                if c.cardinality:
                    rk.append(x)
                    rc.append(c)
                i += 1
                j += 1
            elif x < y:
                i += 1
            else:
                j += 1
        return out

    def __ior__(self, other):
        if not isinstance(other, RoaringBitmap):
            return NotImplemented
        ka, ca = self._keys, self._containers
        kb, cb = other._keys, other._containers
        i = j = 0
        while i < len(ka) and j < len(kb):
            x, y = ka[i], kb[j]
            if x == y:
                ca[i] = container_or_inplace(ca[i], cb[j])
                i += 1
                j += 1
            elif x < y:
                i += 1
            else:
                ka.insert(i, y)
                ca.insert(i, cb[j].copy())
                i += 1
                j += 1
        while j < len(kb):
            ka.append(kb[j])
            ca.append(cb[j].copy())
            j += 1
        return self

    # -- rank / select -------------------------------------------------------

    def rank(self, x):
        """Number of members <= x."""
        _check_value(x)
        hi, lo = x >> 16, x & 0xFFFF
        keys = self._keys
        i = bisect_left(keys, hi)
        total = sum(c.cardinality for c in self._containers[:i])
        if i < len(keys) and keys[i] == hi:
            total += self._containers[i].rank(lo)
        return total

    def select(self, i):
        """The (i+1)-smallest member (i counted from 0)."""
        if not isinstance(i, int) or i < 0:
            raise IndexError(f"select index {i} out of range")
        left = i
        for key, c in zip(self._keys, self._containers):
            if left < c.cardinality:
                return (key << 16) | c.select(left)
            left -= c.cardinality
        raise IndexError(f"select index {i} out of range for cardinality {len(self)}")

    # -- storage -------------------------------------------------------------

    def trim(self):
        """Rebuild backing storage at exact size (drops growth slack)."""
        self._keys = array("H", self._keys)
        self._containers = list(self._containers)
        for c in self._containers:
            if isinstance(c, ArrayContainer):
                c.values = array("H", c.values)

    def size_in_bytes(self):
        """Serialized-size model: 8-byte header, 4 bytes per entry, plus
        2*cardinality (array) or 8192 (bitmap) payload bytes."""
        total = 8
        for c in self._containers:
            total += 4
            if isinstance(c, ArrayContainer):
                total += 2 * c.cardinality
            else:
                total += 8 * WORDS_PER_CONTAINER
        return total

    def serialize(self):
        parts = [struct.pack("<II", MAGIC, len(self._keys))]
        for key, c in zip(self._keys, self._containers):
            parts.append(struct.pack("<HH", key, c.cardinality - 1))
            if isinstance(c, ArrayContainer):
                parts.append(_native(c.values).tobytes())
            else:
                parts.append(_native(c.words).tobytes())
        return b"".join(parts)

    @classmethod
    def deserialize(cls, data):
        if len(data) < 8:
            raise FormatError("offset 0: truncated header (need 8 bytes)")
        magic, count = struct.unpack_from("<II", data, 0)
        if magic != MAGIC:
            raise FormatError(f"offset 0: bad magic 0x{magic:08X}, expected 0x{MAGIC:08X}")
        out = cls()
        offset = 8
        prev_key = -1
        for _ in range(count):
            if len(data) - offset < 4:
                raise FormatError(f"offset {offset}: truncated entry header")
            key, card_m1 = struct.unpack_from("<HH", data, offset)
            if key <= prev_key:
                raise FormatError(f"offset {offset}: keys not strictly increasing ({key} after {prev_key})")
            prev_key = key
            offset += 4
            card = card_m1 + 1
            if card <= ARRAY_MAX:
                nbytes = 2 * card
                if len(data) - offset < nbytes:
                    raise FormatError(f"offset {offset}: truncated array payload (need {nbytes} bytes)")
                values = array("H")
                values.frombytes(data[offset:offset + nbytes])
                if sys.byteorder == "big":
                    values.byteswap()
                if any(values[k] >= values[k + 1] for k in range(len(values) - 1)):
                    raise FormatError(f"offset {offset}: array values not strictly increasing")
                container = ArrayContainer(values)
            else:
                nbytes = 8 * WORDS_PER_CONTAINER
                if len(data) - offset < nbytes:
                    raise FormatError(f"offset {offset}: truncated bitmap payload (need {nbytes} bytes)")
                words = array("Q")
                words.frombytes(data[offset:offset + nbytes])
                if sys.byteorder == "big":
                    words.byteswap()
                weight = sum(w.bit_count() for w in words)
                if weight != card:
                    raise FormatError(f"offset {offset}: cardinality field {card} != bitmap weight {weight}")
                container = BitmapContainer(words, card)
            offset += nbytes
            out._keys.append(key)
            out._containers.append(container)
        if offset != len(data):
            raise FormatError(f"offset {offset}: trailing data ({len(data) - offset} bytes)")
        return out

    # -- auditing ------------------------------------------------------------

    def validate(self):
        """Raise ValueError on any structural invariant violation."""
        prev = -1
        for key, c in zip(self._keys, self._containers):
            if key <= prev:
                raise ValueError(f"keys not strictly increasing ({key} after {prev})")
            prev = key
            c.validate()
        if len(self._keys) != len(self._containers):
            raise ValueError("key/container length mismatch")


def union_many(bitmaps):
    """Union of any number of bitmaps via a key-ordered min-heap of all their
    containers.

    Containers sharing a key are folded largest-first into a clone of the
    largest; while the accumulator is a bitmap its cardinality is not
    maintained during the fold and is recounted once per key at the end.
    """
    heap = []
    tie = itertools.count()  # heap tiebreaker; containers are not orderable
    for r in bitmaps:
        for key, c in zip(r._keys, r._containers):
            heap.append((key, next(tie), c))
    heapq.heapify(heap)
    out = RoaringBitmap()
    while heap:
        key, _, first = heapq.heappop(heap)
        group = [first]
        while heap and heap[0][0] == key:
            group.append(heapq.heappop(heap)[2])
        group.sort(key=lambda c: c.cardinality, reverse=True)
        acc = group[0].copy()
        for c in group[1:]:
            if isinstance(acc, BitmapContainer):
                words = acc.words
                if isinstance(c, BitmapContainer):
                    cw = c.words
                    for i in range(WORDS_PER_CONTAINER):
                        words[i] |= cw[i]
                else:
                    for v in c.values:
                        words[v >> 6] |= 1 << (v & 63)
            else:
                # all-array group so far: any bitmap would have sorted first
                acc = container_or(acc, c)
        if isinstance(acc, BitmapContainer):
            acc.cardinality = acc.recount()
        out._keys.append(key)
        out._containers.append(acc)
    return out
