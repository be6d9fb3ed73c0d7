"""One uniform surface over the four measured schemes.

The benchmark and the real-data harness drive every format through the same
small adapter API: build from a sorted value list, report a size, combine,
decode for verification, and mutate.  Immutable formats return a new object
from ``append``/``remove``; the others mutate and return the same object.
"""

from .bitset import PlainBitset
from .rle import SEGMENT_BITS, SEGMENT_ONES, ConciseBitmap, WahBitmap
from .roaring import RoaringBitmap

SCHEMES = ("roaring", "wah", "concise", "bitset")


class CorrectnessError(RuntimeError):
    """A timed operation's result disagreed with the reference set."""


class _RoaringScheme:
    name = "roaring"

    @staticmethod
    def build(values):
        r = RoaringBitmap(values)
        r.trim()  # sizes are reported after trimming
        return r

    @staticmethod
    def size_bits(r):
        return 8 * r.size_in_bytes()

    @staticmethod
    def intersect(a, b):
        return a & b

    @staticmethod
    def union(a, b):
        return a | b

    @staticmethod
    def decode(r):
        return list(r)

    @staticmethod
    def cardinality(r):
        return len(r)

    @staticmethod
    def contains(r, v):
        return v in r

    @staticmethod
    def mutable_copy(r):
        return r.copy()

    @staticmethod
    def append(r, v):
        r.add(v)
        return r

    @staticmethod
    def remove(r, v):
        r.discard(v)
        return r


class _RleScheme:
    cls = None

    @classmethod
    def build(cls, values):
        return cls.cls.encode(values)

    @staticmethod
    def size_bits(b):
        return b.size_bits

    @staticmethod
    def intersect(a, b):
        return a & b

    @staticmethod
    def union(a, b):
        return a | b

    @staticmethod
    def decode(b):
        return b.decode()

    @staticmethod
    def cardinality(b):
        total = 0
        for payload, count in b._runs(b.words):
            if payload:
                total += SEGMENT_BITS * count if payload == SEGMENT_ONES else payload.bit_count()
        return total

    @staticmethod
    def contains(b, v):
        return b.contains(v)

    @staticmethod
    def mutable_copy(b):
        return b  # immutable; append/remove return new bitmaps

    @staticmethod
    def append(b, v):
        return b.with_added(v)

    @classmethod
    def remove(cls, b, v):
        return cls.cls.encode([x for x in b.decode() if x != v])


class _WahScheme(_RleScheme):
    name = "wah"
    cls = WahBitmap


class _ConciseScheme(_RleScheme):
    name = "concise"
    cls = ConciseBitmap


class _BitsetScheme:
    name = "bitset"

    @staticmethod
    def build(values):
        return PlainBitset(values)

    @staticmethod
    def size_bits(b):
        # allocated (untrimmed) size: the doubling slack is part of the story
        return 8 * b.allocated_bytes()

    @staticmethod
    def intersect(a, b):
        return a.clone_and(b)  # the clone is part of the measured cost

    @staticmethod
    def union(a, b):
        return a.clone_or(b)

    @staticmethod
    def decode(b):
        return list(b)

    @staticmethod
    def cardinality(b):
        return b.cardinality()

    @staticmethod
    def contains(b, v):
        return b.test(v)

    @staticmethod
    def mutable_copy(b):
        return b.clone()

    @staticmethod
    def append(b, v):
        b.set(v)
        return b

    @staticmethod
    def remove(b, v):
        b.clear(v)
        return b


SCHEME_IMPLS = {
    "roaring": _RoaringScheme,
    "wah": _WahScheme,
    "concise": _ConciseScheme,
    "bitset": _BitsetScheme,
}
