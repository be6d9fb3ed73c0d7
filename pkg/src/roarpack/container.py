"""Per-chunk containers: sorted 16-bit arrays for sparse chunks, 65536-bit
bitmaps for dense ones, and every single- and two-container operation.

A chunk is the range of 32-bit values sharing the same high 16 bits; a
container stores the low 16 bits of the chunk's members.  The normalization
contract is global: whenever a container is stored in a top-level bitmap it
must be an ArrayContainer iff its cardinality is <= ARRAY_MAX and a
BitmapContainer iff it is larger.  Operations here may return empty array
containers; the caller is responsible for dropping those.

Mutating operations return the container to store back, which may be a
different object when a promotion (array -> bitmap) or demotion
(bitmap -> array) happened.
"""

from array import array
from bisect import bisect_left, bisect_right

# Largest cardinality stored as a sorted array; one more forces a bitmap.
ARRAY_MAX = 4096
WORDS_PER_CONTAINER = 1024
CHUNK_SIZE = 1 << 16

_WORD_MASK = (1 << 64) - 1


def extract_set_bits(word, base=0):
    """Positions of the set bits of a 64-bit word, offset by ``base``.

    Uses the isolate-lowest-bit loop (w & -w) rather than testing all 64
    positions; relies on Python ints behaving as two's complement.
    """
    out = []
    while word:
        t = word & -word
        out.append(base + (t - 1).bit_count())
        word &= word - 1
    return out


def gallop_search(values, start, target):
    """Smallest index >= start with values[index] >= target, else len(values).

    Probes at exponentially growing offsets from ``start`` and finishes with
    a binary search over the bracketed range.  ``values`` must be sorted.
    """
    n = len(values)
    if start >= n or values[start] >= target:
        return start
    # values[lo] < target from here on
    lo = start
    step = 1
    while True:
        probe = start + step
        if probe >= n:
            hi = n
            break
        if values[probe] >= target:
            hi = probe
            break
        lo = probe
        step <<= 1
    return bisect_left(values, target, lo + 1, hi)


class ArrayContainer:
    """Sorted, duplicate-free packed 16-bit values."""

    __slots__ = ("values",)

    def __init__(self, values=None):
        self.values = array("H") if values is None else values

    @property
    def cardinality(self):
        return len(self.values)

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __eq__(self, other):
        return isinstance(other, ArrayContainer) and self.values == other.values

    def __repr__(self):
        return f"ArrayContainer(card={len(self.values)})"

    def copy(self):
        return ArrayContainer(array("H", self.values))

    def contains(self, x):
        v = self.values
        i = bisect_left(v, x)
        return i < len(v) and v[i] == x

    def add(self, x):
        """Insert x; returns the container to store (a bitmap when the
        cardinality would exceed ARRAY_MAX)."""
        v = self.values
        i = bisect_left(v, x)
        if i < len(v) and v[i] == x:
            return self
        if len(v) == ARRAY_MAX:
            b = self.to_bitmap()
            b.set(x)
            return b
        v.insert(i, x)
        return self

    def remove(self, x):
        """Delete x if present; result may be empty (caller drops it)."""
        v = self.values
        i = bisect_left(v, x)
        if i < len(v) and v[i] == x:
            del v[i]
        return self

    def rank(self, x):
        return bisect_right(self.values, x)

    def select(self, i):
        if not 0 <= i < len(self.values):
            raise IndexError(f"select index {i} out of range 0..{len(self.values) - 1}")
        return self.values[i]

    def to_bitmap(self):
        """Fresh zero-initialized bitmap with this container's bits set."""
        words = array("Q", bytes(8 * WORDS_PER_CONTAINER))
        for v in self.values:
            words[v >> 6] |= 1 << (v & 63)
        return BitmapContainer(words, len(self.values))

    def validate(self):
        """Stored-form invariants: cardinality in [1, ARRAY_MAX], strictly
        increasing values."""
        v = self.values
        if not 1 <= len(v) <= ARRAY_MAX:
            raise ValueError(f"array container cardinality {len(v)} outside [1, {ARRAY_MAX}]")
        if list(v) != sorted(set(v)):
            raise ValueError("array container values not strictly increasing")


class BitmapContainer:
    """1024 64-bit words plus a cached cardinality."""

    __slots__ = ("words", "cardinality")

    def __init__(self, words, cardinality):
        self.words = words
        self.cardinality = cardinality

    @classmethod
    def empty(cls):
        return cls(array("Q", bytes(8 * WORDS_PER_CONTAINER)), 0)

    def __len__(self):
        return self.cardinality

    def __iter__(self):
        for wi, w in enumerate(self.words):
            if w:
                yield from extract_set_bits(w, wi << 6)

    def __eq__(self, other):
        return isinstance(other, BitmapContainer) and self.words == other.words

    def __repr__(self):
        return f"BitmapContainer(card={self.cardinality})"

    def copy(self):
        return BitmapContainer(array("Q", self.words), self.cardinality)

    def contains(self, x):
        return (self.words[x >> 6] >> (x & 63)) & 1 == 1

    def set(self, x):
        """Set bit x, keeping the cached cardinality in step."""
        w = self.words[x >> 6]
        bit = 1 << (x & 63)
        if not w & bit:
            self.words[x >> 6] = w | bit
            self.cardinality += 1
        return self

    def clear(self, x):
        """Clear bit x; demotes to an array once the cardinality is back at
        ARRAY_MAX or below."""
        w = self.words[x >> 6]
        bit = 1 << (x & 63)
        if w & bit:
            self.words[x >> 6] = w & ~bit
            self.cardinality -= 1
            if self.cardinality <= ARRAY_MAX:
                return self.to_array()
        return self

    def recount(self):
        return sum(w.bit_count() for w in self.words)

    def rank(self, x):
        wi = x >> 6
        words = self.words
        c = 0
        for k in range(wi):
            c += words[k].bit_count()
        mask = (1 << ((x & 63) + 1)) - 1
        return c + (words[wi] & mask).bit_count()

    def select(self, i):
        if not 0 <= i < self.cardinality:
            raise IndexError(f"select index {i} out of range 0..{self.cardinality - 1}")
        left = i
        for wi, w in enumerate(self.words):
            c = w.bit_count()
            if left < c:
                for _ in range(left):
                    w &= w - 1
                return (wi << 6) + ((w & -w) - 1).bit_count()
            left -= c
        raise AssertionError("cached cardinality exceeds actual weight")

    def to_array(self):
        """Demote to an array container; requires cardinality <= ARRAY_MAX."""
        if self.cardinality > ARRAY_MAX:
            raise ValueError(f"cannot convert bitmap of cardinality {self.cardinality} to array")
        out = array("H")
        extend = out.extend
        for wi, w in enumerate(self.words):
            if w:
                extend(extract_set_bits(w, wi << 6))
        return ArrayContainer(out)

    def validate(self):
        """Stored-form invariants: exact word count, sound cached cardinality,
        cardinality above the array threshold."""
        if len(self.words) != WORDS_PER_CONTAINER:
            raise ValueError(f"bitmap container has {len(self.words)} words, expected {WORDS_PER_CONTAINER}")
        actual = self.recount()
        if actual != self.cardinality:
            raise ValueError(f"cached cardinality {self.cardinality} != recount {actual}")
        if not ARRAY_MAX < self.cardinality <= CHUNK_SIZE:
            raise ValueError(f"bitmap container cardinality {self.cardinality} outside ({ARRAY_MAX}, {CHUNK_SIZE}]")


def bitmap_or_bitmap(a, b):
    """Union of two bitmap containers; cardinality accumulated in the same
    pass as the ORs.  Always a bitmap (cannot shrink below either input)."""
    out = array("Q", bytes(8 * WORDS_PER_CONTAINER))
    aw, bw = a.words, b.words
    c = 0
    for i in range(WORDS_PER_CONTAINER):
        w = aw[i] | bw[i]
        out[i] = w
        c += w.bit_count()
    return BitmapContainer(out, c)


def bitmap_or_bitmap_inplace(a, b):
    """Union written into a's words; cardinality refreshed in the same pass."""
    aw, bw = a.words, b.words
    c = 0
    for i in range(WORDS_PER_CONTAINER):
        w = aw[i] | bw[i]
        aw[i] = w
        c += w.bit_count()
    a.cardinality = c
    return a


def bitmap_and_bitmap(a, b):
    """Intersection of two bitmap containers, two-pass: count first, then
    materialize as bitmap (count > ARRAY_MAX) or array (otherwise)."""
    aw, bw = a.words, b.words
    c = 0
    for i in range(WORDS_PER_CONTAINER):
        c += (aw[i] & bw[i]).bit_count()
    if c > ARRAY_MAX:
        out = array("Q", bytes(8 * WORDS_PER_CONTAINER))
        for i in range(WORDS_PER_CONTAINER):
            out[i] = aw[i] & bw[i]
        return BitmapContainer(out, c)
    out = array("H")
    extend = out.extend
    for i in range(WORDS_PER_CONTAINER):
        w = aw[i] & bw[i]
        if w:
            extend(extract_set_bits(w, i << 6))
    return ArrayContainer(out)


def bitmap_and_array(b, a):
    """Members of the array whose bit is set in the bitmap.  Result is always
    an array (it cannot exceed the array input)."""
    out = array("H")
    append = out.append
    words = b.words
    for v in a.values:
        if (words[v >> 6] >> (v & 63)) & 1:
            append(v)
    return ArrayContainer(out)


def bitmap_or_array(b, a):
    """Copy of the bitmap with the array's bits set."""
    return bitmap_or_array_inplace(b.copy(), a)


def bitmap_or_array_inplace(b, a):
    """Set the array's bits in b; cardinality bumped only when a word
    actually changes."""
    words = b.words
    card = b.cardinality
    for v in a.values:
        wi = v >> 6
        bit = 1 << (v & 63)
        w = words[wi]
        if not w & bit:
            words[wi] = w | bit
            card += 1
    b.cardinality = card
    return b


def _union_merge(av, bv):
    out = array("H")
    append = out.append
    i = j = 0
    la, lb = len(av), len(bv)
    while i < la and j < lb:
        x = av[i]
        y = bv[j]
        if x < y:
            append(x)
            i += 1
        elif x > y:
            append(y)
            j += 1
        else:
            append(x)
            i += 1
            j += 1
    if i < la:
        out.extend(av[i:])
    if j < lb:
        out.extend(bv[j:])
    return out


def array_or_array(a, b):
    """Union of two array containers.  Small combined cardinality goes through
    a duplicate-eliminating merge; otherwise both are splashed into a scratch
    bitmap whose weight decides the final kind."""
    if len(a.values) + len(b.values) <= ARRAY_MAX:
        return ArrayContainer(_union_merge(a.values, b.values))
    words = array("Q", bytes(8 * WORDS_PER_CONTAINER))
    for v in a.values:
        words[v >> 6] |= 1 << (v & 63)
    for v in b.values:
        words[v >> 6] |= 1 << (v & 63)
    c = sum(w.bit_count() for w in words)
    result = BitmapContainer(words, c)
    if c <= ARRAY_MAX:
        return result.to_array()
    return result


def _intersect_merge(av, bv):
    out = array("H")
    append = out.append
    i = j = 0
    la, lb = len(av), len(bv)
    while i < la and j < lb:
        x = av[i]
        y = bv[j]
        if x < y:
            i += 1
        elif x > y:
            j += 1
        else:
            append(x)
            i += 1
            j += 1
    return out


def _intersect_gallop(small, large):
    out = array("H")
    append = out.append
    pos = 0
    n = len(large)
    for x in small:
        pos = gallop_search(large, pos, x)
        if pos == n:
            break
        if large[pos] == x:
            append(x)
            pos += 1
    return out


def array_and_array(a, b):
    """Intersection of two array containers: plain merge when the
    cardinalities are within a factor of 64, galloping (smaller side driving)
    otherwise.  Ties at the boundary go to galloping."""
    av, bv = a.values, b.values
    if len(av) > len(bv):
        av, bv = bv, av
    if len(bv) < 64 * len(av):
        return ArrayContainer(_intersect_merge(av, bv))
    return ArrayContainer(_intersect_gallop(av, bv))


def container_or(x, y):
    """Union of two containers of any kinds; result is a fresh container."""
    if isinstance(x, BitmapContainer):
        if isinstance(y, BitmapContainer):
            return bitmap_or_bitmap(x, y)
        return bitmap_or_array(x, y)
    if isinstance(y, BitmapContainer):
        return bitmap_or_array(y, x)
    return array_or_array(x, y)


def container_and(x, y):
    """Intersection of two containers of any kinds; may be empty."""
    if isinstance(x, BitmapContainer):
        if isinstance(y, BitmapContainer):
            return bitmap_and_bitmap(x, y)
        return bitmap_and_array(x, y)
    if isinstance(y, BitmapContainer):
        return bitmap_and_array(y, x)
    return array_and_array(x, y)


def container_or_inplace(x, y):
    """Union into x where its kind permits; y is never mutated.  Returns the
    container to store in x's slot (x may have been replaced)."""
    if isinstance(x, BitmapContainer):
        if isinstance(y, BitmapContainer):
            return bitmap_or_bitmap_inplace(x, y)
        return bitmap_or_array_inplace(x, y)
    if isinstance(y, BitmapContainer):
        return bitmap_or_array(y, x)
    return array_or_array(x, y)
