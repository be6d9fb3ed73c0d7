"""Uncompressed growable bitset baseline with clone-then-combine operations."""

from array import array


class PlainBitset:
    """Bit array over 64-bit words; capacity doubles on growth."""

    __slots__ = ("words",)

    def __init__(self, values=()):
        self.words = array("Q")
        for v in values:
            self.set(v)

    def _ensure(self, word_index):
        n = len(self.words)
        if word_index >= n:
            new_len = max(1, 2 * n)
            while new_len <= word_index:
                new_len *= 2
            self.words.extend([0] * (new_len - n))

    def set(self, x):
        wi = x >> 6
        self._ensure(wi)
        self.words[wi] |= 1 << (x & 63)

    def clear(self, x):
        wi = x >> 6
        if wi < len(self.words):
            self.words[wi] &= ~(1 << (x & 63)) & 0xFFFFFFFFFFFFFFFF

    def test(self, x):
        wi = x >> 6
        if wi >= len(self.words):
            return False
        return (self.words[wi] >> (x & 63)) & 1 == 1

    def clone(self):
        out = PlainBitset()
        out.words = array("Q", self.words)
        return out

    def clone_and(self, other):
        """Copy of self intersected word-wise with other."""
        out = self.clone()
        ow, bw = out.words, other.words
        nb = len(bw)
        for i in range(len(ow)):
            ow[i] &= bw[i] if i < nb else 0
        return out

    def clone_or(self, other):
        """Copy of self unioned word-wise with other (growing as needed)."""
        out = self.clone()
        if len(other.words) > len(out.words):
            out._ensure(len(other.words) - 1)
        ow = out.words
        for i, w in enumerate(other.words):
            ow[i] |= w
        return out

    def cardinality(self):
        return sum(w.bit_count() for w in self.words)

    def __iter__(self):
        for wi, w in enumerate(self.words):
            base = wi << 6
            while w:
                t = w & -w
                yield base + (t - 1).bit_count()
                w &= w - 1

    def __eq__(self, other):
        if not isinstance(other, PlainBitset):
            return NotImplemented
        la, lb = len(self.words), len(other.words)
        shared = min(la, lb)
        if self.words[:shared] != other.words[:shared]:
            return False
        return not any(self.words[shared:]) and not any(other.words[shared:])

    def __repr__(self):
        return f"PlainBitset(capacity_words={len(self.words)})"

    @property
    def capacity_words(self):
        """Allocated length, exposing the doubling growth."""
        return len(self.words)

    def allocated_bytes(self):
        return 8 * len(self.words)

    def trim(self):
        """Shrink allocation to the last word holding a set bit."""
        n = len(self.words)
        while n and not self.words[n - 1]:
            n -= 1
        if n < len(self.words):
            self.words = array("Q", self.words[:n])
