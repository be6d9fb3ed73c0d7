"""Word-aligned run-length-encoded bitmaps: the WAH and Concise formats.

Both formats chop the underlying bitmap into 31-bit segments and store one
32-bit word per literal segment or per run of homogeneous segments:

  literal   msb 0, bits 0..30 hold one heterogeneous segment
  WAH fill  msb 1, bit 30 the fill bit, bits 0..29 the run length (>= 1
            segments)
  Concise   msb 1, bit 30 the fill bit, bits 25..29 a position p, bits 0..24
  fill      a run length r.  p == 0 decodes to r+1 fill segments; p != 0
            decodes to one segment with bit p-1 flipped relative to the fill
            bit, followed by r fill segments.

Encoders emit canonical form: homogeneous segments are always fills, never
literals; adjacent same-value fills are merged (except across a word whose
run field is saturated); Concise codes any one-set-bit or one-clear-bit
segment as a position fill, with r = 0 when no compatible run follows.

Encoding covers ceil((max+1)/31) segments by default; an explicit ``n_bits``
universe extends coverage with trailing zero fill.  Operations treat missing
tail segments as zero fill and cover the longer input's range.

Bitmaps are immutable after construction and freely shareable.
"""

from .container import extract_set_bits

SEGMENT_BITS = 31
SEGMENT_ONES = (1 << 31) - 1
_FILL_FLAG = 1 << 31
_WORD_MAX = (1 << 32) - 1


class FormatError(ValueError):
    """Non-canonical or malformed word sequence."""


class _WahBuilder:
    """Accumulates (payload, count) segment runs into canonical WAH words."""

    MAX_RUN = (1 << 30) - 1

    __slots__ = ("words", "_fill_value", "_fill_count")

    def __init__(self):
        self.words = []
        self._fill_value = 0
        self._fill_count = 0

    def feed(self, payload, count=1):
        if payload == 0:
            self._fill(0, count)
        elif payload == SEGMENT_ONES:
            self._fill(1, count)
        else:
            self._flush()
            self.words.append(payload)

    def _fill(self, value, count):
        if self._fill_count and self._fill_value != value:
            self._flush()
        self._fill_value = value
        self._fill_count += count

    def _flush(self):
        value, count = self._fill_value, self._fill_count
        while count:
            r = min(count, self.MAX_RUN)
            self.words.append(_FILL_FLAG | (value << 30) | r)
            count -= r
        self._fill_count = 0

    def finish(self):
        self._flush()
        return self.words


class _ConciseBuilder:
    """As _WahBuilder, but folds one-flipped-bit segments into position fills."""

    MAX_RUN = (1 << 25) - 1

    __slots__ = ("words", "_flip_bit", "_flip_value", "_fill_value", "_fill_count")

    def __init__(self):
        self.words = []
        self._flip_bit = -1
        self._flip_value = 0
        self._fill_value = 0
        self._fill_count = 0

    def feed(self, payload, count=1):
        if payload == 0:
            self._fill(0, count)
        elif payload == SEGMENT_ONES:
            self._fill(1, count)
        else:
            weight = payload.bit_count()
            if weight == 1:
                self._flip(payload.bit_length() - 1, 0)
            elif weight == 30:
                self._flip((payload ^ SEGMENT_ONES).bit_length() - 1, 1)
            else:
                self._flush()
                self.words.append(payload)

    def _flip(self, bit, value):
        self._flush()
        self._flip_bit = bit
        self._flip_value = value

    def _fill(self, value, count):
        if self._fill_count and self._fill_value != value:
            self._flush()
        elif self._flip_bit >= 0 and self._fill_count == 0 and self._flip_value != value:
            self._flush()  # pending flip is incompatible, emit it with r=0
        self._fill_value = value
        self._fill_count += count

    def _flush(self):
        value, count = self._fill_value, self._fill_count
        if self._flip_bit >= 0:
            r = min(count, self.MAX_RUN)
            self.words.append(
                _FILL_FLAG | (self._flip_value << 30) | ((self._flip_bit + 1) << 25) | r
            )
            count -= r
            self._flip_bit = -1
        while count:
            cover = min(count, self.MAX_RUN + 1)  # p=0 word spans r+1 segments
            self.words.append(_FILL_FLAG | (value << 30) | (cover - 1))
            count -= cover
        self._fill_count = 0

    def finish(self):
        self._flush()
        return self.words


class _RleBitmap:
    """Shared surface of the two formats; subclasses supply the word codec."""

    __slots__ = ("words",)

    _Builder = None

    def __init__(self, words=None):
        self.words = [] if words is None else list(words)

    @classmethod
    def encode(cls, values, n_bits=None):
        """Canonical encoding of a sorted duplicate-free set of non-negative
        integers.  ``n_bits`` fixes the universe size; default is max+1."""
        builder = cls._Builder()
        payload = 0
        current_segment = -1
        prev = -1
        for v in values:
            if v <= prev:
                raise ValueError("values must be sorted, duplicate-free and non-negative")
            prev = v
            seg, offset = divmod(v, SEGMENT_BITS)
            if seg != current_segment:
                if current_segment >= 0:
                    builder.feed(payload)
                gap = seg - current_segment - 1 if current_segment >= 0 else seg
                if gap:
                    builder.feed(0, gap)
                current_segment = seg
                payload = 0
            payload |= 1 << offset
        if current_segment >= 0:
            builder.feed(payload)
        if n_bits is not None:
            if prev >= n_bits:
                raise ValueError(f"value {prev} outside universe of {n_bits} bits")
            total = -(-n_bits // SEGMENT_BITS)
            covered = current_segment + 1
            if total > covered:
                builder.feed(0, total - covered)
        return cls(builder.finish())

    @classmethod
    def from_words(cls, words):
        """Adopt a raw word sequence after validating canonical form."""
        cls._validate(words)
        return cls(list(words))

    @property
    def size_bits(self):
        return 32 * len(self.words)

    @property
    def n_segments(self):
        return sum(count for _, count in self._runs(self.words))

    def __eq__(self, other):
        return type(other) is type(self) and self.words == other.words

    def __repr__(self):
        return f"{type(self).__name__}(words={len(self.words)})"

    def decode(self):
        """Ascending member list; validates canonical form first."""
        self._validate(self.words)
        out = []
        base = 0
        for payload, count in self._runs(self.words):
            if payload == 0:
                base += SEGMENT_BITS * count
            elif payload == SEGMENT_ONES:
                end = base + SEGMENT_BITS * count
                out.extend(range(base, end))
                base = end
            else:
                out.extend(extract_set_bits(payload, base))
                base += SEGMENT_BITS
        return out

    def contains(self, x):
        if x < 0:
            return False
        base = 0
        for payload, count in self._runs(self.words):
            span = SEGMENT_BITS * count
            if x < base + span:
                if payload == 0:
                    return False
                if payload == SEGMENT_ONES:
                    return True
                return (payload >> (x - base)) & 1 == 1
            base += span
        return False

    def with_added(self, value):
        """New bitmap with one more member, rebuilt at run granularity."""
        if value < 0:
            raise ValueError("value must be non-negative")
        seg, offset = divmod(value, SEGMENT_BITS)
        builder = self._Builder()
        base = 0
        placed = False
        for payload, count in self._runs(self.words):
            end = base + count
            if not placed and base <= seg < end:
                before = seg - base
                after = end - seg - 1
                if before:
                    builder.feed(payload, before)
                builder.feed(payload | (1 << offset), 1)
                if after:
                    builder.feed(payload, after)
                placed = True
            else:
                builder.feed(payload, count)
            base = end
        if not placed:
            if seg > base:
                builder.feed(0, seg - base)
            builder.feed(1 << offset, 1)
        return type(self)(builder.finish())

    def _combine(self, other, is_and):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        builder = self._Builder()
        runs_a = self._runs(self.words)
        runs_b = self._runs(other.words)
        ia = ib = 0
        pa = pb = 0
        ca = cb = 0
        while True:
            if ca == 0 and ia < len(runs_a):
                pa, ca = runs_a[ia]
                ia += 1
            if cb == 0 and ib < len(runs_b):
                pb, cb = runs_b[ib]
                ib += 1
            if ca == 0 and cb == 0:
                break
            if ca == 0:
                builder.feed(0 if is_and else pb, cb)
                cb = 0
                continue
            if cb == 0:
                builder.feed(0 if is_and else pa, ca)
                ca = 0
                continue
            step = min(ca, cb)
            builder.feed((pa & pb) if is_and else (pa | pb), step)
            ca -= step
            cb -= step
        return type(self)(builder.finish())

    def __and__(self, other):
        return self._combine(other, True)

    def __or__(self, other):
        return self._combine(other, False)


class WahBitmap(_RleBitmap):
    """Word Aligned Hybrid bitmap, w = 32."""

    __slots__ = ()

    _Builder = _WahBuilder

    @staticmethod
    def _runs(words):
        runs = []
        for w in words:
            if w & _FILL_FLAG:
                runs.append((SEGMENT_ONES if w & (1 << 30) else 0, w & _WahBuilder.MAX_RUN))
            else:
                runs.append((w, 1))
        return runs

    @staticmethod
    def _validate(words):
        prev_fill = None  # (value, saturated) of an immediately preceding fill
        for i, w in enumerate(words):
            if not 0 <= w <= _WORD_MAX:
                raise FormatError(f"word {i}: not a 32-bit word")
            if w & _FILL_FLAG:
                value = (w >> 30) & 1
                r = w & _WahBuilder.MAX_RUN
                if r == 0:
                    raise FormatError(f"word {i}: fill with zero run length")
                if prev_fill is not None and prev_fill[0] == value and not prev_fill[1]:
                    raise FormatError(f"word {i}: mergeable adjacent fills")
                prev_fill = (value, r == _WahBuilder.MAX_RUN)
            else:
                if w == 0 or w == SEGMENT_ONES:
                    raise FormatError(f"word {i}: homogeneous payload stored as literal")
                prev_fill = None


class ConciseBitmap(_RleBitmap):
    """Concise bitmap: WAH with 5 position bits carving a flipped bit out of
    each fill word."""

    __slots__ = ()

    _Builder = _ConciseBuilder

    @staticmethod
    def _runs(words):
        runs = []
        for w in words:
            if w & _FILL_FLAG:
                fill = SEGMENT_ONES if w & (1 << 30) else 0
                p = (w >> 25) & 0x1F
                r = w & _ConciseBuilder.MAX_RUN
                if p:
                    runs.append((fill ^ (1 << (p - 1)), 1))
                    if r:
                        runs.append((fill, r))
                else:
                    runs.append((fill, r + 1))
            else:
                runs.append((w, 1))
        return runs

    @staticmethod
    def _validate(words):
        prev_fill = None  # (value, saturated) when the previous word ended in a fill run
        for i, w in enumerate(words):
            if not 0 <= w <= _WORD_MAX:
                raise FormatError(f"word {i}: not a 32-bit word")
            if w & _FILL_FLAG:
                value = (w >> 30) & 1
                p = (w >> 25) & 0x1F
                r = w & _ConciseBuilder.MAX_RUN
                if p == 0:
                    # a plain fill must not continue an unsaturated same-value fill
                    if prev_fill is not None and prev_fill[0] == value and not prev_fill[1]:
                        raise FormatError(f"word {i}: mergeable adjacent fills")
                    prev_fill = (value, r == _ConciseBuilder.MAX_RUN)
                else:
                    prev_fill = (value, r == _ConciseBuilder.MAX_RUN)
            else:
                weight = w.bit_count()
                if weight in (0, SEGMENT_BITS):
                    raise FormatError(f"word {i}: homogeneous payload stored as literal")
                if weight in (1, SEGMENT_BITS - 1):
                    raise FormatError(f"word {i}: one-flipped-bit payload stored as literal")
                prev_fill = None
