"""Compressed bitmap formats over 32-bit integers and a benchmark harness."""

from .bitset import PlainBitset
from .container import ArrayContainer, BitmapContainer
from .rle import ConciseBitmap, WahBitmap
from .roaring import FormatError, RoaringBitmap, union_many

__version__ = "0.1.0"

__all__ = [
    "ArrayContainer",
    "BitmapContainer",
    "ConciseBitmap",
    "FormatError",
    "PlainBitset",
    "RoaringBitmap",
    "WahBitmap",
    "union_many",
]
