"""First significant digit extraction and tallies."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

__all__ = [
    "EmptyTally",
    "DigitTally",
    "first_digit",
    "first_digits",
    "first_digit_text",
    "tally",
    "percents",
]

# relative distance from a digit boundary below which the float fast path
# is not trusted and the shortest round-trip decimal string decides
_BOUNDARY_TOL = 1e-13


class EmptyTally(ValueError):
    pass


def _exact_digit(x: float) -> int:
    # repr gives the shortest decimal string that round-trips to x, so 0.3
    # reads as 3 and 1e-12 as 1 rather than the 2 and 9 of their binary values
    for ch in repr(abs(float(x))):
        if ch in "123456789":
            return int(ch)
    raise ValueError(f"no significant digit in {x!r}")


def first_digit(x) -> Optional[int]:
    """Leading nonzero decimal digit of ``|x|``.

    Returns ``None`` for zero, NaN and infinities.

    >>> first_digit(0.0002867), first_digit(-62.97), first_digit(1e-12)
    (2, 6, 1)
    """
    x = float(x)
    if x == 0.0 or not math.isfinite(x):
        return None
    m = abs(x)
    e = math.floor(math.log10(m))
    if -300 < e < 300:
        q = m / 10.0 ** e
        d = math.floor(q)
        if 1 <= d <= 9 and abs(q - round(q)) > _BOUNDARY_TOL * q:
            return d
    return _exact_digit(m)


def first_digits(values) -> np.ndarray:
    """Vectorized :func:`first_digit`; 0 marks values with no digit."""
    x = np.abs(np.asarray(values, dtype=np.float64)).ravel()
    out = np.zeros(x.shape, dtype=np.int8)
    ok = np.isfinite(x) & (x != 0)
    m = x[ok]
    if m.size == 0:
        return out.reshape(np.shape(values))
    e = np.floor(np.log10(m))
    safe = (e > -300) & (e < 300)
    q = m / np.power(10.0, np.where(safe, e, 0.0))
    d = np.floor(q)
    near = np.abs(q - np.round(q)) <= _BOUNDARY_TOL * q
    bad = ~safe | near | (d < 1) | (d > 9)
    d[bad] = [_exact_digit(v) for v in m[bad]]
    out[ok] = d.astype(np.int8)
    return out.reshape(np.shape(values))


def first_digit_text(token: str) -> Optional[int]:
    """First nonzero digit of a decimal literal, read from its text."""
    t = token.strip().lstrip("+-")
    mantissa = t.split("e")[0].split("E")[0]
    for ch in mantissa:
        if ch in "123456789":
            return int(ch)
    return None


@dataclass(frozen=True)
class DigitTally:
    """Counts of first digits 1..9 plus the number of digitless values."""

    counts: tuple = (0,) * 9
    skipped: int = 0

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if len(counts) != 9 or min(counts) < 0:
            raise ValueError("counts must be 9 non-negative integers")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "skipped", int(self.skipped))

    @property
    def total(self) -> int:
        return sum(self.counts)

    def __add__(self, other: "DigitTally") -> "DigitTally":
        return DigitTally(
            tuple(a + b for a, b in zip(self.counts, other.counts)),
            self.skipped + other.skipped,
        )

    def to_dict(self) -> dict:
        return {"counts": list(self.counts), "total": self.total, "skipped": self.skipped}

    @classmethod
    def from_dict(cls, data: dict) -> "DigitTally":
        return cls(tuple(data["counts"]), data.get("skipped", 0))


def tally(values: Iterable[float]) -> DigitTally:
    d = first_digits(np.fromiter(values, dtype=np.float64) if not hasattr(values, "__len__")
                     else np.asarray(values, dtype=np.float64))
    counts = np.bincount(d.ravel(), minlength=10)
    return DigitTally(tuple(counts[1:10].tolist()), int(counts[0]))


def percents(t: DigitTally) -> np.ndarray:
    """Digit proportions in percent, ordered 1..9."""
    if t.total == 0:
        raise EmptyTally("tally has no digits")
    return 100.0 * np.asarray(t.counts, dtype=np.float64) / t.total
