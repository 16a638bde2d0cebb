"""Seedable primitive samplers.

Every draw consumes exactly one 64-bit word from a counter-based stream and
is mapped through the family's inverse CDF, so a stream's k-th draw depends
only on ``(seed, index, k)``. That is what lets the simulation engine
evaluate thousands of per-run streams as numpy arrays.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy.special import ndtri

__all__ = [
    "Bound",
    "InvalidSpec",
    "UniformCont",
    "UniformDisc",
    "Normal",
    "Exponential",
    "Lognormal",
    "Triangular",
    "Reciprocal",
    "Empirical",
    "Dice",
    "DistributionSpec",
    "RngStream",
    "make_stream",
    "stream_keys",
    "stream_uniforms",
    "sample",
    "sample_many",
    "ppf",
    "theoretical_support",
]

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_SEED_SALT = 0x243F6A8885A308D3
_INDEX_SALT = 0x13198A2E03707344
_TWO_M53 = 2.0 ** -53


class Bound(enum.Enum):
    """Markers for quantities with no finite value."""

    UNBOUNDED = "unbounded"
    UNAVAILABLE = "unavailable"

    def __str__(self) -> str:
        return self.value


class InvalidSpec(ValueError):
    pass


# ---------------------------------------------------------------------------
# distribution families


@dataclass(frozen=True)
class UniformCont:
    a: float
    b: float

    def __post_init__(self):
        _finite(self, self.a, self.b)
        if not self.a <= self.b:
            raise InvalidSpec(f"UniformCont needs a <= b, got ({self.a}, {self.b})")

    def __str__(self):
        return f"U({_num(self.a)},{_num(self.b)})"


@dataclass(frozen=True)
class UniformDisc:
    """Equiprobable integers on ``lo..hi`` inclusive."""

    lo: int
    hi: int

    def __post_init__(self):
        if int(self.lo) != self.lo or int(self.hi) != self.hi:
            raise InvalidSpec("UniformDisc bounds must be integers")
        if not self.lo <= self.hi:
            raise InvalidSpec(f"UniformDisc needs lo <= hi, got ({self.lo}, {self.hi})")

    def __str__(self):
        return f"UD({int(self.lo)},{int(self.hi)})"


@dataclass(frozen=True)
class Normal:
    mean: float
    sd: float

    def __post_init__(self):
        _finite(self, self.mean, self.sd)
        if not self.sd > 0:
            raise InvalidSpec(f"Normal needs sd > 0, got {self.sd}")

    def __str__(self):
        return f"N({_num(self.mean)},{_num(self.sd)})"


@dataclass(frozen=True)
class Exponential:
    """Exponential parameterized by its mean."""

    scale: float

    def __post_init__(self):
        _finite(self, self.scale)
        if not self.scale > 0:
            raise InvalidSpec(f"Exponential needs scale > 0, got {self.scale}")

    def __str__(self):
        return f"E({_num(self.scale)})"


@dataclass(frozen=True)
class Lognormal:
    """``exp(Normal(location, shape))``."""

    shape: float
    location: float

    def __post_init__(self):
        _finite(self, self.shape, self.location)
        if not self.shape >= 0:
            raise InvalidSpec(f"Lognormal needs shape >= 0, got {self.shape}")

    def __str__(self):
        return f"LN({_num(self.shape)},{_num(self.location)})"


@dataclass(frozen=True)
class Triangular:
    a: float
    c: float
    b: float

    def __post_init__(self):
        _finite(self, self.a, self.c, self.b)
        if not self.a <= self.c <= self.b:
            raise InvalidSpec(f"Triangular needs a <= c <= b, got ({self.a}, {self.c}, {self.b})")

    def __str__(self):
        return f"TRI({_num(self.a)},{_num(self.c)},{_num(self.b)})"


@dataclass(frozen=True)
class Reciprocal:
    """Density proportional to 1/x on (a, b), the k/x distribution."""

    a: float
    b: float

    def __post_init__(self):
        _finite(self, self.a, self.b)
        if not 0 < self.a < self.b:
            raise InvalidSpec(f"Reciprocal needs 0 < a < b, got ({self.a}, {self.b})")

    def __str__(self):
        return f"KX({_num(self.a)},{_num(self.b)})"


@dataclass(frozen=True, eq=False)
class Empirical:
    """Uniform pick with replacement from a fixed list of values."""

    values: tuple

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float).ravel()
        if vals.size == 0:
            raise InvalidSpec("Empirical needs at least one value")
        if not np.all(np.isfinite(vals)):
            raise InvalidSpec("Empirical values must be finite")
        object.__setattr__(self, "values", tuple(vals.tolist()))
        object.__setattr__(self, "_array", vals)

    def __eq__(self, other):
        return isinstance(other, Empirical) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __str__(self):
        return f"EMP[{len(self.values)} values]"


@dataclass(frozen=True)
class Dice:
    faces: int = 6

    def __post_init__(self):
        if int(self.faces) != self.faces or self.faces < 1:
            raise InvalidSpec(f"Dice needs an integer faces >= 1, got {self.faces}")

    def __str__(self):
        return f"DICE({int(self.faces)})"


DistributionSpec = Union[
    UniformCont, UniformDisc, Normal, Exponential, Lognormal,
    Triangular, Reciprocal, Empirical, Dice,
]
_SPEC_TYPES = (UniformCont, UniformDisc, Normal, Exponential, Lognormal,
               Triangular, Reciprocal, Empirical, Dice)


def _finite(spec, *params):
    if not all(math.isfinite(p) for p in params):
        raise InvalidSpec(f"{type(spec).__name__} parameters must be finite")


def _num(x) -> str:
    x = float(x)
    return str(int(x)) if x.is_integer() and abs(x) < 1e15 else repr(x)


# ---------------------------------------------------------------------------
# counter-based streams (SplitMix64 keyed by seed and stream index)


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def stream_keys(seed: int, indices) -> np.ndarray:
    """Return the SplitMix64 state keys for streams ``(seed, i)``."""
    idx = np.asarray(indices, dtype=np.int64).astype(np.uint64)
    seed_word = _mix64(np.array([(int(seed) + _SEED_SALT) & _MASK], dtype=np.uint64))
    idx_word = _mix64(idx + np.uint64(_INDEX_SALT))
    return _mix64(seed_word ^ idx_word)


def _slot_bits(keys: np.ndarray, slot: int) -> np.ndarray:
    step = np.uint64((_GOLDEN * (slot + 1)) & _MASK)
    return _mix64(keys + step)


def stream_uniforms(keys: np.ndarray, slot: int) -> np.ndarray:
    """The ``slot``-th draw in [0, 1) of every stream in ``keys``."""
    return (_slot_bits(keys, slot) >> np.uint64(11)).astype(np.float64) * _TWO_M53


class RngStream:
    """Deterministic pseudorandom sequence identified by ``(seed, index)``.

    The sequence does not depend on platform or on any other stream. A
    stream is meant to have one owner at a time.
    """

    __slots__ = ("seed", "index", "key", "position")

    def __init__(self, seed: int, index: int = 0):
        self.seed = int(seed)
        self.index = int(index)
        self.key = stream_keys(self.seed, [self.index])
        self.position = 0

    def __repr__(self):
        return f"RngStream(seed={self.seed}, index={self.index}, position={self.position})"

    def uniforms(self, n: int) -> np.ndarray:
        """Next ``n`` draws in [0, 1)."""
        counters = np.arange(self.position + 1, self.position + n + 1, dtype=np.uint64)
        self.position += n
        bits = _mix64(self.key[0] + counters * np.uint64(_GOLDEN))
        return (bits >> np.uint64(11)).astype(np.float64) * _TWO_M53

    def uniform(self) -> float:
        return float(self.uniforms(1)[0])


def make_stream(seed: int, index: int = 0) -> RngStream:
    return RngStream(seed, index)


# ---------------------------------------------------------------------------
# inverse CDFs


def ppf(spec: DistributionSpec, u) -> np.ndarray:
    """Map uniforms in [0, 1) to draws of ``spec`` by inversion."""
    u = np.asarray(u, dtype=np.float64)
    if isinstance(spec, UniformCont):
        return spec.a + (spec.b - spec.a) * u
    if isinstance(spec, Dice):
        return 1.0 + np.floor(u * spec.faces)
    if isinstance(spec, UniformDisc):
        width = spec.hi - spec.lo + 1
        return np.minimum(spec.lo + np.floor(u * width), float(spec.hi))
    if isinstance(spec, Normal):
        return spec.mean + spec.sd * ndtri(_open(u))
    if isinstance(spec, Exponential):
        return -spec.scale * np.log1p(-u)
    if isinstance(spec, Lognormal):
        if spec.shape == 0:
            return np.full(u.shape, math.exp(spec.location))
        return np.exp(spec.location + spec.shape * ndtri(_open(u)))
    if isinstance(spec, Triangular):
        a, c, b = spec.a, spec.c, spec.b
        if a == b:
            return np.full(u.shape, float(a))
        split = (c - a) / (b - a)
        left = a + np.sqrt(u * (b - a) * (c - a))
        right = b - np.sqrt((1.0 - u) * (b - a) * (b - c))
        return np.where(u < split, left, right)
    if isinstance(spec, Reciprocal):
        return spec.a * (spec.b / spec.a) ** u
    if isinstance(spec, Empirical):
        vals = spec._array
        pick = np.minimum((u * vals.size).astype(np.int64), vals.size - 1)
        return vals[pick]
    raise InvalidSpec(f"not a distribution spec: {spec!r}")


def _open(u: np.ndarray) -> np.ndarray:
    # shift the 53-bit lattice to cell midpoints, keeping 0 out of ndtri
    return u + 2.0 ** -54


def sample(spec: DistributionSpec, rng: RngStream) -> float:
    """Draw one realization of ``spec`` from ``rng``."""
    _check_spec(spec)
    return float(ppf(spec, rng.uniforms(1))[0])


def sample_many(spec: DistributionSpec, rng: RngStream, n: int) -> np.ndarray:
    _check_spec(spec)
    return ppf(spec, rng.uniforms(n))


def _check_spec(spec):
    if not isinstance(spec, _SPEC_TYPES):
        raise InvalidSpec(f"not a distribution spec: {spec!r}")


def theoretical_support(spec: DistributionSpec):
    """Exact ``(min, max)`` of the support, or ``Bound.UNBOUNDED``."""
    _check_spec(spec)
    if isinstance(spec, (UniformCont, Reciprocal)):
        return (float(spec.a), float(spec.b))
    if isinstance(spec, Triangular):
        return (float(spec.a), float(spec.b))
    if isinstance(spec, UniformDisc):
        return (float(spec.lo), float(spec.hi))
    if isinstance(spec, Dice):
        return (1.0, float(spec.faces))
    if isinstance(spec, Empirical):
        return (float(spec._array.min()), float(spec._array.max()))
    if isinstance(spec, Lognormal) and spec.shape == 0:
        v = math.exp(spec.location)
        return (v, v)
    return Bound.UNBOUNDED


def support_pom(spec: DistributionSpec):
    """max/min of a positive bounded support."""
    sup = theoretical_support(spec)
    if sup is Bound.UNBOUNDED:
        return Bound.UNBOUNDED
    lo, hi = sup
    if lo <= 0:
        return Bound.UNBOUNDED if lo == 0 and hi > 0 else Bound.UNAVAILABLE
    return hi / lo
