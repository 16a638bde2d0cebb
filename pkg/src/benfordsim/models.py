"""Generative models that are not plain expressions.

Growth snapshots, random rock breaking, consolidation/fragmentation cycles,
the small arithmetic tables, and expression presets for the physics and
purchase-total examples.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np

from . import sampling as smp
from .digits import percents, tally
from .process import Const, Dist, Expr, Let, Var, as_expr
from .sampling import stream_keys, stream_uniforms

__all__ = [
    "InvalidConfig",
    "NonPositiveValue",
    "GrowthConfig",
    "FragmentState",
    "growth_snapshot",
    "additive_growth_snapshot",
    "rock_breaking",
    "cfc_simulate",
    "cfc_pool",
    "cfc_paper_trajectory",
    "multiplication_table_analysis",
    "addition_table_analysis",
    "physics_preset",
    "rlc_preset",
    "power_transform",
]

Quantity = Union[smp.DistributionSpec, float, int]


class InvalidConfig(ValueError):
    pass


class NonPositiveValue(ValueError):
    pass


def _draw(q: Quantity, keys: np.ndarray, slot: int) -> np.ndarray:
    if isinstance(q, smp._SPEC_TYPES):
        return smp.ppf(q, stream_uniforms(keys, slot))
    return np.full(keys.shape[0], float(q))


def _is_integer_valued(q: Quantity) -> bool:
    if isinstance(q, (smp.UniformDisc, smp.Dice)):
        return True
    if isinstance(q, smp.Empirical):
        return all(float(v).is_integer() for v in q.values)
    return not isinstance(q, smp._SPEC_TYPES) and float(q).is_integer()


def _lower_bound(q: Quantity) -> float:
    if isinstance(q, smp._SPEC_TYPES):
        sup = smp.theoretical_support(q)
        return -np.inf if sup is smp.Bound.UNBOUNDED else sup[0]
    return float(q)


# ---------------------------------------------------------------------------
# growth


@dataclass(frozen=True)
class GrowthConfig:
    """Snapshot of ``cities`` growth series ``base * factor^periods``.

    ``factor_mode`` is ``"constant"`` (one factor per city) or
    ``"per-period"`` (a fresh factor every period).
    """

    base: Quantity = 1.0
    factor: Quantity = 1.11
    periods: Quantity = smp.UniformDisc(1, 300)
    cities: int = 242
    factor_mode: str = "constant"

    def validate(self) -> None:
        if self.cities < 1:
            raise InvalidConfig("cities must be >= 1")
        if self.factor_mode not in ("constant", "per-period"):
            raise InvalidConfig(f"unknown factor_mode {self.factor_mode!r}")
        if not _is_integer_valued(self.periods):
            raise InvalidConfig("periods must be integer-valued")
        if _lower_bound(self.periods) < 0:
            raise InvalidConfig("periods must be >= 0")
        if not _lower_bound(self.factor) > 0:
            raise InvalidConfig("growth factors must be positive")


def growth_snapshot(cfg: GrowthConfig, seed: int = 1) -> np.ndarray:
    """Final value of every city's growth series.

    City ``c`` draws from stream ``(seed, c)``: slot 0 is the base, slot 1
    the number of periods, slots 2.. the factor(s).
    """
    cfg.validate()
    keys = stream_keys(seed, np.arange(cfg.cities))
    base = _draw(cfg.base, keys, 0)
    periods = _draw(cfg.periods, keys, 1).astype(np.int64)
    if cfg.factor_mode == "constant":
        factor = _draw(cfg.factor, keys, 2)
        with np.errstate(over="ignore"):
            return base * np.power(factor, periods)
    value = base.copy()
    with np.errstate(over="ignore"):
        for k in range(int(periods.max(initial=0))):
            step = _draw(cfg.factor, keys, 2 + k)
            value = np.where(k < periods, value * step, value)
    return value


def additive_growth_snapshot(cities: int, base: Quantity, periods: Quantity,
                             delta: float, seed: int = 1) -> np.ndarray:
    """Snapshot of ``base + delta * periods``: growth by fixed additions."""
    if cities < 1:
        raise InvalidConfig("cities must be >= 1")
    if not _is_integer_valued(periods) or _lower_bound(periods) < 0:
        raise InvalidConfig("periods must be non-negative integers")
    keys = stream_keys(seed, np.arange(cities))
    return _draw(base, keys, 0) + float(delta) * _draw(periods, keys, 1)


# ---------------------------------------------------------------------------
# fragmentation


@dataclass(frozen=True, eq=False)
class FragmentState:
    pieces: np.ndarray

    @property
    def total(self) -> float:
        return float(np.sum(self.pieces))

    def __len__(self):
        return self.pieces.size


def rock_breaking(stages: int, initial_mass: float = 1.0, seed: int = 1,
                  index: int = 0) -> FragmentState:
    """Split every piece in two at a uniform random proportion, ``stages`` times.

    Piece order follows the expansion u*p, (1-u)*p for each parent in turn.
    """
    if stages < 0:
        raise InvalidConfig("stages must be >= 0")
    if not initial_mass > 0:
        raise InvalidConfig("initial_mass must be positive")
    rng = smp.make_stream(seed, index)
    pieces = np.array([float(initial_mass)])
    for _ in range(stages):
        u = rng.uniforms(pieces.size)
        left = u * pieces
        pieces = np.column_stack([left, pieces - left]).ravel()
    return FragmentState(pieces)


def cfc_pool(items: int, cycles: int, trajectories: int, seed: int = 1) -> np.ndarray:
    """Final item values of independent CFC trajectories, shape (trajectories, items).

    Trajectory ``t`` uses stream ``(seed, t)``. Each cycle splits one
    uniformly chosen item at a U(0,1) proportion, then merges two distinct
    uniformly chosen items, so the item count stays at ``items``.
    """
    if trajectories < 1:
        raise InvalidConfig("trajectories must be >= 1")
    return _cfc(stream_keys(seed, np.arange(trajectories)), items, cycles)


def _cfc(keys: np.ndarray, items: int, cycles: int) -> np.ndarray:
    if items < 2:
        raise InvalidConfig("items must be >= 2")
    if cycles < 0:
        raise InvalidConfig("cycles must be >= 0")
    rows = np.arange(keys.shape[0])
    v = np.ones((keys.shape[0], items + 1))
    m = items
    for c in range(cycles):
        u_pick, u_split, u_a, u_b = (stream_uniforms(keys, 4 * c + k) for k in range(4))
        pick = np.minimum((u_pick * m).astype(np.int64), m - 1)
        moved = v[rows, pick] * u_split
        v[rows, m] = v[rows, pick] - moved
        v[rows, pick] = moved
        a = np.minimum((u_a * (m + 1)).astype(np.int64), m)
        b = np.minimum((u_b * m).astype(np.int64), m - 1)
        b = b + (b >= a)
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        v[rows, lo] += v[rows, hi]
        v[rows, hi] = v[rows, m]
    return v[:, :m].copy()


def cfc_simulate(items: int, cycles: int, seed: int = 1, index: int = 0) -> np.ndarray:
    """One consolidation/fragmentation trajectory starting from ``items`` ones.

    Equal to row ``index`` of :func:`cfc_pool` with the same seed.
    """
    return _cfc(stream_keys(seed, [index]), items, cycles)[0]


def cfc_paper_trajectory(u: Sequence) -> Tuple:
    """The five item values of a fixed seven-step CFC trajectory, given its uniforms u1..u7.

    Each ``u_i`` may be a scalar or an array; arrays broadcast elementwise.
    """
    if len(u) != 7:
        raise ValueError("need seven uniforms")
    u1, u2, u3, u4, u5, u6, _ = (np.asarray(x, dtype=np.float64) for x in u)
    items = (
        (u1 * u2 + 2) * u6,
        (u1 * u2 + 2) * (1 - u6),
        u1 * u3 * u5 * (1 - u2) + (2 - u1) * (1 - u4),
        u1 * u3 * (1 - u2) * (1 - u5) + 1 + (2 - u1) * u4,
        u1 * (1 - u2) * (1 - u3),
    )
    if all(v.ndim == 0 for v in items):
        return tuple(float(v) for v in items)
    return items


# ---------------------------------------------------------------------------
# tables


def multiplication_table_analysis() -> Tuple[List[int], np.ndarray]:
    """Decade counts [1,10], [11,20], ..., [91,100] and digit percents of the 10x10 table."""
    cells = np.outer(np.arange(1, 11), np.arange(1, 11)).ravel()
    decades = np.bincount((cells - 1) // 10, minlength=10)
    return decades.tolist(), percents(tally(cells))


def addition_table_analysis() -> List[int]:
    """Counts of i+j in {2,3,4}, {5,6,7}, ..., {17,18,19}; the single 20 is left out."""
    cells = np.add.outer(np.arange(1, 11), np.arange(1, 11)).ravel()
    cells = cells[cells != 20]
    return np.bincount((cells - 2) // 3, minlength=6).tolist()


# ---------------------------------------------------------------------------
# presets


def _leaf(q) -> Expr:
    return as_expr(q) if not isinstance(q, Expr) else q


def physics_preset(case: int, *, mass: Quantity = smp.UniformCont(0, 10),
                   force: Quantity = smp.UniformCont(0, 10),
                   time: Quantity = smp.UniformCont(0, 10),
                   velocity: Quantity = smp.UniformCont(0, 50)) -> Expr:
    """Case 1: final speed ``F*T/M``. Case 2: stopping distance ``V^2 / (2*(F/M))``."""
    if case == 1:
        return _leaf(force) * _leaf(time) / _leaf(mass)
    if case == 2:
        v = Var("v")
        return Let("v", _leaf(velocity), v * v / (Const(2) * (_leaf(force) / _leaf(mass))))
    raise InvalidConfig(f"case must be 1 or 2, got {case!r}")


def rlc_preset(price: Quantity, dice_faces: int = 6, terms: int = 1) -> Expr:
    """Sum of ``terms`` independent price*dice products."""
    if terms < 1:
        raise InvalidConfig("terms must be >= 1")
    try:
        dice = smp.Dice(dice_faces)
    except smp.InvalidSpec as exc:
        raise InvalidConfig(str(exc)) from None
    expr = _leaf(price) * Dist(dice)
    for _ in range(terms - 1):
        expr = expr + _leaf(price) * Dist(dice)
    return expr


def power_transform(values, n: int) -> np.ndarray:
    x = np.asarray(values, dtype=np.float64)
    if n < 1 or int(n) != n:
        raise ValueError("n must be an integer >= 1")
    if np.any(~(x > 0)):
        raise NonPositiveValue("power_transform needs positive values")
    with np.errstate(over="ignore"):
        return np.power(x, int(n))
