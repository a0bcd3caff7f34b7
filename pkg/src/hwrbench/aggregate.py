"""Column aggregation: mean/median rows, breakthrough counts, leaders.

A MetricColumn holds one algorithm's values for one metric kind across
the 57 games; games absent from the mapping are N/A in the source data
and are excluded from every statistic, with coverage reported alongside.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field

from hwrbench.errors import ValidationError
from hwrbench.games import CANONICAL_GAMES
from hwrbench.metrics import (
    EfficiencyValue,
    MetricKind,
    MetricValue,
    hwrb_indicator,
    learning_efficiency,
)

_CANONICAL_SET = frozenset(CANONICAL_GAMES)


@dataclass(frozen=True)
class MetricColumn:
    """One algorithm's per-game values for a single metric kind."""

    algorithm: str
    kind: MetricKind
    entries: dict[str, MetricValue] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for game, value in self.entries.items():
            if game not in _CANONICAL_SET:
                raise ValidationError(f"{self.algorithm}: unknown game {game!r}")
            if value.kind is not self.kind:
                raise ValidationError(
                    f"{self.algorithm}/{game}: {value.kind.value} entry in a "
                    f"{self.kind.value} column")
        modes = {v.cap_mode for v in self.entries.values()}
        if len(modes) > 1:
            raise ValidationError(f"{self.algorithm}: mixed cap modes {modes}")

    @property
    def values(self) -> list[float]:
        return [self.entries[g].value for g in CANONICAL_GAMES if g in self.entries]

    @property
    def coverage(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class AggregateRow:
    """The summary row printed under a score table column."""

    mean: float
    median: float
    coverage: int
    efficiency_mean: EfficiencyValue
    efficiency_median: EfficiencyValue
    hwrb_count: int | None = None  # hwrns columns only


def mean_metric(column: MetricColumn) -> tuple[float, int]:
    """Arithmetic mean over present entries, with the coverage count."""
    values = column.values
    if not values:
        raise ValidationError(f"{column.algorithm}: empty column")
    return statistics.fmean(values), len(values)


def median_metric(column: MetricColumn) -> float:
    """Middle order statistic; even counts take the midpoint of the two middles."""
    values = column.values
    if not values:
        raise ValidationError(f"{column.algorithm}: empty column")
    return statistics.median(values)


def hwrb_count(column: MetricColumn) -> int:
    """Number of present games at or beyond the world record."""
    if column.kind is not MetricKind.HWRNS:
        raise ValidationError(
            f"breakthrough count requires an hwrns column, got {column.kind.value}")
    return sum(1 for g, v in column.entries.items() if hwrb_indicator(v))


def per_game_leader(columns: list[MetricColumn], game: str) -> list[str]:
    """All algorithms attaining the game's maximum value, sorted by name."""
    kinds = {c.kind for c in columns}
    if len(kinds) > 1:
        raise ValidationError(f"leader comparison across metric kinds: {kinds}")
    present = [(c.algorithm, c.entries[game].value) for c in columns if game in c.entries]
    if not present:
        raise ValidationError(f"{game}: absent from every column")
    best = max(v for _, v in present)
    return sorted(a for a, v in present if v == best)


def aggregate(column: MetricColumn, frames: int) -> AggregateRow:
    """Mean, median, coverage, efficiencies, and (for hwrns) the HWRB count."""
    mean, coverage = mean_metric(column)
    median = median_metric(column)
    return AggregateRow(
        mean=mean,
        median=median,
        coverage=coverage,
        efficiency_mean=learning_efficiency(mean, frames),
        efficiency_median=learning_efficiency(median, frames),
        hwrb_count=hwrb_count(column) if column.kind is MetricKind.HWRNS else None,
    )
