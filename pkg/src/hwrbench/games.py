"""Canonical game list and the three-column baseline registry.

The registry owns the fixed 57-game identifier list and, per game, the
random, human-average, and human-world-record raw scores that every
normalization divides by. It is immutable once loaded and safe to share
across threads.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib.resources import files
from pathlib import Path
from typing import Iterator

from hwrbench.errors import UnknownGameError, ValidationError
from hwrbench.numfmt import format_number

CANONICAL_GAMES: tuple[str, ...] = (
    "alien", "amidar", "assault", "asterix", "asteroids", "atlantis",
    "bank heist", "battle zone", "beam rider", "berzerk", "bowling",
    "boxing", "breakout", "centipede", "chopper command", "crazy climber",
    "defender", "demon attack", "double dunk", "enduro", "fishing derby",
    "freeway", "frostbite", "gopher", "gravitar", "hero", "ice hockey",
    "jamesbond", "kangaroo", "krull", "kung fu master", "montezuma revenge",
    "ms pacman", "name this game", "phoenix", "pitfall", "pong",
    "private eye", "qbert", "riverraid", "road runner", "robotank",
    "seaquest", "skiing", "solaris", "space invaders", "star gunner",
    "surround", "tennis", "time pilot", "tutankham", "up n down", "venture",
    "video pinball", "wizard of wor", "yars revenge", "zaxxon",
)

_CANONICAL_SET = frozenset(CANONICAL_GAMES)

BASELINE_COLUMNS = ("game", "random", "human_average", "human_world_record", "source_tag")


def data_path(*parts: str) -> Path:
    """Path to a bundled data file."""
    return Path(str(files("hwrbench").joinpath("data", *parts)))


def canonical_game(name: str) -> str:
    """Normalize a game identifier to canonical lowercase form.

    Lookup is forgiving about case, surrounding whitespace, and the
    usual separator spellings ("MsPacman" is not recognized, but
    "ms_pacman" and "MS PACMAN " are).
    """
    cleaned = name.strip().lower().replace("_", " ").replace("-", " ")
    cleaned = cleaned.replace("'", "").replace("’", "").replace(".", "")
    cleaned = " ".join(cleaned.split())
    if cleaned not in _CANONICAL_SET:
        raise UnknownGameError(f"unknown game: {name!r}")
    return cleaned


@dataclass(frozen=True)
class BaselineRecord:
    """Per-game baseline triple; the denominators of every normalization."""

    game: str
    random: float
    human_average: float
    human_world_record: float
    source_tag: str = ""

    def validate(self) -> list[str]:
        """Check invariants; returns soft warnings, raises on hard violations."""
        if self.human_average <= self.random:
            raise ValidationError(
                f"{self.game}: human_average {self.human_average} must exceed "
                f"random {self.random}")
        if self.human_world_record <= self.random:
            raise ValidationError(
                f"{self.game}: human_world_record {self.human_world_record} must "
                f"exceed random {self.random}")
        warnings = []
        if self.human_world_record < self.human_average:
            warnings.append(
                f"{self.game}: human_world_record {self.human_world_record} below "
                f"human_average {self.human_average}")
        return warnings


@dataclass(frozen=True)
class ScoreScale:
    """Declared raw-score range of one game, for min-max scaling."""

    game: str
    r_min: float
    r_max: float

    def __post_init__(self) -> None:
        if not self.r_max > self.r_min:
            raise ValidationError(
                f"{self.game}: degenerate score scale [{self.r_min}, {self.r_max}]")


class BaselineRegistry:
    """Immutable mapping from canonical game id to its BaselineRecord."""

    def __init__(self, records: list[BaselineRecord], source: str = "<memory>") -> None:
        seen: dict[str, BaselineRecord] = {}
        warnings: list[str] = []
        for rec in records:
            if rec.game in seen:
                raise ValidationError(f"duplicate baseline row for {rec.game!r}")
            warnings.extend(rec.validate())
            seen[rec.game] = rec
        missing = [g for g in CANONICAL_GAMES if g not in seen]
        if missing:
            raise ValidationError(f"missing baseline rows: {', '.join(missing)}")
        self._records = {g: seen[g] for g in CANONICAL_GAMES}
        self.warnings = tuple(warnings)
        self.source = source

    @classmethod
    def load(cls, path: str | Path | None = None) -> "BaselineRegistry":
        """Load from a baselines CSV; the bundled file when no path is given."""
        src = Path(path) if path is not None else data_path("baselines.csv")
        records = []
        with open(src, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or tuple(reader.fieldnames) != BASELINE_COLUMNS:
                raise ValidationError(
                    f"{src}: expected header {','.join(BASELINE_COLUMNS)}")
            for row in reader:
                game = canonical_game(row["game"])
                try:
                    records.append(BaselineRecord(
                        game=game,
                        random=float(row["random"]),
                        human_average=float(row["human_average"]),
                        human_world_record=float(row["human_world_record"]),
                        source_tag=row["source_tag"],
                    ))
                except ValueError as exc:
                    raise ValidationError(f"{src}: non-numeric cell for {game}: {exc}")
        return cls(records, source=str(src))

    def lookup(self, game: str) -> BaselineRecord:
        return self._records[canonical_game(game)]

    def __iter__(self) -> Iterator[BaselineRecord]:
        return iter(self._records.values())

    def __len__(self) -> int:
        return len(self._records)

    def dump(self) -> str:
        """Serialize to CSV text; load(dump()) round-trips bit-for-bit."""
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(BASELINE_COLUMNS)
        for rec in self:
            writer.writerow([
                rec.game,
                format_number(rec.random),
                format_number(rec.human_average),
                format_number(rec.human_world_record),
                rec.source_tag,
            ])
        return out.getvalue()
