"""Parsing and validation of speedup CSV tables."""
from __future__ import annotations

import csv
from dataclasses import dataclass


class SchemaError(ValueError):
    """The CSV does not match the speedup table schema."""


REQUIRED_COLUMNS = ("tau", "mean_iters", "baseline_ell_over_tau")
OPTIONAL_THEORETICAL = "theoretical_inv_gap"


@dataclass(frozen=True)
class SpeedupSeries:
    """One speedup table: block sizes, measured means, and the ell/tau line.

    theoretical entries are None where the table left the column empty.
    """

    taus: tuple[int, ...]
    mean_iters: tuple[float, ...]
    baseline: tuple[float, ...]
    theoretical: tuple[float | None, ...]

    @property
    def has_theoretical(self) -> bool:
        return any(v is not None for v in self.theoretical)


def read_speedup_csv(path: str) -> SpeedupSeries:
    """Load and validate a speedup table.

    Raises SchemaError naming the first missing column, and ValueError when
    the block sizes are not strictly increasing starting at 1.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in REQUIRED_COLUMNS:
            if column not in header:
                raise SchemaError(f"missing column {column!r} in {path}")
        rows = list(reader)
    if not rows:
        raise ValueError(f"no data rows in {path}")
    try:
        taus = tuple(int(row["tau"]) for row in rows)
        means = tuple(float(row["mean_iters"]) for row in rows)
        baseline = tuple(float(row["baseline_ell_over_tau"]) for row in rows)
        theoretical = tuple(
            float(row[OPTIONAL_THEORETICAL])
            if row.get(OPTIONAL_THEORETICAL) not in (None, "")
            else None
            for row in rows
        )
    except ValueError as exc:
        raise ValueError(f"non-numeric cell in {path}: {exc}")
    if taus[0] != 1:
        raise ValueError(f"first row must be tau=1 (it defines ell), got tau={taus[0]}")
    if any(b <= a for a, b in zip(taus, taus[1:])):
        raise ValueError(f"tau column must be strictly increasing, got {list(taus)}")
    return SpeedupSeries(taus=taus, mean_iters=means, baseline=baseline,
                         theoretical=theoretical)
