"""Enterprise AI trust scorecard: capture ratings, score, compare tools.

Raters judge a tool on six fixed items using a three-level scale.
Scoring maps good to +1, okay to 0, and needs improvement to -1. The
first five items aggregate numerically (per-item means and the mean
over raters of per-rater sums, range -5..5); overall satisfaction is
captured alongside but reported separately rather than summed.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from threading import Lock

from .errors import DuplicateEntry, IncompleteRatings, NoEntries
from .providers import utc_now_iso

SCORED_ITEMS = (
    "efficiency",
    "usage_understanding",
    "control",
    "confidence",
    "trust",
)
SATISFACTION_ITEM = "satisfaction"
ALL_ITEMS = SCORED_ITEMS + (SATISFACTION_ITEM,)

ITEM_STATEMENTS = {
    "efficiency": "[The AI feature] will help me do my job more efficiently and effectively.",
    "usage_understanding": "I understand how and when to use [the AI feature].",
    "control": "I have control using [the AI feature].",
    "confidence": "I am confident in the results made by [the AI feature].",
    "trust": "I trust the results made by [the AI feature].",
    "satisfaction": "Overall, how satisfied are you with using [the AI feature]?",
}

RATING_POINTS = {"good": 1, "okay": 0, "needs_improvement": -1}


@dataclass(frozen=True)
class ScorecardEntry:
    rater_id: str
    tool_id: str
    ratings: dict[str, str]  # item_id -> good | okay | needs_improvement
    recorded_at: str = field(default_factory=utc_now_iso)

    def to_dict(self) -> dict:
        return {
            "rater_id": self.rater_id,
            "tool_id": self.tool_id,
            "ratings": dict(self.ratings),
            "recorded_at": self.recorded_at,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "ScorecardEntry":
        return cls(
            rater_id=raw["rater_id"],
            tool_id=raw["tool_id"],
            ratings=dict(raw["ratings"]),
            recorded_at=raw["recorded_at"],
        )


@dataclass(frozen=True)
class TrustReport:
    tool_id: str
    n_raters: int
    per_item_mean: dict[str, float]  # the five scored items
    overall_mean_of_sums: float  # mean over raters of their five-item sum
    satisfaction_mean: float

    def to_dict(self) -> dict:
        return {
            "tool_id": self.tool_id,
            "n_raters": self.n_raters,
            "per_item_mean": dict(self.per_item_mean),
            "overall_mean_of_sums": self.overall_mean_of_sums,
            "satisfaction_mean": self.satisfaction_mean,
        }


def _validate_ratings(ratings: dict[str, str]) -> None:
    missing = [item for item in ALL_ITEMS if item not in ratings]
    extra = [item for item in ratings if item not in ALL_ITEMS]
    if missing or extra:
        raise IncompleteRatings(
            f"ratings must cover all six items exactly once "
            f"(missing={missing}, unknown={extra})"
        )
    bad = [item for item, rating in ratings.items() if rating not in RATING_POINTS]
    if bad:
        raise IncompleteRatings(f"invalid rating levels for {bad}")


class ScorecardBook:
    """Append-only store of entries with per-tool aggregation."""

    def __init__(self):
        self._entries: dict[tuple[str, str], ScorecardEntry] = {}
        self._lock = Lock()

    def record_entry(self, entry: ScorecardEntry) -> ScorecardEntry:
        _validate_ratings(entry.ratings)
        key = (entry.rater_id, entry.tool_id)
        with self._lock:
            if key in self._entries:
                raise DuplicateEntry(
                    f"rater '{entry.rater_id}' already rated tool '{entry.tool_id}'"
                )
            self._entries[key] = entry
        return entry

    def entries(self, tool_id: str | None = None) -> list[ScorecardEntry]:
        items = sorted(self._entries.values(), key=lambda e: (e.tool_id, e.rater_id))
        if tool_id is None:
            return items
        return [e for e in items if e.tool_id == tool_id]

    def tool_ids(self) -> list[str]:
        return sorted({e.tool_id for e in self._entries.values()})

    def aggregate(self, tool_id: str) -> TrustReport:
        entries = self.entries(tool_id)
        if not entries:
            raise NoEntries(f"no scorecard entries for tool '{tool_id}'")
        n = len(entries)
        per_item = {
            item: sum(RATING_POINTS[e.ratings[item]] for e in entries) / n
            for item in SCORED_ITEMS
        }
        sums = [
            sum(RATING_POINTS[e.ratings[item]] for item in SCORED_ITEMS)
            for e in entries
        ]
        satisfaction = (
            sum(RATING_POINTS[e.ratings[SATISFACTION_ITEM]] for e in entries) / n
        )
        return TrustReport(
            tool_id=tool_id,
            n_raters=n,
            per_item_mean=per_item,
            overall_mean_of_sums=sum(sums) / n,
            satisfaction_mean=satisfaction,
        )

    def compare_tools(self, tool_a: str, tool_b: str) -> dict:
        """Per-item and overall deltas, report(b) minus report(a)."""
        report_a = self.aggregate(tool_a)
        report_b = self.aggregate(tool_b)
        return {
            "tool_a": tool_a,
            "tool_b": tool_b,
            "per_item_delta": {
                item: report_b.per_item_mean[item] - report_a.per_item_mean[item]
                for item in SCORED_ITEMS
            },
            "overall_delta": (
                report_b.overall_mean_of_sums - report_a.overall_mean_of_sums
            ),
            "satisfaction_delta": (
                report_b.satisfaction_mean - report_a.satisfaction_mean
            ),
        }

    # --- spreadsheet interop ---------------------------------------------

    CSV_COLUMNS = ("rater_id", "tool_id") + ALL_ITEMS

    def export_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerow(self.CSV_COLUMNS)
        for entry in self.entries():
            writer.writerow(
                [entry.rater_id, entry.tool_id]
                + [entry.ratings[item] for item in ALL_ITEMS]
            )
        return buffer.getvalue()

    def import_csv(self, text: str) -> int:
        """Load rows of (rater_id, tool_id, six ratings); header optional."""
        count = 0
        for row in csv.reader(io.StringIO(text)):
            if not row or not any(cell.strip() for cell in row):
                continue
            if row[0].strip() == "rater_id":
                continue
            if len(row) != len(self.CSV_COLUMNS):
                raise IncompleteRatings(
                    f"expected {len(self.CSV_COLUMNS)} columns, got {len(row)}"
                )
            rater_id, tool_id, *levels = (cell.strip() for cell in row)
            self.record_entry(
                ScorecardEntry(
                    rater_id=rater_id,
                    tool_id=tool_id,
                    ratings=dict(zip(ALL_ITEMS, levels)),
                )
            )
            count += 1
        return count
