"""Per-setting joint outcome counts: the tomography input."""
import io
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, field_validator

from tangle.models.events import DetectionEvent
from tangle.models.settings import OUTCOMES, BasisSetting, outcome_index
from tangle.utils.errors import CoverageError, ParseError
from tangle.utils.logging import get_logger

logger = get_logger(__name__)

CSV_COLUMNS = ["setting", "swapped", "detector", "ion", "count"]
NO_PHOTON = "-"


class SettingCounts(BaseModel):
    """Counts for one setting in OUTCOMES order, plus sequences with no click.

    Outcomes are indexed by logical analyzer port, so a swapped setting and its
    partner count the same projectors.
    """
    setting: BasisSetting
    outcomes: List[int] = Field(default_factory=lambda: [0, 0, 0, 0])
    no_photon: int = Field(default=0, ge=0)

    @field_validator("outcomes")
    @classmethod
    def four_nonnegative(cls, value: List[int]) -> List[int]:
        if len(value) != len(OUTCOMES):
            raise ValueError(f"expected {len(OUTCOMES)} outcome counts, got {len(value)}")
        if any(v < 0 for v in value):
            raise ValueError("counts must be nonnegative")
        return list(value)

    @property
    def detected(self) -> int:
        return int(sum(self.outcomes))

    @property
    def sequences(self) -> int:
        return self.detected + self.no_photon

    def frequencies(self) -> np.ndarray:
        total = self.detected
        if total == 0:
            return np.zeros(len(OUTCOMES))
        return np.asarray(self.outcomes, dtype=float) / total


class CountTable(BaseModel):
    """Rows keyed by setting label, kept in insertion order."""
    rows: Dict[str, SettingCounts] = Field(default_factory=dict)

    @classmethod
    def empty(cls, settings: Iterable[BasisSetting]) -> "CountTable":
        return cls(rows={s.label: SettingCounts(setting=s) for s in settings})

    @classmethod
    def from_events(cls, events: Iterable[DetectionEvent], settings: Sequence[BasisSetting],
                    sequences_per_setting: int) -> "CountTable":
        """Aggregate an event log; every setting ran the same number of sequences."""
        table = cls.empty(settings)
        for event in events:
            table.add_event(event)
        for row in table.rows.values():
            row.no_photon = sequences_per_setting - row.detected
            if row.no_photon < 0:
                raise ValueError(f"{row.setting.label} has more events than sequences")
        return table

    def row(self, setting: BasisSetting) -> SettingCounts:
        if setting.label not in self.rows:
            self.rows[setting.label] = SettingCounts(setting=setting)
        return self.rows[setting.label]

    def add_event(self, event: DetectionEvent) -> None:
        self.row(event.setting).outcomes[outcome_index(event.port, event.ion_outcome)] += 1

    def add_no_photon(self, setting: BasisSetting, n: int = 1) -> None:
        self.row(setting).no_photon += n

    @property
    def settings(self) -> List[BasisSetting]:
        return [r.setting for r in self.rows.values()]

    @property
    def detected(self) -> int:
        return sum(r.detected for r in self.rows.values())

    @property
    def sequences(self) -> int:
        return sum(r.sequences for r in self.rows.values())

    def merge(self, other: "CountTable") -> "CountTable":
        """Sum two tables row by row (commutative)."""
        merged = self.model_copy(deep=True)
        for label, row in other.rows.items():
            target = merged.row(row.setting)
            target.outcomes = [a + b for a, b in zip(target.outcomes, row.outcomes)]
            target.no_photon += row.no_photon
        return merged

    def compensated(self) -> "CountTable":
        """Sum every swapped row into its logical partner."""
        result = CountTable()
        for row in self.rows.values():
            target = result.row(row.setting.logical())
            target.outcomes = [a + b for a, b in zip(target.outcomes, row.outcomes)]
            target.no_photon += row.no_photon
        return result

    def missing_partners(self) -> List[str]:
        """Labels whose swap partner is absent from the table."""
        return [label for label, row in self.rows.items() if row.setting.partner().label not in self.rows]

    def require_coverage(self, settings: Iterable[BasisSetting]) -> None:
        """Raise CoverageError naming every setting without detected events."""
        table = self.compensated()
        missing = [s.id for s in settings
                   if s.logical().label not in table.rows or table.rows[s.logical().label].detected == 0]
        if missing:
            raise CoverageError(f"no detected events for settings: {', '.join(missing)}", missing=missing)

    def resample(self, rng: np.random.Generator) -> "CountTable":
        """Multinomial resample of each row's outcomes, keeping per-row totals."""
        result = CountTable()
        for label, row in self.rows.items():
            total = row.detected
            outcomes = rng.multinomial(total, row.frequencies()).tolist() if total else [0, 0, 0, 0]
            result.rows[label] = SettingCounts(setting=row.setting, outcomes=outcomes, no_photon=row.no_photon)
        return result

    def to_frame(self) -> pd.DataFrame:
        records = []
        for row in self.rows.values():
            for (detector, ion), count in zip(OUTCOMES, row.outcomes):
                records.append((row.setting.id, row.setting.swapped, str(detector), ion, count))
            records.append((row.setting.id, row.setting.swapped, NO_PHOTON, NO_PHOTON, row.no_photon))
        return pd.DataFrame.from_records(records, columns=CSV_COLUMNS)

    def to_csv(self, path: Optional[Union[str, Path]] = None) -> str:
        text = self.to_frame().to_csv(index=False, lineterminator="\n")
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "CountTable":
        return cls.parse_csv(Path(path).read_text())

    @classmethod
    def parse_csv(cls, text: str) -> "CountTable":
        """Parse the CSV count format.

        Raises:
            ParseError: With the file line number of the first bad row.
        """
        try:
            frame = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False)
        except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise ParseError(f"unreadable count table: {e}")
        if list(frame.columns) != CSV_COLUMNS:
            raise ParseError(f"expected columns {CSV_COLUMNS}, found {list(frame.columns)}", line=1)

        table = cls()
        for position, record in enumerate(frame.to_dict("records")):
            line = position + 2
            if any(pd.isna(value) or value == "" for value in record.values()):
                raise ParseError("row has missing fields", line=line)
            try:
                basis, axis = record["setting"].split("-")
                swapped = {"True": True, "False": False}[record["swapped"]]
                setting = BasisSetting(photon_basis=basis, ion_axis=axis, swapped=swapped)
                count = int(record["count"])
                if count < 0:
                    raise ValueError("negative count")
            except (ValueError, KeyError) as e:
                raise ParseError(f"invalid row ({e})", line=line)
            row = table.row(setting)
            if record["detector"] == NO_PHOTON and record["ion"] == NO_PHOTON:
                row.no_photon += count
                continue
            try:
                row.outcomes[outcome_index(int(record["detector"]), record["ion"])] += count
            except ValueError:
                raise ParseError(f"unknown outcome ({record['detector']}, {record['ion']})", line=line)
        logger.debug(f"Parsed count table with {len(table.rows)} settings, {table.detected} events")
        return table
