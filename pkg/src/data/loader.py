"""CSV ingestion and export."""

import logging
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple, Union

import pandas as pd

from ..config.env import get_settings
from ..config.schema import LABEL_COLUMNS, is_known_feature
from ..errors import InvalidInputError
from .dataset import Dataset, IngestionReport, WaterLabel

logger = logging.getLogger(__name__)

MissingPolicy = Literal["reject", "median"]


class CsvLoader:
    """Reads a water-quality CSV into a labeled dataset."""

    def __init__(
        self,
        path: Union[str, Path],
        ecoli_column: Optional[str] = None,
        threshold: Optional[float] = None,
        missing: MissingPolicy = "reject",
    ):
        """Initialize loader.

        Args:
            path: CSV file (UTF-8, comma separated, header row)
            ecoli_column: E.coli header; defaults to the ``AQUAKERN_ECOLI_COLUMN`` setting
            threshold: Labeling threshold; defaults to ``AQUAKERN_ECOLI_THRESHOLD``
            missing: ``reject`` drops rows with missing values, ``median`` imputes features
        """
        settings = get_settings()
        self.path = Path(path)
        self.ecoli_column = ecoli_column or settings.ecoli_column
        self.threshold = settings.ecoli_threshold if threshold is None else float(threshold)
        if missing not in ("reject", "median"):
            raise InvalidInputError(f"Unknown missing-value policy: {missing}")
        self.missing = missing
        self._report: Optional[IngestionReport] = None

    def _read(self) -> pd.DataFrame:
        if not self.path.is_file():
            raise InvalidInputError(f"CSV file not found: {self.path}")
        try:
            return pd.read_csv(self.path, encoding="utf-8")
        except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
            raise InvalidInputError(f"Cannot parse CSV {self.path}: {exc}") from exc

    def _feature_columns(self, frame: pd.DataFrame, report: IngestionReport) -> List[str]:
        columns = []
        for column in frame.columns:
            if column == self.ecoli_column:
                continue
            if column in LABEL_COLUMNS:
                logger.warning("Dropping label column %r; labels are derived from E.coli", column)
                report.dropped_columns.append(column)
            elif not pd.api.types.is_numeric_dtype(frame[column]):
                logger.warning("Dropping non-numeric column %r", column)
                report.dropped_columns.append(column)
            else:
                columns.append(column)
        return columns

    def load(self) -> Tuple[Dataset, IngestionReport]:
        """Read, clean and label the CSV.

        Returns:
            (dataset, ingestion report)

        Raises:
            InvalidInputError: If the file is missing or unreadable, the E.coli
                column is absent, or no usable rows or feature columns remain
        """
        frame = self._read()
        report = IngestionReport(source=str(self.path), rows_read=len(frame))
        if self.ecoli_column not in frame.columns:
            raise InvalidInputError(
                f"E.coli column {self.ecoli_column!r} not found in {self.path}",
                [f"available columns: {', '.join(map(str, frame.columns))}"],
            )
        columns = self._feature_columns(frame, report)
        if not columns:
            raise InvalidInputError(f"No numeric feature columns in {self.path}")
        extra = [column for column in columns if not is_known_feature(column)]
        if extra:
            logger.info("Using %d columns outside the field-sheet schema: %s", len(extra), extra)

        features = frame[columns].astype(float)
        ecoli = pd.to_numeric(frame[self.ecoli_column], errors="coerce")
        keep = ecoli.notna() & (ecoli >= 0)
        if self.missing == "reject":
            keep &= features.notna().all(axis=1)
        else:
            report.rows_imputed = int((features[keep].isna().any(axis=1)).sum())
            features = features.fillna(features[keep].median())
        report.rows_rejected = int((~keep).sum())
        if report.rows_rejected:
            logger.warning(
                "Rejected %d of %d rows in %s (missing or negative values)",
                report.rows_rejected,
                report.rows_read,
                self.path,
            )
        features, ecoli = features[keep], ecoli[keep]
        if len(features) == 0 or features.isna().any().any():
            raise InvalidInputError(f"No usable rows left in {self.path}")

        dataset = Dataset.from_ecoli(columns, features.to_numpy(), ecoli.to_numpy(), self.threshold)
        report.class_counts = dataset.class_counts()
        logger.info(
            "Ingested %d rows from %s: %s", len(dataset), self.path, report.class_counts
        )
        self._report = report
        return dataset, report

    def get_statistics(self) -> Dict[str, int]:
        """Counts from the last :meth:`load`."""
        if self._report is None:
            return {"rows_read": 0, "rows_rejected": 0, "rows_imputed": 0}
        return {
            "rows_read": self._report.rows_read,
            "rows_rejected": self._report.rows_rejected,
            "rows_imputed": self._report.rows_imputed,
        }


def load_csv(
    path: Union[str, Path],
    ecoli_column: Optional[str] = None,
    threshold: Optional[float] = None,
    missing: MissingPolicy = "reject",
) -> Tuple[Dataset, IngestionReport]:
    """Shortcut for ``CsvLoader(...).load()``."""
    return CsvLoader(path, ecoli_column, threshold, missing).load()


def dataset_to_frame(dataset: Dataset, ecoli_column: Optional[str] = None) -> pd.DataFrame:
    frame = pd.DataFrame(dataset.features, columns=list(dataset.column_names))
    frame[ecoli_column or get_settings().ecoli_column] = dataset.ecoli
    frame["label"] = [WaterLabel(int(v)).display for v in dataset.labels]
    return frame


def dataset_to_csv(
    dataset: Dataset, path: Union[str, Path], ecoli_column: Optional[str] = None
) -> Path:
    """Write features, E.coli and the derived label; ``load_csv`` drops the label again."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    dataset_to_frame(dataset, ecoli_column).to_csv(path, index=False, float_format="%.17g")
    return path
