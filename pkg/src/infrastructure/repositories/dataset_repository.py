"""
Dataset Repository - CSV persistence of datasets and result tables
"""
from pathlib import Path
from typing import List, Optional, Union

import pandas as pd

from src.config.constants import (
    CSV_FLOAT_FORMAT,
    DATASET_COLUMNS,
    OUTAGE_COLUMNS,
    PDF_COLUMNS,
    REGRESSION_COLUMNS,
    SWEEP_COLUMNS,
    TIMING_COLUMNS,
    TRAINING_COLUMNS,
)
from src.error_trace.exceptions import ContractViolationError, StorageError
from src.utilities.logger import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]

# Schema name -> required header, checked in this order
SCHEMAS = {
    "dataset": DATASET_COLUMNS,
    "sweep": SWEEP_COLUMNS,
    "outage": OUTAGE_COLUMNS,
    "pdf": PDF_COLUMNS,
    "training": TRAINING_COLUMNS,
    "regression": REGRESSION_COLUMNS,
    "timing": TIMING_COLUMNS,
}


class DatasetRepository:
    """Reads and writes the toolkit's CSV files with pandas"""

    def write_frame(self, frame: pd.DataFrame, path: PathLike) -> Path:
        """
        Write a table, creating parent directories

        Args:
            frame: Table to write
            path: Target file

        Returns:
            The written path
        """
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
        except OSError as e:
            raise StorageError(f"cannot write {path}", details={"path": str(path), "reason": str(e)}) from e
        logger.info(f"Wrote {len(frame)} rows to {path}")
        return path

    def append_frame(self, frame: pd.DataFrame, path: PathLike) -> None:
        """Append rows, writing the header only when the file is new"""
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            new_file = not path.exists() or path.stat().st_size == 0
            frame.to_csv(path, mode="a", header=new_file, index=False, float_format=CSV_FLOAT_FORMAT)
        except OSError as e:
            raise StorageError(f"cannot append to {path}", details={"path": str(path), "reason": str(e)}) from e

    def read_frame(self, path: PathLike) -> pd.DataFrame:
        """Read any CSV table"""
        path = Path(path)
        try:
            return pd.read_csv(path)
        except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise StorageError(f"cannot read {path}", details={"path": str(path), "reason": str(e)}) from e

    def detect_schema(self, frame: pd.DataFrame) -> str:
        """
        Name of the schema a table follows

        Raises:
            ContractViolationError: If no known header matches
        """
        columns = list(frame.columns)
        for name, required in SCHEMAS.items():
            if columns == list(required):
                return name
        raise ContractViolationError("unrecognized CSV header", details={"columns": columns})

    def read_dataset(self, path: PathLike) -> pd.DataFrame:
        """
        Read a labelled dataset and check its header and targets

        Args:
            path: Dataset CSV

        Returns:
            DataFrame with the dataset columns
        """
        frame = self.read_frame(path)
        if list(frame.columns) != DATASET_COLUMNS:
            raise ContractViolationError(
                "dataset header does not match",
                details={"expected": DATASET_COLUMNS, "got": list(frame.columns)}
            )
        targets = frame[DATASET_COLUMNS[-1]]
        if targets.isna().any() or (targets < 0).any() or (targets > 1).any():
            raise ContractViolationError("dataset targets must lie in [0, 1]", details={"path": str(path)})
        return frame

    def write_dataset(self, frame: pd.DataFrame, path: PathLike) -> Path:
        return self.write_frame(frame[DATASET_COLUMNS], path)

    @staticmethod
    def records_frame(rows: List[List[float]], columns: Optional[List[str]] = None) -> pd.DataFrame:
        return pd.DataFrame(rows, columns=columns or DATASET_COLUMNS)
