"""
Dataset Service - Labelled scenario datasets for the outage surrogate
"""
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import numpy as np
import pandas as pd

from src.config.constants import DATASET_COLUMNS, DATASET_RANGES, SPLIT_FRACTIONS, LabelMethod, OutageMethod
from src.config.settings import get_settings
from src.domain.entities.surrogate import DatasetRecord
from src.domain.value_objects.mc_config import McConfig
from src.domain.value_objects.system_params import SystemParams
from src.error_trace.exceptions import ContractViolationError, RisOutageError
from src.application.services.montecarlo_service import MonteCarloService
from src.application.services.outage_service import OutageService
from src.application.services.pdf_service import PdfService
from src.infrastructure.cache import InMemoryCacheManager
from src.infrastructure.repositories.dataset_repository import DatasetRepository
from src.numerics.streams import derive_seed, stream
from src.utilities.helpers import chunk_list, ordered_map
from src.utilities.logger import get_logger

logger = get_logger(__name__)

MIN_RECORDS = 100
# records labelled between two appends to the dataset file
WRITE_BATCH = 64


class DatasetService:
    """Samples scenarios uniformly and labels them with an outage method"""

    def __init__(
        self,
        outage_service: Optional[OutageService] = None,
        mc_service: Optional[MonteCarloService] = None,
        repository: Optional[DatasetRepository] = None,
        workers: Optional[int] = None,
    ):
        settings = get_settings()
        self.workers = workers or settings.workers
        # every record is a fresh scenario, so pdf grids are not cached
        self.outage_service = outage_service or OutageService(PdfService(cache=InMemoryCacheManager(enabled=False)))
        self.mc_service = mc_service or MonteCarloService(workers=1)
        self.repository = repository or DatasetRepository()
        self.mc_samples = settings.mc_samples

    @staticmethod
    def sample_scenario(seed: int, index: int, ranges: Dict[str, Tuple[float, float]]) -> SystemParams:
        """
        Draw the scenario of one record from its own stream

        Args:
            seed: Dataset seed
            index: Record index
            ranges: Inclusive sampling bounds (see DATASET_RANGES)

        Returns:
            SystemParams
        """
        rng = stream(seed, index)
        gamma_th_db = rng.uniform(*ranges["gamma_th_db"])
        snr_db = rng.uniform(*ranges["snr_db"])
        inr_db = rng.uniform(*ranges["inr_db"])
        sigmas = rng.uniform(*ranges["sigma"], size=4)
        low_n, high_n = ranges["n_elements"]
        n_elements = int(rng.integers(int(low_n), int(high_n) + 1))
        return SystemParams(
            n_elements=n_elements,
            sigma_sr=float(sigmas[0]),
            sigma_rd=float(sigmas[1]),
            sigma_ir=float(sigmas[2]),
            sigma_id=float(sigmas[3]),
            snr_db=float(snr_db),
            inr_db=float(inr_db),
            gamma_th_db=float(gamma_th_db),
        )

    def label(self, params: SystemParams, label_method: LabelMethod, seed: int, index: int) -> float:
        """Outage probability of one scenario by the chosen labelling method"""
        label_method = LabelMethod(label_method)
        if label_method == LabelMethod.EXACT_NUMERIC:
            return self.outage_service.op_exact(params).value
        if label_method == LabelMethod.GAMMA_NUMERIC:
            return self.outage_service.gamma_estimate(params, OutageMethod.GAMMA_NUMERIC).value
        cfg = McConfig(n_samples=self.mc_samples, seed=derive_seed(seed, index, 1))
        return self.mc_service.estimate_op_mc(params, cfg).value

    def _record(self, seed: int, index: int, label_method: LabelMethod, ranges) -> Optional[DatasetRecord]:
        params = self.sample_scenario(seed, index, ranges)
        try:
            target = self.label(params, label_method, seed, index)
        except RisOutageError as e:
            logger.warning(f"record {index} skipped: {e.error_code} {e.message} ({params.to_dict()})")
            return None
        return DatasetRecord(
            features=(
                params.gamma_th_db,
                params.gamma_bar_db,
                params.sigma_sr,
                params.sigma_rd,
                params.sigma_ir,
                params.sigma_id,
                float(params.n_elements),
            ),
            target=target,
        )

    def generate_dataset(
        self,
        n_records: int,
        label_method: LabelMethod = LabelMethod.EXACT_NUMERIC,
        seed: int = 0,
        ranges: Optional[Dict[str, Tuple[float, float]]] = None,
        path: Optional[Union[str, Path]] = None,
    ) -> pd.DataFrame:
        """
        Generate a labelled dataset, streaming it to a CSV file when a path is given

        Records whose label fails are logged and left out, so the result may
        hold fewer than n_records rows.

        Args:
            n_records: Number of scenarios to sample (>= 100)
            label_method: exact_numeric, gamma_numeric or monte_carlo
            seed: Dataset seed; record i uses stream (seed, i)
            ranges: Overrides of the sampling bounds
            path: Optional CSV target, overwritten

        Returns:
            DataFrame with the dataset columns
        """
        if n_records < MIN_RECORDS:
            raise ContractViolationError(f"n_records must be at least {MIN_RECORDS}", details={"n_records": n_records})
        label_method = LabelMethod(label_method)
        ranges = {**DATASET_RANGES, **(ranges or {})}
        for key, (low, high) in ranges.items():
            if low > high:
                raise ContractViolationError(f"empty sampling range for {key}", details={"range": [low, high]})
        logger.info(f"generate_dataset: {n_records} records, label={label_method.value}, seed={seed}")

        if path is not None:
            path = Path(path)
            if path.exists():
                path.unlink()

        frames = []
        skipped = 0
        for batch in chunk_list(range(n_records), WRITE_BATCH):
            records = ordered_map(lambda i: self._record(seed, i, label_method, ranges), batch, self.workers)
            kept = [r.to_row() for r in records if r is not None]
            skipped += len(records) - len(kept)
            frame = self.repository.records_frame(kept)
            frames.append(frame)
            if path is not None and kept:
                self.repository.append_frame(frame, path)

        dataset = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=DATASET_COLUMNS)
        if skipped:
            logger.warning(f"{skipped} of {n_records} records skipped after labelling failures")
        return dataset

    @staticmethod
    def split_dataset(
        dataset: pd.DataFrame,
        fractions: Tuple[float, float, float] = SPLIT_FRACTIONS,
        seed: int = 0,
    ) -> Tuple[pd.DataFrame, pd.DataFrame, pd.DataFrame]:
        """
        Seeded shuffle split into (train, test, validation)

        Train and test sizes are round(f * n); validation takes the rest.

        Args:
            dataset: Labelled records
            fractions: (train, test, validation), summing to one
            seed: Shuffle seed

        Returns:
            (train, test, validation)
        """
        fractions = tuple(float(f) for f in fractions)
        if len(fractions) != 3 or min(fractions) < 0 or abs(sum(fractions) - 1.0) > 1e-9:
            raise ContractViolationError("fractions must be three nonnegative values summing to 1",
                                         details={"fractions": list(fractions)})
        n = len(dataset)
        order = stream(seed, 0).permutation(n)
        n_train = int(round(fractions[0] * n))
        n_test = min(int(round(fractions[1] * n)), n - n_train)
        parts = np.split(order, [n_train, n_train + n_test])
        train, test, validation = (dataset.iloc[p].reset_index(drop=True) for p in parts)
        return train, test, validation
