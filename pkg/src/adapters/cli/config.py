"""
Run Configuration - Flags, config files and settings merged into one validated model
"""
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.config.constants import OUTAGE_METHOD_ALIASES, PDF_METHOD_ALIASES, LabelMethod, OutageMethod, SweepAxis
from src.config.settings import get_settings
from src.domain.value_objects.lm_hyper import LmHyperParams
from src.domain.value_objects.mc_config import McConfig
from src.domain.value_objects.system_params import SystemParams
from src.error_trace.exceptions import ConfigurationError, StorageError
from src.utilities.helpers import parse_csv_list
from src.utilities.logger import get_logger

logger = get_logger(__name__)

CONFIG_DIR = Path(__file__).resolve().parents[3] / "configs"


def _split(value: Any) -> Any:
    if isinstance(value, str):
        return parse_csv_list(value)
    return value


class RunConfig(BaseModel):
    """Everything one command needs; keys mirror the long flag names"""

    model_config = ConfigDict(extra="forbid")

    # Scenario
    n: int = Field(4, ge=1)
    sigma_sr: float = Field(1.0, gt=0)
    sigma_rd: float = Field(1.0, gt=0)
    sigma_ir: float = Field(1.0, gt=0)
    sigma_id: float = Field(1.0, gt=0)
    snr_db: float = 20.0
    inr_db: float = 0.0
    gamma_th_db: float = 0.0

    # Sweep
    axis: Optional[SweepAxis] = None
    start: Optional[float] = None
    stop: Optional[float] = None
    steps: Optional[int] = None
    methods: List[str] = Field(default_factory=lambda: ["exact"])

    # Reproduction ladders
    n_values: List[int] = Field(default_factory=list)
    inr_values: List[float] = Field(default_factory=list)

    # Monte Carlo and grids
    mc_samples: int = Field(10_000, ge=100)
    confidence: float = Field(0.99, gt=0, lt=1)
    target_op: Optional[float] = Field(None, gt=0, lt=1)
    bins: int = Field(200, ge=20)
    points: Optional[int] = Field(None, ge=16)

    # Surrogate
    records: int = Field(10_000, ge=100)
    label_method: LabelMethod = LabelMethod.EXACT_NUMERIC
    log_targets: bool = False
    max_epochs: int = Field(1000, ge=1)
    patience: int = Field(6, ge=1)
    timing_samples: int = Field(1000, ge=1)
    dataset: Optional[str] = None
    model: Optional[str] = None

    # Run
    seed: int = Field(0, ge=0, lt=2 ** 64)
    workers: int = Field(1, ge=1)
    output: Optional[str] = None
    output_dir: str = "./results"
    json_output: bool = False

    @field_validator("methods", "n_values", "inr_values", mode="before")
    @classmethod
    def split_lists(cls, value):
        return _split(value)

    @field_validator("methods")
    @classmethod
    def known_methods(cls, value: List[str]) -> List[str]:
        if not value:
            raise ValueError("methods must not be empty")
        known = set(OUTAGE_METHOD_ALIASES) | {e.value for e in OutageMethod} | set(PDF_METHOD_ALIASES)
        unknown = [m for m in value if m not in known]
        if unknown:
            raise ValueError(f"unknown methods: {unknown}")
        return value

    @model_validator(mode="after")
    def check_sweep(self) -> "RunConfig":
        if self.steps is not None and self.steps < 2:
            raise ValueError("steps must be at least 2")
        return self

    def outage_methods(self) -> List[OutageMethod]:
        """Requested outage methods in canonical form, order kept"""
        methods = []
        for name in self.methods:
            method = OUTAGE_METHOD_ALIASES.get(name)
            if method is None and name in {e.value for e in OutageMethod}:
                method = OutageMethod(name)
            if method is None:
                raise ConfigurationError(f"{name} is not an outage method", details={"method": name})
            methods.append(method)
        return methods

    def pdf_methods(self) -> List[str]:
        """Requested density methods in canonical form (exact, gamma_fit, mc)"""
        methods = []
        for name in self.methods:
            method = PDF_METHOD_ALIASES.get(name)
            if method is None:
                raise ConfigurationError(f"{name} is not a density method", details={"method": name})
            if method not in methods:
                methods.append(method)
        return methods

    def system_params(self, **overrides: Any) -> SystemParams:
        """Scenario parameters; dB values become linear here, once"""
        values = {
            "n_elements": self.n,
            "sigma_sr": self.sigma_sr,
            "sigma_rd": self.sigma_rd,
            "sigma_ir": self.sigma_ir,
            "sigma_id": self.sigma_id,
            "snr_db": self.snr_db,
            "inr_db": self.inr_db,
            "gamma_th_db": self.gamma_th_db,
        }
        values.update(overrides)
        params = SystemParams(**values)
        logger.info(
            f"scenario N={params.n_elements}: snr={params.snr_lin:.6g}, inr={params.inr_lin:.6g}, "
            f"gamma_bar={params.gamma_bar_lin:.6g}, gamma_th={params.gamma_th_lin:.6g} (linear)"
        )
        return params

    def mc_config(self, seed: Optional[int] = None) -> McConfig:
        return McConfig(
            n_samples=self.mc_samples,
            seed=self.seed if seed is None else seed,
            confidence=self.confidence,
            target_op=self.target_op,
        )

    def lm_hyper(self) -> LmHyperParams:
        return LmHyperParams(max_epochs=self.max_epochs, patience=self.patience)

    def output_path(self, default_name: str) -> Path:
        """--output when given, otherwise output_dir/default_name"""
        return Path(self.output) if self.output else Path(self.output_dir) / default_name


def load_config_file(path: Union[str, Path]) -> Dict[str, str]:
    """
    Read a flat KEY=VALUE config file

    Keys are case-insensitive and may use '-' or '_'; blank values are dropped.

    Args:
        path: Config file

    Returns:
        Dict keyed by RunConfig field names
    """
    path = Path(path)
    if not path.is_file():
        raise StorageError(f"config file not found: {path}", details={"path": str(path)})
    raw = dotenv_values(path)
    return {key.strip().lower().replace("-", "_"): value for key, value in raw.items() if value not in (None, "")}


def reproduce_config_path(target: str) -> Path:
    """Canonical config shipped for a reproduce target"""
    return CONFIG_DIR / f"{target}.env"


def build_run_config(file_values: Dict[str, Any], flag_values: Dict[str, Any]) -> RunConfig:
    """
    Merge settings, config file and flags (later wins) and validate

    Raises:
        ConfigurationError: On unknown keys or invalid values
    """
    settings = get_settings()
    merged: Dict[str, Any] = {
        "seed": settings.seed,
        "workers": settings.workers,
        "mc_samples": settings.mc_samples,
        "confidence": settings.mc_confidence,
        "output_dir": settings.output_dir,
    }
    merged.update(file_values)
    merged.update({k: v for k, v in flag_values.items() if v is not None})
    try:
        return RunConfig(**merged)
    except ValidationError as e:
        problems = [
            {"field": ".".join(str(p) for p in err["loc"]), "message": err["msg"]}
            for err in e.errors()
        ]
        raise ConfigurationError("invalid run configuration", details={"problems": problems}) from e
