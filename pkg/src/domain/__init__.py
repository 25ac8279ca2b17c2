"""Domain layer - Scenario value objects and result entities"""
from src.domain.value_objects.system_params import SystemParams
from src.domain.value_objects.channel import ChannelDraw, SirSample
from src.domain.value_objects.gamma_fit import GammaFit
from src.domain.value_objects.precision import PrecisionPolicy, DEFAULT_PRECISION
from src.domain.value_objects.mc_config import McConfig
from src.domain.value_objects.grid_spec import GridSpec
from src.domain.value_objects.lm_hyper import LmHyperParams
from src.domain.entities.pdf_grid import PdfGrid
from src.domain.entities.outage import OutageEstimate, DiversityReport, ErrorKind
from src.domain.entities.moment import MomentEstimate
from src.domain.entities.surrogate import DatasetRecord, MlpModel, TrainReport

__all__ = [
    "SystemParams",
    "ChannelDraw",
    "SirSample",
    "GammaFit",
    "PrecisionPolicy",
    "DEFAULT_PRECISION",
    "McConfig",
    "GridSpec",
    "LmHyperParams",
    "PdfGrid",
    "OutageEstimate",
    "DiversityReport",
    "ErrorKind",
    "MomentEstimate",
    "DatasetRecord",
    "MlpModel",
    "TrainReport",
]
