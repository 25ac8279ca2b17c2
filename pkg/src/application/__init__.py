"""Application Services"""
from src.application.services.channel_service import ChannelService
from src.application.services.pdf_service import PdfService
from src.application.services.outage_service import OutageService
from src.application.services.montecarlo_service import MonteCarloService
from src.application.services.sweep_service import SweepService
from src.application.services.dataset_service import DatasetService
from src.application.services.training_service import TrainingService
from src.application.services.surrogate_service import SurrogateService

__all__ = [
    "ChannelService",
    "PdfService",
    "OutageService",
    "MonteCarloService",
    "SweepService",
    "DatasetService",
    "TrainingService",
    "SurrogateService",
]
