"""
Infrastructure repositories package
"""
from src.infrastructure.repositories.dataset_repository import DatasetRepository
from src.infrastructure.repositories.model_repository import ModelRepository

__all__ = ["DatasetRepository", "ModelRepository"]
