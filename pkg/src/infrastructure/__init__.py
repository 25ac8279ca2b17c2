"""Infrastructure layer - Density cache and file repositories"""
from src.infrastructure.cache import get_cache

__all__ = ["get_cache"]
