"""Configuration package"""
from src.config.settings import get_settings

__all__ = ["get_settings"]
