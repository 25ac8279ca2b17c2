"""
Evaluation package - Figure and table reproductions
"""
from src.evaluation.reproduction import TARGETS, ReproductionRunner

__all__ = ["TARGETS", "ReproductionRunner"]
