"""ML Models - numpy outage surrogate"""
