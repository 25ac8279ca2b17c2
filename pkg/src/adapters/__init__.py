"""Adapters - Command-line surface"""
