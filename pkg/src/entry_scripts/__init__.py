"""Entry point scripts"""
