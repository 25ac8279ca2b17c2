"""
RIS Outage - Outage analysis of RIS-assisted D2D links under interference
Version: 0.1.0
"""

__version__ = "0.1.0"
