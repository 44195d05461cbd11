"""Gauge Frontier - Bhattacharyya packing and diversity gauges for fading channels."""

__version__ = "0.1.0"
__author__ = "LuiccianDev"
__description__ = "Packing numbers, diversity frontiers and SNR gauges for fading channels"
