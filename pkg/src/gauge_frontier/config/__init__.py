"""Configuration module for gauge-frontier."""
