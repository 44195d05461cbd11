"""Command handlers for the gauge-frontier CLI."""
