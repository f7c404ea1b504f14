"""Standalone scripts run with `python -m rotabasis.scripts.<name>`."""
