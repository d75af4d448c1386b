"""Experiment orchestration: designs, seeded runs, campaigns, analysis and CLI."""
