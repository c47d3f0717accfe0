"""Experiment orchestration behind the command-line runner."""
