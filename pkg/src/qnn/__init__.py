"""Variational quantum neural network."""
