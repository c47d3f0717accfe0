"""Soft-margin SVM on precomputed kernels."""
