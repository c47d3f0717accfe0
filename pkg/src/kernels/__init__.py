"""Classical and quantum kernels."""
