"""Dense statevector and density-matrix simulation.

Qubit ordering is little-endian throughout: qubit 0 is the least significant bit
of the basis index, and ket labels are written qubit 0 first (``|q0 q1 ...>``).
"""
