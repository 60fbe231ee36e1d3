"""Toolkit for AME qubit states, their MDS code ladder and 5-qubit LU invariants."""
