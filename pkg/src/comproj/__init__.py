"""Exact tools for varieties of complexes of projective modules."""
