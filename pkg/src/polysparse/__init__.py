"""Sparsity and coupling-dof statistics for polytopal methods on periodic meshes."""

__version__ = "0.1.0"
