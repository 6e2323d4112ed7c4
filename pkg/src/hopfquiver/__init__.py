"""Exact Hopf actions of Taft algebras and their extensions on quiver path algebras."""

__version__ = "0.1.0"
