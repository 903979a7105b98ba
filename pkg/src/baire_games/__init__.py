"""Executable generalized Banach-Mazur games on regular trees."""

__version__ = "0.1.0"
