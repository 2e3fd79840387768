"""Exact discriminants, traces and Frobenius data for graded algebras over central subalgebras."""

__version__ = "0.1.0"
