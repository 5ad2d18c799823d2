"""Exact exponential sums over finite fields and the periodicity of their algebraic degrees."""

__version__ = "0.1.0"
