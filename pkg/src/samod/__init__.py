"""Finite semiring modules: submodule lattices, SA sets, exchange amalgams and order structure."""

__version__ = "0.1.0"
