"""Exact-arithmetic workbench for cyclotomic Birman-Murakami-Wenzl algebras."""

__version__ = "0.1.0"
