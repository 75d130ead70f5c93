"""Cyclotomic Neumaier graphs: constructions, classification, coherent closures and searches."""

__version__ = "0.1.0"
