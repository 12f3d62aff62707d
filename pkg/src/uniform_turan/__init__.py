"""Palette colorability, constructions and density audits for 3-uniform hypergraphs."""

__version__ = "0.1.0"
