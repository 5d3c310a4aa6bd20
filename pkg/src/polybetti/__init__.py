"""Graded Betti tables of toric surfaces attached to lattice polygons."""

__version__ = "0.1.0"
