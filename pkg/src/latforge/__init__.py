"""Relation lattices (Equ, Quo, Tran) and their small generating sets."""

__version__ = "0.1.0"
