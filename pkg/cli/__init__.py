"""Planar surface code simulator for non-identically distributed qubit noise."""

__version__ = "0.1.0"
