"""Unipotent Albanese maps of elliptic and odd hyperelliptic curves, computed exactly."""

__version__ = "0.1.0"
