"""Exact enumeration, asymptotics and uniform sampling of closed lambda-terms."""

__version__ = "0.1.0"
