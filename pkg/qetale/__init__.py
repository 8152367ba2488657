"""Exact q-etale stratification, parametric RUR and real fiber sections."""

__version__ = "0.1.0"
