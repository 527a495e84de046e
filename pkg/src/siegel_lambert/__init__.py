"""Numerical realisation of a Lambert-series identity for Saito-Kurokawa lifts."""

__version__ = "0.1.0"
