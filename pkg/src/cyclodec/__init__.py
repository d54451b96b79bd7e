"""Multiplier-less multistage decimation filters built from cyclotomic polynomials."""

__version__ = "0.1.0"
SCHEMA_VERSION = "1"
