"""Figures for gossip speedup tables."""
from .render import render
from .series import SchemaError, SpeedupSeries, read_speedup_csv

__version__ = "0.1.0"
