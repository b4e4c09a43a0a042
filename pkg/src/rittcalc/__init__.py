"""Ritt operators and their functional calculi on matrices."""

__version__ = "0.1.0"
