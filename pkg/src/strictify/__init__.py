"""Strictification kernel for weak bicategories and tricategories."""

from __future__ import annotations

__version__ = "0.1.0"
