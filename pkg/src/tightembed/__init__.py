"""Tight embeddings of finite modular lattices into partition lattices."""

__version__ = "0.1.0"
