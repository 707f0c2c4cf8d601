"""Coherent differential PCF: syntax, typing, rewriting, abstract machines
and an intersection-typing oracle for its relational semantics."""

__version__ = "0.1.0"
