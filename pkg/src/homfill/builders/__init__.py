"""Constructors for the example complexes and cycles."""
