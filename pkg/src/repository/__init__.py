"""Repository package for persisting run outputs."""
