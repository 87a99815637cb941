"""Rectifier and RIS power consumption models."""
