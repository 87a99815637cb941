"""Received SNR, noise power and decibel conversions."""
