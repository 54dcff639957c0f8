"""Gabor phase retrieval from two-bin, twice-Nyquist magnitude samples."""
