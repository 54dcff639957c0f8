"""Collects one pass/fail line per acceptance criterion for the session summary."""

LINES = []
