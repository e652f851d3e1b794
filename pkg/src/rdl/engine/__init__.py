"""Exact and heuristic finite-graph searches on colored prefixes."""
