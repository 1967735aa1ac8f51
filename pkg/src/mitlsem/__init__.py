"""Exact truth sets for metric temporal logic over piecewise-constant signals."""
