"""Parallelogram Delaunay graphs and their spanning ratios."""
