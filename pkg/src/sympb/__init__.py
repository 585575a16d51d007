"""Symplectic billiards in planar convex curves, polygons and in R^2n."""
