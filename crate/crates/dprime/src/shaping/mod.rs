//! Voronoi shaping.
