"""Geodesics, cut loci and a continuous shortest-path choice on the unit cube."""
from .cube import SurfacePoint, corner_point, point, from3d, CubeError, DEFAULT_TOL
from .unfold import minimal_geodesics, geodesic_distance, geodesic_distance2, multiplicity
from .star import star_unfold, star_voronoi
from .cutlocus import cut_locus, classify_point
from .gmpr import plan, gmpr_index
from .atlas import region_atlas

__version__ = "0.1.0"

__all__ = [
    "SurfacePoint", "corner_point", "point", "from3d", "CubeError", "DEFAULT_TOL",
    "minimal_geodesics", "geodesic_distance", "geodesic_distance2", "multiplicity",
    "star_unfold", "star_voronoi", "cut_locus", "classify_point", "plan", "gmpr_index",
    "region_atlas",
]
