"""Radius certificates for conformal contractions and harmonic-measure density,
with a walk-on-spheres oracle to check them."""

__version__ = "0.1.0"

from .certificate import (
    DimensionContext,
    certify_planar,
    certify_spatial,
    max_scaling_planar,
    max_scaling_spatial,
    phi,
    sphere_area,
)
from .geometry import RadiiTriple, RoundedConvexBody, probe_points, radii, signed_distance

__all__ = [
    "DimensionContext",
    "RadiiTriple",
    "RoundedConvexBody",
    "certify_planar",
    "certify_spatial",
    "max_scaling_planar",
    "max_scaling_spatial",
    "phi",
    "probe_points",
    "radii",
    "signed_distance",
    "sphere_area",
]
