"""Walk-on-spheres harmonic-measure oracle with analytic Poisson references."""

from .density import DensityProbe, VerificationReport, density_at, poisson_density, score_probes, verify_density
from .estimator import WalkOnSpheres
from .wos import (
    Bins,
    ExitOutcome,
    ExitSample,
    HarmonicMeasureEstimate,
    WosConfig,
    angular_bins,
    arclength_bins,
    harmonic_measure,
    octant_bins,
    sample_exits,
    wos_exit,
)

__all__ = [
    "Bins",
    "DensityProbe",
    "ExitOutcome",
    "ExitSample",
    "HarmonicMeasureEstimate",
    "VerificationReport",
    "WalkOnSpheres",
    "WosConfig",
    "angular_bins",
    "arclength_bins",
    "density_at",
    "harmonic_measure",
    "octant_bins",
    "poisson_density",
    "sample_exits",
    "score_probes",
    "verify_density",
    "wos_exit",
]
