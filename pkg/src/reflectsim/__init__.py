"""reflectsim: ray-based received-power simulation for passive reflectors.

Predicts the power profile along a linear RX sweep when a directional TX
illuminates a flat or convex reflector, by coherently summing per-facet ray
contributions, and provides the metrics and I/O needed to compare those
sweeps against channel-sounder measurements.
"""

from .antenna import AntennaPattern, Band, BandDefaults, band_defaults
from .config import ConfigError, ScenarioConfig, dump_config, parse_config
from .engine import (
    AttenuationFactors,
    RayContribution,
    SumMode,
    alpha_curved,
    alpha_flat,
    contribution,
    convex_received_power,
    flat_received_power,
    received_power,
)
from .metrics import (
    ComparisonReport,
    PowerProfile,
    ProfileStats,
    analyze,
    compare,
    flat_vs_convex_gap_db,
    smoothed_envelope_db,
)
from .profile_io import export_profile, import_measured, read_profile_json
from .runner import run_sweep, sweep_profile
from .scene import (
    ConvexReflectorSpec,
    FacetRay,
    FlatReflectorSpec,
    GeometryError,
    Scenario,
    ScenarioGeometry,
    build_default_scenario,
    facetize_flat,
    path_geometry,
    section_convex,
    specular_point,
)

__version__ = "0.1.0"

__all__ = [
    "AntennaPattern",
    "AttenuationFactors",
    "Band",
    "BandDefaults",
    "ComparisonReport",
    "ConfigError",
    "ConvexReflectorSpec",
    "FacetRay",
    "FlatReflectorSpec",
    "GeometryError",
    "PowerProfile",
    "ProfileStats",
    "RayContribution",
    "Scenario",
    "ScenarioConfig",
    "ScenarioGeometry",
    "SumMode",
    "alpha_curved",
    "alpha_flat",
    "analyze",
    "band_defaults",
    "build_default_scenario",
    "compare",
    "contribution",
    "convex_received_power",
    "dump_config",
    "export_profile",
    "facetize_flat",
    "flat_received_power",
    "flat_vs_convex_gap_db",
    "import_measured",
    "parse_config",
    "path_geometry",
    "read_profile_json",
    "received_power",
    "run_sweep",
    "section_convex",
    "smoothed_envelope_db",
    "specular_point",
    "sweep_profile",
    "__version__",
]
