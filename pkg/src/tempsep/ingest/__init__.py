from .gtfs import GtfsParams, load_gtfs, select_endpoints_gtfs
from .synth import SynthesisParams, synthesize, synthesize_detailed
from .tntp import StaticGraph, load_tntp

__all__ = [
    "GtfsParams",
    "StaticGraph",
    "SynthesisParams",
    "load_gtfs",
    "load_tntp",
    "select_endpoints_gtfs",
    "synthesize",
    "synthesize_detailed",
]
