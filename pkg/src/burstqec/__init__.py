"""Surface-code error-correction simulator with burst-error handling.

Simulates rotated surface codes under circuit-phenomenological noise with
optional spatially localized bursts of elevated error rate, detects such
bursts statistically, and decodes syndromes with either uniform or
burst-aware edge weights.  Companion analytic models cover decoder memory
footprints, logical-qubit throughput on a block grid, and resource
scalability under recurring bursts.
"""

__version__ = "0.1.0"

from .geometry import CodeGeometry, build_geometry
from .noise import AnomalousRegion, NoiseModel, sample_cycle_errors
from .syndrome import DetectorLattice, extract_detectors, logical_failure
from .distances import Boundary, WeightModel, error_weight
from .matching import MatchingResult, exact_mwpm, greedy_decode
from .decoder import UNIFORM, ANOMALY_AWARE, decode_and_correct

__all__ = [
    "CodeGeometry",
    "build_geometry",
    "AnomalousRegion",
    "NoiseModel",
    "sample_cycle_errors",
    "DetectorLattice",
    "extract_detectors",
    "logical_failure",
    "Boundary",
    "WeightModel",
    "error_weight",
    "MatchingResult",
    "exact_mwpm",
    "greedy_decode",
    "UNIFORM",
    "ANOMALY_AWARE",
    "decode_and_correct",
]
