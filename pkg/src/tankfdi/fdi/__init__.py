"""Flatness-based fault detection and isolation."""
from .alarms import DEFAULT_DEBOUNCE, AlarmEvaluator, alarm_stream, window_pattern
from .residues import (RESIDUE_CHANNELS, STACKED_CHANNELS, ResidueGenerator,
                       ResidueVector, compute_residues, full_residues, residue_series)
from .sensitivity import (COORDINATES, TABLE_LABELS, SensitivityTable, residue_map,
                          sensitivity_matrix)
from .signature import (SENSITIVITY_THRESHOLD, IsolabilityReport, SignatureMatrix,
                        analyze, augment, build_signature_matrix, distinct_count,
                        independence, isolate)
from .thresholds import (SAFETY_MARGIN, ThresholdSet, calibrate_thresholds,
                         load_thresholds, save_thresholds)

__all__ = [
    "DEFAULT_DEBOUNCE", "AlarmEvaluator", "alarm_stream", "window_pattern",
    "RESIDUE_CHANNELS", "STACKED_CHANNELS", "ResidueGenerator", "ResidueVector",
    "compute_residues", "full_residues", "residue_series",
    "COORDINATES", "TABLE_LABELS", "SensitivityTable", "residue_map", "sensitivity_matrix",
    "SENSITIVITY_THRESHOLD", "IsolabilityReport", "SignatureMatrix", "analyze", "augment",
    "build_signature_matrix", "distinct_count", "independence", "isolate",
    "SAFETY_MARGIN", "ThresholdSet", "calibrate_thresholds", "load_thresholds",
    "save_thresholds",
]
