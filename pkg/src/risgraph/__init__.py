"""Deterministic simulator for multihop reflector-assisted wireless mesh
networks: per-segment SNR, beam geometry, interference graphs and
scheduling metrics."""

from .channel import ChannelParams, Segment
from .config import ExperimentConfig, load_config, parse_config
from .errors import (
    ConfigError,
    DomainError,
    FixtureError,
    InfeasibleSegment,
    RisGraphError,
)
from .geometry import BeamChain, Cone, Cylinder, Point3, RisGeometry
from .interference import ConflictMatrix, build_conflict_matrix
from .mapping import InterferenceGraph, OrderingPolicy, SinrContext
from .metrics import MetricsReport
from .network import Scenario, ScenarioSpec, TransmissionPath, generate_scenario

__version__ = "0.1.0"

__all__ = [
    "BeamChain",
    "ChannelParams",
    "Cone",
    "ConfigError",
    "ConflictMatrix",
    "Cylinder",
    "DomainError",
    "ExperimentConfig",
    "FixtureError",
    "InfeasibleSegment",
    "InterferenceGraph",
    "MetricsReport",
    "OrderingPolicy",
    "Point3",
    "RisGeometry",
    "RisGraphError",
    "Scenario",
    "ScenarioSpec",
    "Segment",
    "SinrContext",
    "TransmissionPath",
    "build_conflict_matrix",
    "generate_scenario",
    "load_config",
    "parse_config",
]
