"""Pixel etendue as an optical mode count, and the quantum-limited pixel SNR."""
from .core import (
    CONSTANTS,
    CoherenceScaleResult,
    PhysicalConstants,
    RadiometricScenario,
    Regime,
    SensorGeometry,
    classify_regime,
    effective_coherence_scale,
)
from .errors import ConvergenceError, SaturationError, UndefinedGapError, UsageError, ValidationError
from .etendue import (
    EtendueResult,
    FootprintPatch,
    GaussLegendreTensor,
    MidpointGrid,
    PupilDisc,
    QuadratureSpec,
    full_etendue,
    paraxial_etendue,
    pixel_flux,
    projected_solid_angle_of_disc,
    quadrature_etendue,
    reduced_scene_factor,
    reduced_sensor_factor,
)
from .kernels import BACKEND
from .mc import Coherent, Fock, SamplingSpec, Thermal, TrialSummary, sample_mode_occupation, shot_limit_gap, simulate_pixel
from .photon import (
    CoherencePolicy,
    ModeBudget,
    OccupancyResult,
    PhotonStatisticsSummary,
    bose_einstein_occupancy,
    effective_modes,
    mode_count,
    oscillator_energy,
    photon_number,
    shot_noise_sigma,
    snr_compact,
    snr_scene,
    snr_sensor,
    summarize,
)

__version__ = "0.1.0"
