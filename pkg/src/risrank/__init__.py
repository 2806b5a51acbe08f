"""Simulation of 1-bit RIS phase configurations for MIMO effective-rank
enhancement: near-field channel synthesis, passive beam focusing and
rank metrics."""

from .focuser import (
    FocusResult,
    Mode,
    OpCounters,
    cascade_gain,
    complexity_estimate,
    exhaustive_pair_optimum,
    greedy_flip_pair,
    passive_beam_focus,
)
from .linalg import SvdConvergenceError, SvdResult, frobenius_norm, matmul, svd
from .metrics import (
    RankReport,
    condition_number,
    difference_pct,
    effective_rank,
    mean_effective_rank,
    rank_report,
)
from .ris import RisConfig, compose_channel, fixed_phase_configs, phase_matrix
from .scene import (
    ChannelSet,
    Regime,
    ScenarioSpec,
    SceneGeometry,
    build_geometry,
    copper_sheet_channel,
    default_copper_sheet,
    los_gain,
    rayleigh_distance,
    synthesize,
    transmit,
)

__version__ = "0.1.0"
