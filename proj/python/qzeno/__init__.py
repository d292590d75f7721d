"""Coherence-protection toolkit: code-subspace search, alternating-pulse
synthesis, protection-cycle simulation and the 14-level worked example."""

from ._core import (
    ConvergenceError,
    ValidationError,
    check_code,
    clebsch_gordan,
    find_code,
    pulse_propagator,
    rb78,
    run_protection,
    solve_timings,
    __version__,
)

__all__ = [
    "ConvergenceError",
    "ValidationError",
    "check_code",
    "clebsch_gordan",
    "find_code",
    "pulse_propagator",
    "rb78",
    "run_protection",
    "solve_timings",
    "__version__",
]
