"""Python bindings for the semiflow C++ library."""

from semiflow._core import (
    Bundle,
    DomainError,
    Error,
    FluidState,
    MissingEnergyCoordinate,
    NonSingleton,
    ParseError,
    PressureLaw,
    Trajectory,
    UnknownInitialPoint,
    admissible_leq,
    cantor_index,
    continue_at,
    d_inf,
    d_M,
    d_membership,
    disc_set,
    dyadic_lambda,
    embed_state,
    energy_functional,
    eval_functional,
    gen_sqrt_ode_bundle,
    gen_step_family,
    generate_closure,
    normalized,
    pressure,
    pressure_potential,
    project,
    select,
    semigroup_check,
    shift,
    truncation_tail_bound,
    verify_P4,
    verify_P5,
)

__all__ = [name for name in dir() if not name.startswith("_")]
