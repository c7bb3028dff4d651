"""Plane-wave and FDTD simulation of microwave propagation through a layered head model."""

from ._core import (
    ColeCole,
    ColeColePole,
    FieldProfile,
    Layer,
    LayerStack,
    PlaneWaveSolution,
    SarProfile,
    StaticDielectric,
    TissueRecord,
    build_head_stack,
    complex_permittivity,
    default_tissue_db,
    field_profile,
    free_space,
    load_tissue_db,
    parse_config,
    peak_sar,
    penetration_experiment,
    propagation_delay,
    return_loss,
    sar_profile,
    solve_stack,
    synthesize_source,
    tumor_experiment,
    vswr,
)

__all__ = [name for name in dir() if not name.startswith("_")]
