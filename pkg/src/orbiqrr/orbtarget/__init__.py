"""Targets, bundles, and orbifold cohomology classes."""

from .builders import (
    bmu,
    bmu_character,
    build_target,
    line_bundle_On,
    point,
    projective_space,
    trivial_bundle,
    weighted_projective,
    wps_pullback_line,
)
from .config import dump_target, load_target, target_from_obj, target_to_obj
from .model import (
    BasisClass,
    BundleModel,
    CohClass,
    Component,
    TargetModel,
    age_of_bundle,
    eigen_chern,
    orbifold_pairing,
    twisted_pairing,
)

__all__ = [
    "BasisClass",
    "Component",
    "TargetModel",
    "CohClass",
    "BundleModel",
    "orbifold_pairing",
    "twisted_pairing",
    "eigen_chern",
    "age_of_bundle",
    "build_target",
    "point",
    "bmu",
    "projective_space",
    "weighted_projective",
    "trivial_bundle",
    "bmu_character",
    "line_bundle_On",
    "wps_pullback_line",
    "load_target",
    "dump_target",
    "target_to_obj",
    "target_from_obj",
]
