"""Coined quantum walks on Cayley graphs: simulation, symmetry families,
and numerical verification."""

from __future__ import annotations

from .automorphisms import (GeneralizedSymmetry, ShiftedAutomorphism,
                            apply_generalized_dressing, conjugate_local,
                            enumerate_automorphisms, generalized_transform,
                            identity_automorphism, make_generalized_symmetry,
                            make_shifted_automorphism, permutation_apply)
from .errors import (CayleyWalkError, DegenerateCoinError, EncodingError,
                     FamilyPreconditionError, NonUnitaryError,
                     NotAutomorphismError, NumericDriftError, SpecError,
                     UnsupportedGroupError)
from .groups import (CausalStructure, CayleyGroup, CyclicGroup, HypercubeGroup,
                     LatticeGroup, LineGroup, brute_force_causal, make_group)
from .line import (LineCoinParams, build_line_coin, canonicalize_line_coin,
                   decompose_line_coin, line_coin, mirror_chirality_map,
                   mirror_generalized_symmetry, mirror_inner_symmetry,
                   reflection_automorphism, symmetric_initial_states)
from .linalg import (grover_matrix, hadamard_matrix, random_phases,
                     random_unitary, rotation_matrix)
from .specs import (dump_json, dump_state, parse_coin_spec, parse_group_spec,
                    parse_state_spec, parse_symmetry_spec, symmetry_to_spec,
                    write_distribution_csv)
from .states import LocalUnitary, WalkState, inner_product, position_distribution
from .symmetry import (PhaseField, SymmetryTransform, UnitaryCharacter,
                       apply_dressing, cyclic_character, exp_character,
                       identity_symmetry, make_full_homog_symmetry,
                       make_general_symmetry, make_space_homog_symmetry,
                       make_time_homog_symmetry, sign_character,
                       symmetry_phase_at, transform_coin, transform_state,
                       trivial_character)
from .verify import (VerificationReport, check_homogeneity,
                     check_probability_map, check_symmetry_relation,
                     corrupted_phases, run_invariant_suite)
from .walk import (QuantumCoin, WalkInstance, apply_coin, apply_shift, evolve,
                   evolve_final, grover_coin, hadamard_coin, identity_coin,
                   rotation_coin, step)

__version__ = "0.1.0"

__all__ = [
    "CausalStructure",
    "CayleyGroup",
    "CayleyWalkError",
    "CyclicGroup",
    "DegenerateCoinError",
    "EncodingError",
    "FamilyPreconditionError",
    "GeneralizedSymmetry",
    "HypercubeGroup",
    "LatticeGroup",
    "LineCoinParams",
    "LineGroup",
    "LocalUnitary",
    "NonUnitaryError",
    "NotAutomorphismError",
    "NumericDriftError",
    "PhaseField",
    "QuantumCoin",
    "ShiftedAutomorphism",
    "SpecError",
    "SymmetryTransform",
    "UnitaryCharacter",
    "UnsupportedGroupError",
    "VerificationReport",
    "WalkInstance",
    "WalkState",
    "apply_coin",
    "apply_dressing",
    "apply_generalized_dressing",
    "apply_shift",
    "brute_force_causal",
    "build_line_coin",
    "canonicalize_line_coin",
    "check_homogeneity",
    "check_probability_map",
    "check_symmetry_relation",
    "conjugate_local",
    "corrupted_phases",
    "cyclic_character",
    "decompose_line_coin",
    "dump_json",
    "dump_state",
    "enumerate_automorphisms",
    "evolve",
    "evolve_final",
    "exp_character",
    "generalized_transform",
    "grover_coin",
    "grover_matrix",
    "hadamard_coin",
    "hadamard_matrix",
    "identity_automorphism",
    "identity_coin",
    "identity_symmetry",
    "inner_product",
    "line_coin",
    "make_full_homog_symmetry",
    "make_general_symmetry",
    "make_generalized_symmetry",
    "make_group",
    "make_shifted_automorphism",
    "make_space_homog_symmetry",
    "make_time_homog_symmetry",
    "mirror_chirality_map",
    "mirror_generalized_symmetry",
    "mirror_inner_symmetry",
    "parse_coin_spec",
    "parse_group_spec",
    "parse_state_spec",
    "parse_symmetry_spec",
    "permutation_apply",
    "position_distribution",
    "random_phases",
    "random_unitary",
    "reflection_automorphism",
    "rotation_coin",
    "rotation_matrix",
    "run_invariant_suite",
    "sign_character",
    "step",
    "symmetric_initial_states",
    "symmetry_phase_at",
    "symmetry_to_spec",
    "transform_coin",
    "transform_state",
    "trivial_character",
    "write_distribution_csv",
]
