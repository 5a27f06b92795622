"""Exact decisions and constructions for diagonals of three-point-spectrum
operators."""

from .extended import INF, as_fraction, ext_sum, is_inf
from .feasibility import (NEG_INF, NON_INTEGER, AdmissibleEntry, AdmissibleSet,
                          Decision, SpectrumSetTarget, SpectrumTarget, Witness,
                          admissible_set, decide, decide_any, decide_case_a,
                          decide_spectrum_set, kadison_feasible, kadison_index,
                          search_witness, witness_bound)
from .realize import (ConstructionPlan, FiniteThreePointBlock,
                      PlanSynthesisError, PlanVerificationError,
                      ScaledProjectionBlock, Transfer, certify,
                      construct_hermitian, construct_three_point,
                      majorization_check, verify_plan)
from .sequences import (ConstantTail, DiagonalSpec, GeometricAbove,
                        GeometricLower, GeometricUpper, PartitionSums, TailAtom,
                        format_rational, move_mass, parse_rational,
                        partition_sums, spec_from_json, spec_to_json,
                        tail_from_json, tail_to_json)

__all__ = [
    "INF", "NEG_INF", "NON_INTEGER", "is_inf", "ext_sum", "as_fraction",
    "TailAtom", "ConstantTail", "GeometricLower", "GeometricUpper",
    "GeometricAbove", "DiagonalSpec", "PartitionSums", "partition_sums",
    "move_mass", "parse_rational", "format_rational",
    "spec_from_json", "spec_to_json", "tail_from_json", "tail_to_json",
    "SpectrumTarget", "SpectrumSetTarget", "Witness", "Decision",
    "decide", "decide_case_a", "decide_any", "decide_spectrum_set",
    "kadison_index", "kadison_feasible", "search_witness", "witness_bound",
    "AdmissibleSet", "AdmissibleEntry", "admissible_set",
    "majorization_check", "construct_hermitian", "construct_three_point",
    "ConstructionPlan", "Transfer", "FiniteThreePointBlock",
    "ScaledProjectionBlock", "certify", "verify_plan",
    "PlanSynthesisError", "PlanVerificationError",
]

__version__ = "1.0.0"
