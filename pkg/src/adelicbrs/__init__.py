"""Exact bounded remainder sets for rotations on p-adic solenoids.

The package builds weighted unions of adelic boxes whose orbit-count
discrepancy under an irrational rotation stays bounded, and certifies
them three independent ways: an exact discrepancy series, character
volume identities, and a cut-and-project counting oracle.  All decision
arithmetic is exact (integers, Fractions, quadratic irrationals);
floating point appears only in reports and Weyl averages.
"""

from .errors import (AdelicError, CertificateFailure, ConditionViolated,
                     FieldMismatch, InconsistentConstraints,
                     NegativeIndicator, NegativeVolume, PrimeSetMismatch,
                     TrivialCharacter, UnsupportedCoordinate, ZeroGamma,
                     ZeroInput)
from .exact import (ExactReal, PrimeSet, ceil_exact, crt_coset, factorize,
                    floor_exact, is_prime, padic_abs, padic_fractional_part,
                    padic_valuation, rational_residue, weil_product)
from .solenoid import (AdeleVector, LatticeElement, PhaseModOne,
                       SolenoidPoint, as_lattice, character_phase, is_minimal,
                       orbit, reduce_to_fundamental, rotate, weyl_sum,
                       zero_point)
from .brs import (AdelicBox, BRSConstruction, DiscrepancyRecord,
                  DiscrepancySummary, PAdicBall, SparseAdele, VolumeElement,
                  WeightedBoxSet, allowable_volume, box_lift_count,
                  character_volume_identity, choose_n, construct_base,
                  construct_brs, construct_witness, count_coset_in_interval,
                  decompose_volume, discrepancy_series, enumerate_volumes,
                  multiplicity, reduce_to_finite, restrict, special_gamma)
from .cutproject import (CutPoint, CutProjectConfig, correspondence_check,
                         generate_cutproject, project_internal,
                         project_physical, window_companion,
                         window_multiplicity)

__version__ = "0.1.0"

__all__ = [
    "AdelicError", "CertificateFailure", "ConditionViolated",
    "FieldMismatch", "InconsistentConstraints", "NegativeIndicator",
    "NegativeVolume", "PrimeSetMismatch", "TrivialCharacter",
    "UnsupportedCoordinate", "ZeroGamma", "ZeroInput",
    "ExactReal", "PrimeSet", "ceil_exact", "crt_coset", "factorize",
    "floor_exact", "is_prime", "padic_abs", "padic_fractional_part",
    "padic_valuation", "rational_residue", "weil_product",
    "AdeleVector", "LatticeElement", "PhaseModOne", "SolenoidPoint",
    "as_lattice", "character_phase", "is_minimal", "orbit",
    "reduce_to_fundamental", "rotate", "weyl_sum", "zero_point",
    "AdelicBox", "BRSConstruction", "DiscrepancyRecord",
    "DiscrepancySummary", "PAdicBall", "SparseAdele", "VolumeElement",
    "WeightedBoxSet", "allowable_volume", "box_lift_count",
    "character_volume_identity", "choose_n", "construct_base",
    "construct_brs", "construct_witness", "count_coset_in_interval",
    "decompose_volume", "discrepancy_series", "enumerate_volumes",
    "multiplicity", "reduce_to_finite", "restrict", "special_gamma",
    "CutPoint", "CutProjectConfig", "correspondence_check",
    "generate_cutproject", "project_internal", "project_physical",
    "window_companion", "window_multiplicity",
    "__version__",
]
