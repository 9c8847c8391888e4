"""Entanglement entropy and spectra of low-nullity stabilizer superpositions."""

from .circuit import CircuitProgram, Instruction, execute, parse, render, run
from .entropy import (
    AlgebraicState,
    EntropyReport,
    LogicalAlgebra,
    algebraic_entropy,
    area_term,
    entanglement_report,
    logical_algebra_on_region,
    logical_generators,
    reconstruct_logical_state,
)
from .errors import BudgetExceededError, InfeasibleError, ZeroProbabilityError
from .extract import choose_error_operator, maximal_stabilizer_group, nullity
from .frames import FrameState
from .groups import StabGroup, common_subgroup
from .kernels import BACKEND
from .learner import bell_difference_sample, learn_entropy, recover_group
from .logical import LogicalView
from .superposition import SuperposedState
from .symplectic import PauliOp, kernel_symplectic, symplectic_gram_schmidt, symplectic_product
from .tableau import ExactOverlap, StabTableau, inner_product, subsystem_entropy_bits

__version__ = "0.1.0"

__all__ = [
    "AlgebraicState",
    "BACKEND",
    "BudgetExceededError",
    "CircuitProgram",
    "EntropyReport",
    "ExactOverlap",
    "FrameState",
    "InfeasibleError",
    "Instruction",
    "LogicalAlgebra",
    "LogicalView",
    "PauliOp",
    "StabGroup",
    "StabTableau",
    "SuperposedState",
    "ZeroProbabilityError",
    "algebraic_entropy",
    "area_term",
    "bell_difference_sample",
    "choose_error_operator",
    "common_subgroup",
    "entanglement_report",
    "execute",
    "inner_product",
    "kernel_symplectic",
    "learn_entropy",
    "logical_algebra_on_region",
    "logical_generators",
    "maximal_stabilizer_group",
    "nullity",
    "parse",
    "reconstruct_logical_state",
    "recover_group",
    "render",
    "run",
    "subsystem_entropy_bits",
    "symplectic_gram_schmidt",
    "symplectic_product",
]
