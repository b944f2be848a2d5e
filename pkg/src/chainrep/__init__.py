"""Representations of GL_N over finite chain rings."""

from .chain_ring import (
    ExtensionSpec,
    NonUnit,
    Phase,
    RingElement,
    RingSpec,
    SpecMismatch,
    psi_level,
)
from .characters import KernelCharacter, stabilizer_direct, stabilizer_hill
from .corpus import InstanceDescriptor, corpus_get, corpus_list
from .group_engine import BudgetExceeded, GroupTable, NotInvariant, gl_order
from .heisenberg import characters_above, lifted_char, sigma_for
from .jordan import classify, residue_jcf
from .matrix_algebra import LinearSolution, NonInvertible, RMatrix
from .stability import StabilityCertificate, is_stable, verify_certificate
from .verify import (
    VerificationReport,
    verify_all_stable_r2,
    verify_det_lemma,
    verify_hill_counterexample,
    verify_theorem_A,
    verify_theorem_B,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "ExtensionSpec",
    "GroupTable",
    "InstanceDescriptor",
    "KernelCharacter",
    "LinearSolution",
    "NonInvertible",
    "NonUnit",
    "NotInvariant",
    "Phase",
    "RMatrix",
    "RingElement",
    "RingSpec",
    "SpecMismatch",
    "StabilityCertificate",
    "VerificationReport",
    "characters_above",
    "classify",
    "corpus_get",
    "corpus_list",
    "gl_order",
    "is_stable",
    "lifted_char",
    "psi_level",
    "residue_jcf",
    "sigma_for",
    "stabilizer_direct",
    "stabilizer_hill",
    "verify_all_stable_r2",
    "verify_certificate",
    "verify_det_lemma",
    "verify_hill_counterexample",
    "verify_theorem_A",
    "verify_theorem_B",
]
