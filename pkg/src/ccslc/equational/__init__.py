"""Axiom systems, proof traces, normal forms and the completeness prover."""

from .axioms import (DERIVED_LAWS, AxiomSystem, builtin_axioms,
                     derived_law)
from .proof import (CheckResult, Proof, ProofTrace, check_proof, parse_trace,
                    trace_to_text)
from .normal import Normalizer, is_normal_form, normalize
from .prover import (NotBisimilarError, Prover, prove_equal,
                     prove_prefixed_bb)
from .soundness import SoundnessReport, test_soundness

__all__ = [
    "DERIVED_LAWS", "AxiomSystem", "builtin_axioms", "derived_law",
    "CheckResult", "Proof", "ProofTrace", "check_proof", "parse_trace",
    "trace_to_text", "Normalizer", "is_normal_form", "normalize",
    "NotBisimilarError", "Prover", "prove_equal", "prove_prefixed_bb",
    "SoundnessReport", "test_soundness",
]
