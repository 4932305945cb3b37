"""CCS with left merge and communication merge: semantics, equivalence
checking, parallel decomposition and equational reasoning."""

from .syntax import (NIL, TAU, Action, Choice, CMerge, CPar, Equation, IVar,
                     LMerge, Nil, Par, Prefix, Substitution, Term, Var,
                     ac_canon, ac_equal, action, apply_substitution,
                     complement, has_zero_factor, size, strip_zeros, summands)
from .parser import (ParseError, SourceSpan, parse_axiom_file,
                     parse_configuration, parse_equation, parse_term,
                     pretty_print)

__version__ = "0.1.0"

__all__ = [
    "NIL", "TAU", "Action", "Choice", "CMerge", "CPar", "Equation", "IVar",
    "LMerge", "Nil", "Par", "Prefix", "Substitution", "Term", "Var",
    "ac_canon", "ac_equal", "action", "apply_substitution", "complement",
    "has_zero_factor", "size", "strip_zeros", "summands", "ParseError",
    "SourceSpan", "parse_axiom_file", "parse_configuration", "parse_equation",
    "parse_term", "pretty_print",
]
