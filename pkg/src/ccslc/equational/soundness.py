"""Randomised soundness testing of axiom systems against an equivalence."""
from __future__ import annotations

import random
import zlib
from dataclasses import dataclass, field

from ..equivalences import compare
from ..generate import random_term
from ..syntax import Substitution, apply_substitution, variables
from .axioms import AxiomSystem


@dataclass
class Counterexample:
    axiom: str
    sigma: Substitution
    lhs: object
    rhs: object
    witness: str | None

    def to_dict(self) -> dict:
        from ..parser import pretty_print
        return {
            "axiom": self.axiom,
            "substitution": {k: pretty_print(v) for k, v in self.sigma.items()},
            "lhs": pretty_print(self.lhs),
            "rhs": pretty_print(self.rhs),
            "witness": self.witness,
        }


@dataclass
class SoundnessReport:
    system: str
    relation: str
    instances: int = 0
    checks: int = 0
    counterexamples: list[Counterexample] = field(default_factory=list)

    @property
    def sound(self) -> bool:
        return not self.counterexamples

    def refuted(self) -> set[str]:
        return {c.axiom for c in self.counterexamples}

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "relation": self.relation,
            "instances": self.instances,
            "checks": self.checks,
            "sound": self.sound,
            "counterexamples": [c.to_dict() for c in self.counterexamples],
        }


def test_soundness(axioms: AxiomSystem, relation: str = "rbb", count: int = 200,
                   max_size: int = 10, max_depth: int = 4, alphabet=None, seed: int = 0,
                   stop_at_first: bool = True) -> SoundnessReport:
    """Check every axiom instance on ``count`` random closed substitutions.

    Each instance gets its own generator seeded from ``seed`` and the
    instance name, so reports do not depend on iteration order.  With
    ``stop_at_first`` an instance stops at its first counterexample.
    """
    names = tuple(alphabet or axioms.alphabet or ("a",))
    report = SoundnessReport(axioms.name, relation)
    for name, eq in axioms.instances.items():
        report.instances += 1
        rng = random.Random(seed * 1_000_003 + zlib.crc32(name.encode()))
        vs = sorted(variables(eq.lhs) | variables(eq.rhs))
        rounds = count if vs else 1
        for _ in range(rounds):
            sigma = Substitution({v: random_term(rng, max_size, max_depth, names) for v in vs})
            lhs, rhs = apply_substitution(sigma, eq.lhs), apply_substitution(sigma, eq.rhs)
            report.checks += 1
            v = compare(lhs, rhs, relation)
            if not v.result:
                report.counterexamples.append(Counterexample(name, sigma, lhs, rhs, v.witness))
                if stop_at_first:
                    break
    return report


test_soundness.__test__ = False  # keep pytest from collecting it
