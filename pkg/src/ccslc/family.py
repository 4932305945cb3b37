"""The witness family a^{<=i}, p_n and e_n, and experiments on it.

``e_n`` equates ``a.0 || p_n`` with its expansion.  Both sides are rooted
branching bisimilar, yet only the left one has a summand equivalent to
``a.0 || p_n`` (property P_n).  Over plain CCS no finite sound axiom system
can bridge that asymmetry for every n; with the auxiliary merges the
prover below handles each e_n directly.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from .decomposition import UniverseParams, is_indecomposable_bounded
from .equivalences import depth, rdepth, rooted_branching_bisim
from .semantics import ResourceError
from .syntax import (NIL, Action, DomainError, Equation, Par, Prefix, Term,
                     make_sum, summands)

A = Action("a")


def _power(j: int) -> Term:
    t = NIL
    for _ in range(j):
        t = Prefix(A, t)
    return t


def build_a_leq(i: int) -> Term:
    """a + a.a + ... + a^i, each power ending in 0."""
    if i < 1:
        raise DomainError("a^{<=i} needs i >= 1")
    return make_sum([_power(j) for j in range(1, i + 1)])


def build_p_n(n: int) -> Term:
    if n < 2:
        raise DomainError("p_n needs n >= 2")
    return make_sum([Prefix(A, build_a_leq(i)) for i in range(2, n + 1)])


def build_e_n(n: int) -> Equation:
    p = build_p_n(n)
    rhs = make_sum([Prefix(A, p)] + [Prefix(A, Par(Prefix(A, NIL), build_a_leq(i)))
                                     for i in range(2, n + 1)])
    return Equation(Par(Prefix(A, NIL), p), rhs, f"e_{n}")


def check_property_Pn(p: Term, n: int) -> bool:
    """Does some summand of p behave like a.0 || p_n (rooted)?"""
    target = Par(Prefix(A, NIL), build_p_n(n))
    return any(rooted_branching_bisim(s, target) for s in summands(p))


@dataclass
class FamilyReport:
    n: int
    e_n_sound: bool = False
    lhs_has_Pn: bool = False
    rhs_has_Pn: bool = True
    indecomposable: dict = field(default_factory=dict)
    depths: dict = field(default_factory=dict)
    depth_identities: bool = False
    proof_valid: bool | None = None
    proof_steps: int | None = None
    proof_trace: object = None
    incomplete: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return (self.e_n_sound and self.lhs_has_Pn and not self.rhs_has_Pn
                and self.depth_identities and all(self.indecomposable.values())
                and self.proof_valid is not False and not self.incomplete)

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "n": self.n,
            "e_n_sound": self.e_n_sound,
            "lhs_has_Pn": self.lhs_has_Pn,
            "rhs_has_Pn": self.rhs_has_Pn,
            "indecomposable": dict(self.indecomposable),
            "depths": dict(self.depths),
            "depth_identities": self.depth_identities,
            "proof_valid": self.proof_valid,
            "proof_steps": self.proof_steps,
            "incomplete": list(self.incomplete),
            "ok": self.ok,
        }
        if timing:
            d["seconds"] = round(self.seconds, 3)
        return d


def run_negative_experiment(n: int, u: UniverseParams | None = None,
                            prove: bool = True) -> FamilyReport:
    """Run every sub-check for e_n; resource failures are listed in
    ``incomplete`` rather than raised."""
    if n < 2:
        raise DomainError("the family starts at n = 2")
    from .equational import check_proof, prove_equal
    from .equational.axioms import builtin_axioms

    start = time.perf_counter()
    u = u or UniverseParams.over("a", "~a", "tau", max_size=8)
    eq = build_e_n(n)
    rep = FamilyReport(n)
    rep.e_n_sound = rooted_branching_bisim(eq.lhs, eq.rhs)
    rep.lhs_has_Pn = check_property_Pn(eq.lhs, n)
    rep.rhs_has_Pn = check_property_Pn(eq.rhs, n)

    targets = {f"a<={i}": build_a_leq(i) for i in range(2, n + 1)}
    targets[f"p_{n}"] = build_p_n(n)
    for name, t in targets.items():
        try:
            rep.indecomposable[name] = is_indecomposable_bounded(t, u).indecomposable
        except ResourceError:
            rep.incomplete.append(f"indecomposable:{name}")

    p = build_p_n(n)
    rep.depths = {
        "depth(a||p_n)": depth(eq.lhs),
        "rdepth(a||p_n)": rdepth(eq.lhs),
        "rdepth(rhs)": rdepth(eq.rhs),
        "rdepth(p_n)": rdepth(p),
    }
    rep.depth_identities = (rep.depths["depth(a||p_n)"] == n + 2
                            and rep.depths["rdepth(p_n)"] == n + 1
                            and rep.depths["rdepth(a||p_n)"] == n + 2
                            and rep.depths["rdepth(rhs)"] == n + 2)

    if prove:
        system = builtin_axioms("E_RBB", {"a"})
        try:
            trace = prove_equal(eq.lhs, eq.rhs, system)
            res = check_proof(trace, system)
            rep.proof_valid = res.valid
            rep.proof_steps = len(trace.steps)
            rep.proof_trace = trace
        except ResourceError:
            rep.incomplete.append("proof")
    rep.seconds = time.perf_counter() - start
    return rep
