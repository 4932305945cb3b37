"""Constructive completeness: proofs of ``t = u`` from E_RBB whenever
``t`` and ``u`` are rooted branching bisimilar.

Both sides are normalised, then summands are matched.  Prefix summands are
matched by the prefixed-branching lemma (``mu.t = mu.u`` when t and u are
branching bisimilar), merge summands by TL: ``h |> n = h |> tau.n``, after
which the bodies are again handled by the lemma.
"""
from __future__ import annotations

import logging
from collections import Counter

from ..equivalences import compare
from ..syntax import (NIL, TAU, Action, Choice, CMerge, Equation, LMerge,
                      Prefix, Term, Var, ac_canon, ac_equal, make_sum, names,
                      summands)
from .axioms import AxiomSystem, builtin_axioms
from .normal import Normalizer
from .proof import Proof, ProofError, ProofTrace

log = logging.getLogger(__name__)
Pf = Proof


class NotBisimilarError(ValueError):
    """The terms handed to the prover are not in the required relation."""

    def __init__(self, message: str, witness: str | None = None):
        super().__init__(message + (f": {witness}" if witness else ""))
        self.witness = witness


def _parts(t: Term) -> list[Term]:
    return [] if t is NIL else summands(t)


class Prover(Normalizer):
    """Normaliser extended with the matching constructions of the
    completeness argument.  Semantic checks use the system's alphabet."""

    def __init__(self, system: AxiomSystem | None = None):
        super().__init__(system)
        self._bb: dict = {}
        self._core: dict = {}

    # -- semantic oracle --------------------------------------------------
    def bb(self, t: Term, u: Term) -> bool:
        key = (t, u) if id(t) <= id(u) else (u, t)
        hit = self._bb.get(key)
        if hit is None:
            hit = compare(t, u, "bb", self.system.alphabet).result
            self._bb[key] = hit
        return hit

    # -- multiset bookkeeping over sums ----------------------------------
    def duplicate(self, parts: list[Term], extra: list[Term]) -> Proof:
        """sum(parts) = sum(parts + extra), each extra being a copy of a part."""
        steps = []
        cur = list(parts)
        for e in extra:
            rest = list(cur)
            rest.remove(e)
            dup = self.ax("A3'", x=e)
            steps.append(Pf.cong(Choice, Pf.refl(make_sum(rest)), dup) if rest else dup)
            cur.append(e)
        return Pf.chain(Pf.refl(make_sum(parts)), *steps)

    def deduplicate(self, parts: list[Term], target: list[Term]) -> Proof:
        """sum(parts) = sum(target) where target is parts with surplus copies
        removed (multisets compared modulo AC)."""
        want = Counter(ac_canon(t) for t in target)
        have = Counter(ac_canon(t) for t in parts)
        steps = []
        cur = list(parts)
        for t, n in have.items():
            if want[t] == 0 and n:
                raise ProofError("deduplicate would remove a summand entirely")
            for _ in range(n - want[t]):
                rest = list(cur)
                i = next(k for k, s in enumerate(rest) if ac_canon(s) is t)
                e = rest.pop(i)
                j = next(k for k, s in enumerate(rest) if ac_canon(s) is t)
                rest.pop(j)
                dd = self.ax("A3", x=e)
                steps.append(Pf.cong(Choice, Pf.refl(make_sum(rest)), dd) if rest else dd)
                cur = rest + [e]
        return Pf.chain(Pf.refl(make_sum(parts)), *steps)

    # -- matching simple summands ------------------------------------------
    @staticmethod
    def _heads_match(h1: Term, h2: Term) -> str | None:
        if h1 is h2:
            return "same"
        if isinstance(h1, CMerge) and isinstance(h2, CMerge) and \
                isinstance(h1.right, Var) and h1.left is h2.right and h1.right is h2.left:
            return "swap"
        return None

    def match(self, s: Term, r: Term) -> Proof | None:
        """A proof of s = r for simple summands that correspond, else None."""
        if ac_equal(s, r):
            return Pf.refl(s)
        if isinstance(s, Prefix) and isinstance(r, Prefix):
            if s.act == r.act and self.bb(s.body, r.body):
                return self.prefixed(s.body, r.body, s.act)
            return None
        if isinstance(s, LMerge) and isinstance(r, LMerge):
            how = self._heads_match(s.left, r.left)
            if how is None or not self.bb(s.right, r.right):
                return None
            h1, h2 = s.left, r.left
            head = Pf.refl(h1) if how == "same" else self.ax("C1", x=h1.left, y=h1.right)
            return Pf.chain(self.ax("TL'", x=h1, y=s.right),
                            Pf.cong(LMerge, head, self.prefixed(s.right, r.right, TAU)),
                            self.ax("TL", x=h2, y=r.right))
        return None

    def absorb(self, t: Term, u: Term) -> Proof:
        """t = t + u, provided every summand of u matches one of t."""
        tp, up = _parts(t), _parts(u)
        if not up:
            return Pf.refl(t)
        picks, proofs = [], []
        for r in up:
            for s in tp:
                p = self.match(s, r)
                if p is not None:
                    picks.append(s)
                    proofs.append(p)
                    break
            else:
                raise ProofError(f"no summand of {t} matches {r}")
        grow = self.duplicate(tp, picks)
        shift = Pf.sum([Pf.refl(s) for s in tp] + proofs)
        return Pf.chain(grow, shift)

    def equal_summands(self, t: Term, u: Term) -> Proof:
        """t = u for sums whose summands match in both directions."""
        if ac_equal(t, u):
            return Pf.refl(t)
        return Pf.chain(self.absorb(t, u), self.absorb(u, t).reverse())

    # -- prefixed branching lemma on normal forms --------------------------
    def prefixed(self, t: Term, u: Term, mu: Action) -> Proof:
        """mu.t = mu.u for branching bisimilar normal forms t, u."""
        if ac_equal(t, u):
            return Pf.refl(Prefix(mu, t))
        key = (t, u, mu)
        hit = self._core.get(key)
        if hit is not None:
            return hit
        back = self._core.get((u, t, mu))
        if back is not None:
            return back.reverse()
        p = self._prefixed(t, u, mu)
        self._core[key] = p
        return p

    def _absorbing(self, t: Term, other: Term) -> list[Term]:
        return [s for s in _parts(t)
                if isinstance(s, Prefix) and s.act.is_tau and self.bb(s.body, other)]

    def _prefixed(self, t: Term, u: Term, mu: Action) -> Proof:
        at, au = self._absorbing(t, u), self._absorbing(u, t)
        if at and au:
            n, m = at[0].body, au[0].body
            return Pf.chain(self.prefixed(t, m, mu), self.prefixed(n, m, mu).reverse(),
                            self.prefixed(n, u, mu))
        if au:
            return self.prefixed(u, t, mu).reverse()
        if not at:
            return Pf.prefix(mu, self.equal_summands(t, u))
        return self._one_sided(t, u, mu, at)

    def _one_sided(self, t: Term, u: Term, mu: Action, absorbing: list[Term]) -> Proof:
        """t has summands tau.n with n ~ u; u has none of that kind."""
        parts = _parts(t)
        tu = Prefix(TAU, u)
        # t = tau.u + rest
        step = Pf.sum([self.prefixed(s.body, u, TAU) if s in absorbing else Pf.refl(s)
                       for s in parts])
        rest = [s for s in parts if s not in absorbing]
        merged = self.deduplicate(summands(step.rhs), [tu] + rest)
        to_tu = Pf.chain(step, merged)
        if not rest:
            return Pf.chain(Pf.prefix(mu, to_tu), self.tau_absorb(mu, u))
        # u = rest + extra, matching each rest summand inside u
        up = _parts(u)
        used, proofs = set(), []
        for s in rest:
            for k, r in enumerate(up):
                p = self.match(s, r)
                if p is not None:
                    used.add(k)
                    proofs.append(p)
                    break
            else:
                raise ProofError(f"summand {s} has no counterpart in {u}")
        extra = [r for k, r in enumerate(up) if k not in used]
        n = make_sum(rest)
        x = make_sum(extra) if extra else NIL
        # n + x = u
        to_u = Pf.sum(proofs + ([Pf.refl(r) for r in extra] if extra else []))
        to_u = Pf.chain(to_u, self.deduplicate(summands(to_u.rhs), up))
        if not extra:
            to_u = Pf.chain(self.ax("A0", x=n), to_u)
        return Pf.chain(
            Pf.prefix(mu, to_tu),                                                # mu.(tau.u + n)
            Pf.prefix(mu, Pf.cong(Choice, Pf.prefix(TAU, to_u.reverse()), Pf.refl(n))),
            self.ax(f"TB[{mu}]", x=x, y=n),                                      # mu.(x + n)
            Pf.prefix(mu, to_u),
        )


def _system_for(system: AxiomSystem | None, *terms: Term, extra=()) -> AxiomSystem:
    alpha = set(extra)
    for t in terms:
        alpha |= names(t)
    if system is None:
        return builtin_axioms("E_RBB", alpha or {"a"})
    return system.with_alphabet(alpha or {"a"})


def prove_prefixed_bb(t: Term, u: Term, mu: Action,
                      system: AxiomSystem | None = None) -> ProofTrace:
    """A trace of mu.t = mu.u, for branching bisimilar t and u."""
    system = _system_for(system, t, u, extra=[mu.name] if mu.visible else [])
    v = compare(t, u, "bb", system.alphabet)
    if not v.result:
        raise NotBisimilarError("terms are not branching bisimilar", v.witness)
    pr = Prover(system)
    pt, pu = pr.nf(t), pr.nf(u)
    proof = Pf.chain(Pf.prefix(mu, pt), pr.prefixed(pt.rhs, pu.rhs, mu), Pf.prefix(mu, pu).reverse())
    return ProofTrace.from_proof(proof, Equation(Prefix(mu, t), Prefix(mu, u)))


def prove_equal(t: Term, u: Term, system: AxiomSystem | None = None,
                prover: Prover | None = None) -> ProofTrace:
    """A trace of t = u from E_RBB, for rooted branching bisimilar t and u."""
    system = prover.system if prover else _system_for(system, t, u)
    v = compare(t, u, "rbb", system.alphabet)
    if not v.result:
        raise NotBisimilarError("terms are not rooted branching bisimilar", v.witness)
    pr = prover or Prover(system)
    pt, pu = pr.nf(t), pr.nf(u)
    proof = Pf.chain(pt, pr.equal_summands(pt.rhs, pu.rhs), pu.reverse())
    if proof.is_refl and not ac_equal(t, u):  # pragma: no cover - defensive
        raise ProofError("empty proof of a non-trivial equation")
    return ProofTrace.from_proof(proof, Equation(t, u))
