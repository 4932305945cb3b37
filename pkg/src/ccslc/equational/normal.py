"""Normal forms and the normalisation procedure.

Normal forms are sums of simple summands ``mu.N``, ``x |> N``,
``(x | alpha.0) |> N`` and ``(x | y) |> N``.  Normalisation works bottom-up:
arguments are normalised first, then the operator at hand is pushed inside
with P, L0-L4 and C0-C7 (plus the derived DT3), and 0 summands are dropped
with A0.  Every rewrite is recorded as a proof.
"""
from __future__ import annotations

from typing import Callable

from ..syntax import (NIL, TAU, CMerge, Choice, LMerge, Nil, Par, Prefix,
                      Term, Var, make_sum, names, summands)
from .axioms import AxiomSystem, builtin_axioms
from .proof import Proof, ProofError, ProofTrace

Pf = Proof


def _is_head(h: Term) -> bool:
    if isinstance(h, Var):
        return True
    if isinstance(h, CMerge) and isinstance(h.left, Var):
        r = h.right
        return isinstance(r, Var) or (isinstance(r, Prefix) and r.act.visible and r.body is NIL)
    return False


def is_simple(t: Term) -> bool:
    if isinstance(t, Prefix):
        return is_normal_form(t.body)
    if isinstance(t, LMerge):
        return _is_head(t.left) and is_normal_form(t.right)
    return False


def is_normal_form(t: Term) -> bool:
    """Membership in the normal-form grammar N ::= 0 | S | N + N."""
    if isinstance(t, Nil):
        return True
    if isinstance(t, Choice):
        return is_normal_form(t.left) and is_normal_form(t.right)
    return is_simple(t)


class Normalizer:
    """Builds normalisation proofs over one axiom system (default E_RBB).

    The system must contain at least one visible name, which the derivation
    of DT3 uses."""

    def __init__(self, system: AxiomSystem | None = None):
        self.system = system or builtin_axioms("E_RBB", ("a",))
        if not self.system.alphabet:
            self.system = self.system.with_alphabet(["a"])
        self._nf: dict = {}
        self._par: dict = {}
        self._lm: dict = {}
        self._cm: dict = {}
        self._lemmas: dict = {}

    def ax(self, name: str, **sigma) -> Proof:
        return Pf.axiom(self.system, name, **sigma)

    # -- small lemmas ---------------------------------------------------
    def zero_par_left(self, u: Term) -> Proof:
        """0 || u = u."""
        key = ("zl", u)
        if key not in self._lemmas:
            self._lemmas[key] = Pf.chain(
                self.ax("P", x=NIL, y=u),
                Pf.cong(Choice, Pf.cong(Choice, self.ax("L0", x=u), self.ax("L3", x=u)),
                        self.ax("C0", x=u)),
                self.ax("A0", x=Choice(NIL, u)),
                self.ax("A0", x=u),
            )
        return self._lemmas[key]

    def zero_par_right(self, u: Term) -> Proof:
        """u || 0 = u (the derived law D4)."""
        key = ("zr", u)
        if key not in self._lemmas:
            self._lemmas[key] = Pf.chain(
                self.ax("P", x=u, y=NIL),
                Pf.cong(Choice, Pf.cong(Choice, self.ax("L3", x=u), self.ax("L0", x=u)),
                        Pf.chain(self.ax("C1", x=u, y=NIL), self.ax("C0", x=u))),
                self.ax("A0", x=Choice(u, NIL)),
                self.ax("A0", x=u),
            )
        return self._lemmas[key]

    def tau_comm_zero(self, x: Term, y: Term) -> Proof:
        """tau.x | y = 0 (the derived law DT3), via tau.0 = a.0 | ~a.0."""
        key = ("dt3", x, y)
        if key in self._lemmas:
            return self._lemmas[key]
        a = next(act for act in self._acts() if act.visible)
        ab = a.complement()
        a0, ab0, t0 = Prefix(a, NIL), Prefix(ab, NIL), Prefix(TAU, NIL)
        # tau.x = tau.0 |> x
        tau_split = Pf.chain(self.ax("L1[tau]", x=NIL, y=x),
                             Pf.prefix(TAU, self.zero_par_left(x))).reverse()
        # tau.0 = a.0 | ~a.0
        tau_comm = Pf.chain(self.ax(f"C4[{a},{ab}]", x=NIL, y=NIL),
                            Pf.prefix(TAU, self.zero_par_left(NIL))).reverse()
        inner = Pf.chain(Pf.cong(CMerge, tau_comm, Pf.refl(y)),
                         self.ax("C7", x=a0, y=ab0, z=y))       # tau.0 | y = 0
        proof = Pf.chain(
            Pf.cong(CMerge, tau_split, Pf.refl(y)),            # (tau.0 |> x) | y
            self.ax("C6", x=t0, y=x, z=y),                      # (tau.0 | y) |> x
            Pf.cong(LMerge, inner, Pf.refl(x)),                 # 0 |> x
            self.ax("L0", x=x),
        )
        self._lemmas[key] = proof
        return proof

    def tau_absorb(self, mu, x: Term) -> Proof:
        """mu.tau.x = mu.x (the derived law DT1), a TB instance with y := 0."""
        key = ("dt1", mu, x)
        if key not in self._lemmas:
            x0 = Choice(x, NIL)
            self._lemmas[key] = Pf.chain(
                Pf.prefix(mu, Pf.prefix(TAU, self.ax("A0'", x=x))),
                Pf.prefix(mu, self.ax("A0'", x=Prefix(TAU, x0))),
                self.ax(f"TB[{mu}]", x=x, y=NIL),
                Pf.prefix(mu, self.ax("A0", x=x)),
            )
        return self._lemmas[key]

    def prefix_split(self, a, m: Term) -> Proof:
        """a.m = a.0 |> m."""
        return Pf.chain(self.ax(f"L1[{a}]", x=NIL, y=m),
                        Pf.prefix(a, self.zero_par_left(m))).reverse()

    def _acts(self):
        from ..syntax import alphabet_actions
        return alphabet_actions(self.system.alphabet)

    # -- sums -----------------------------------------------------------
    def drop_zeros(self, t: Term) -> Proof:
        """t = t with 0 summands removed (A0), AC-flattened."""
        parts = summands(t)
        zeros = sum(1 for s in parts if s is NIL)
        if zeros == 0 or len(parts) == 1:
            return Pf.refl(t)
        rest = [s for s in parts if s is not NIL]
        steps = []
        for k in range(zeros, 0, -1):
            body = rest + [NIL] * (k - 1)
            if not body:
                break
            steps.append(self.ax("A0", x=make_sum(body)))
        return Pf.chain(Pf.refl(t), *steps) if steps else Pf.refl(t)

    def map_sum(self, p: Proof, f: Callable[[Term], Proof]) -> Proof:
        """Given p: X = S1 + ... + Sk, prove X = N1 + ... + Nk with Si = Ni
        by f, dropping 0 summands."""
        parts = summands(p.rhs)
        q = Pf.sum([f(s) for s in parts])
        return Pf.chain(p, q, self.drop_zeros(q.rhs))

    # -- normalisation --------------------------------------------------
    def nf(self, t: Term) -> Proof:
        """Proof of t = N with N a normal form."""
        hit = self._nf.get(t)
        if hit is not None:
            return hit
        if isinstance(t, Nil):
            p = Pf.refl(t)
        elif isinstance(t, Var):
            p = self.ax("L3'", x=t)
        elif isinstance(t, Prefix):
            p = Pf.prefix(t.act, self.nf(t.body))
        elif isinstance(t, Choice):
            q = Pf.sum([self.nf(s) for s in summands(t)])
            p = Pf.chain(q, self.drop_zeros(q.rhs))
        else:
            pl, pr = self.nf(t.left), self.nf(t.right)
            head = Pf.cong(type(t), pl, pr)
            if isinstance(t, Par):
                p = Pf.chain(head, self.par(pl.rhs, pr.rhs))
            elif isinstance(t, LMerge):
                p = Pf.chain(head, self.lm(pl.rhs, pr.rhs))
            else:
                p = Pf.chain(head, self.cm(pl.rhs, pr.rhs))
        self._nf[t] = p
        return p

    def par(self, t: Term, u: Term) -> Proof:
        """t || u = N for normal forms t, u."""
        key = (t, u)
        hit = self._par.get(key)
        if hit is not None:
            return hit
        if t is NIL:
            p = self.zero_par_left(u)
        elif u is NIL:
            p = self.zero_par_right(t)
        else:
            expand = self.ax("P", x=t, y=u)
            q = Pf.cong(Choice, Pf.cong(Choice, self.lm(t, u), self.lm(u, t)), self.cm(t, u))
            p = Pf.chain(expand, q, self.drop_zeros(q.rhs))
        self._par[key] = p
        return p

    def lm(self, t: Term, u: Term) -> Proof:
        """t |> u = N for normal forms t, u."""
        key = (t, u)
        hit = self._lm.get(key)
        if hit is not None:
            return hit
        if t is NIL:
            p = self.ax("L0", x=u)
        else:
            p = self.map_sum(self._dist_lm(t, u), lambda s: self._lm_simple(s.left, u))
        self._lm[key] = p
        return p

    def _dist_lm(self, t: Term, u: Term) -> Proof:
        if isinstance(t, Choice):
            return Pf.chain(self.ax("L4", x=t.left, y=t.right, z=u),
                            Pf.cong(Choice, self._dist_lm(t.left, u), self._dist_lm(t.right, u)))
        return Pf.refl(LMerge(t, u))

    def _lm_simple(self, s: Term, u: Term) -> Proof:
        if u is NIL:
            return self.ax("L3", x=s)
        if isinstance(s, Prefix):
            return Pf.chain(self.ax(f"L1[{s.act}]", x=s.body, y=u),
                            Pf.prefix(s.act, self.par(s.body, u)))
        if isinstance(s, LMerge):
            h, n = s.left, s.right
            return Pf.chain(self.ax("L2", x=h, y=n, z=u),
                            Pf.cong(LMerge, Pf.refl(h), self.par(n, u)))
        raise ProofError(f"not a simple normal form: {s}")

    def cm(self, t: Term, u: Term) -> Proof:
        """t | u = N for normal forms t, u."""
        key = (t, u)
        hit = self._cm.get(key)
        if hit is not None:
            return hit
        if t is NIL:
            p = self.ax("C0", x=u)
        elif u is NIL:
            p = Pf.chain(self.ax("C1", x=t, y=NIL), self.ax("C0", x=t))
        else:
            p = self.map_sum(self._dist_cm_left(t, u),
                             lambda s: self.map_sum(self._dist_cm_right(s.left, u),
                                                    lambda r: self._cm_simple(r.left, r.right)))
        self._cm[key] = p
        return p

    def _dist_cm_left(self, t: Term, u: Term) -> Proof:
        if isinstance(t, Choice):
            return Pf.chain(self.ax("C3", x=t.left, y=t.right, z=u),
                            Pf.cong(Choice, self._dist_cm_left(t.left, u),
                                    self._dist_cm_left(t.right, u)))
        return Pf.refl(CMerge(t, u))

    def _dist_cm_right(self, s: Term, u: Term) -> Proof:
        if isinstance(u, Choice):
            return Pf.chain(self.ax("C1", x=s, y=u),
                            self.ax("C3", x=u.left, y=u.right, z=s),
                            Pf.cong(Choice,
                                    Pf.chain(self.ax("C1", x=u.left, y=s),
                                             self._dist_cm_right(s, u.left)),
                                    Pf.chain(self.ax("C1", x=u.right, y=s),
                                             self._dist_cm_right(s, u.right))))
        return Pf.refl(CMerge(s, u))

    def _cm_simple(self, s: Term, r: Term) -> Proof:
        """s | r = N for simple normal forms s, r."""
        if isinstance(s, Prefix):
            if s.act.is_tau:
                return self.tau_comm_zero(s.body, r)
            if isinstance(r, Prefix):
                if r.act.is_tau:
                    return Pf.chain(self.ax("C1", x=s, y=r), self.tau_comm_zero(r.body, s))
                if r.act == s.act.complement():
                    return Pf.chain(self.ax(f"C4[{s.act},{r.act}]", x=s.body, y=r.body),
                                    Pf.prefix(TAU, self.par(s.body, r.body)))
                return self.ax(f"C5[{s.act},{r.act}]", x=s.body, y=r.body)
            return Pf.chain(self.ax("C1", x=s, y=r), self._cm_simple(r, s))
        if not isinstance(s, LMerge):
            raise ProofError(f"not a simple normal form: {s}")
        h, n = s.left, s.right
        if isinstance(h, CMerge):
            # ((x|_) |> n) | r = ((x|_) | r) |> n = 0 |> n = 0
            return Pf.chain(self.ax("C6", x=h, y=n, z=r),
                            Pf.cong(LMerge, self.ax("C7", x=h.left, y=h.right, z=r), Pf.refl(n)),
                            self.ax("L0", x=n))
        head = self._var_comm(h, r)
        tail = Pf.chain(self.ax("C6", x=h, y=n, z=r), Pf.cong(LMerge, head, Pf.refl(n)))
        res = head.rhs
        if res is NIL:
            return Pf.chain(tail, self.ax("L0", x=n))
        h2, m = res.left, res.right
        return Pf.chain(tail, self.ax("L2", x=h2, y=m, z=n),
                        Pf.cong(LMerge, Pf.refl(h2), self.par(m, n)))

    def _var_comm(self, x: Term, r: Term) -> Proof:
        """x | r for a variable x and a simple normal form r; the result is 0
        or a merge summand (x|alpha.0) |> m or (x|y) |> m."""
        if isinstance(r, Prefix):
            if r.act.is_tau:
                return Pf.chain(self.ax("C1", x=x, y=r), self.tau_comm_zero(r.body, x))
            a0 = Prefix(r.act, NIL)
            m = r.body
            return Pf.chain(
                Pf.cong(CMerge, Pf.refl(x), self.prefix_split(r.act, m)),
                self.ax("C1", x=x, y=LMerge(a0, m)),
                self.ax("C6", x=a0, y=m, z=x),
                Pf.cong(LMerge, self.ax("C1", x=a0, y=x), Pf.refl(m)),
            )
        h, m = r.left, r.right
        if isinstance(h, Var):
            return Pf.chain(self.ax("C1", x=x, y=r), self.ax("C6", x=h, y=m, z=x),
                            Pf.cong(LMerge, self.ax("C1", x=h, y=x), Pf.refl(m)))
        return Pf.chain(self.ax("C1", x=x, y=r), self.ax("C6", x=h, y=m, z=x),
                        Pf.cong(LMerge, self.ax("C7", x=h.left, y=h.right, z=x), Pf.refl(m)),
                        self.ax("L0", x=m))


def normalize(t: Term, system: AxiomSystem | None = None) -> tuple[Term, ProofTrace]:
    """Rewrite t to a normal form N and return N with a trace of t = N."""
    if system is None:
        system = builtin_axioms("E_RBB", names(t) or {"a"})
    else:
        system = system.with_alphabet(names(t))
    proof = Normalizer(system).nf(t)
    from ..syntax import Equation
    return proof.rhs, ProofTrace.from_proof(proof, Equation(t, proof.rhs))
