"""Equational proofs: an in-memory builder, linear traces, a checker and a
line-oriented file format.

Rules: reflexivity, instances of axioms (or their symmetric counterparts),
transitivity, and congruence for every operator.  There is no general
symmetry rule; ``Proof.reverse`` rebuilds a proof backwards from reversed
axiom instances instead.  Joins in transitivity and the final conclusion are
compared modulo associativity/commutativity of ``+`` and ``||``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..syntax import (Action, CMerge, Choice, DomainError, Equation, LMerge,
                      Par, Prefix, Substitution, Term, ac_equal, action,
                      apply_substitution, variables)
from .axioms import AxiomSystem

# operator tokens for congruence steps
OPS = {"+": Choice, "||": Par, "|>": LMerge, "|": CMerge}
_OP_OF = {v: k for k, v in OPS.items()}


class ProofError(RuntimeError):
    """Raised when a proof is assembled from incompatible pieces."""


class Proof:
    """A proof node with a known conclusion ``lhs = rhs``.

    Nodes form a DAG; ``ProofTrace.from_proof`` linearises it."""

    __slots__ = ("kind", "lhs", "rhs", "args", "name", "sigma", "op", "act", "_rev")

    def __init__(self, kind, lhs, rhs, args=(), name=None, sigma=None, op=None, act=None):
        self.kind = kind
        self.lhs = lhs
        self.rhs = rhs
        self.args = tuple(args)
        self.name = name
        self.sigma = sigma
        self.op = op
        self.act = act
        self._rev = None

    @property
    def equation(self) -> Equation:
        return Equation(self.lhs, self.rhs)

    @property
    def is_refl(self) -> bool:
        return self.kind == "refl"

    # -- constructors ---------------------------------------------------
    @staticmethod
    def refl(t: Term) -> "Proof":
        return Proof("refl", t, t)

    @staticmethod
    def axiom(system: AxiomSystem, name: str, **sigma: Term) -> "Proof":
        eq = system.get(name)
        sub = Substitution(sigma)
        return Proof("axiom", apply_substitution(sub, eq.lhs), apply_substitution(sub, eq.rhs),
                     name=name, sigma=tuple(sorted(sigma.items())))

    @staticmethod
    def trans(p: "Proof", q: "Proof") -> "Proof":
        if not ac_equal(p.rhs, q.lhs):
            raise ProofError(f"cannot chain: {p.rhs} is not {q.lhs}")
        if p.is_refl:
            return q
        if q.is_refl:
            return p
        return Proof("trans", p.lhs, q.rhs, (p, q))

    @staticmethod
    def chain(*proofs: "Proof") -> "Proof":
        ps = [p for p in proofs if not p.is_refl] or list(proofs[:1])
        if not ps:
            raise ProofError("empty chain")
        # balanced nesting keeps the DAG shallow
        while len(ps) > 1:
            nxt = [Proof.trans(ps[i], ps[i + 1]) for i in range(0, len(ps) - 1, 2)]
            if len(ps) % 2:
                nxt.append(ps[-1])
            ps = nxt
        return ps[0]

    @staticmethod
    def prefix(mu: Action, p: "Proof") -> "Proof":
        if p.is_refl:
            return Proof.refl(Prefix(mu, p.lhs))
        return Proof("cong", Prefix(mu, p.lhs), Prefix(mu, p.rhs), (p,), op="pre", act=mu)

    @staticmethod
    def cong(cls, p: "Proof", q: "Proof") -> "Proof":
        if p.is_refl and q.is_refl:
            return Proof.refl(cls(p.lhs, q.lhs))
        return Proof("cong", cls(p.lhs, q.lhs), cls(p.rhs, q.rhs), (p, q), op=_OP_OF[cls])

    @staticmethod
    def sum(proofs: Sequence["Proof"]) -> "Proof":
        """Congruence over a left-nested sum of the given proofs."""
        if not proofs:
            raise ProofError("empty sum")
        acc = proofs[0]
        for p in proofs[1:]:
            acc = Proof.cong(Choice, acc, p)
        return acc

    def reverse(self) -> "Proof":
        """A proof of ``rhs = lhs`` built from reversed axiom instances."""
        if self._rev is not None:
            return self._rev
        k = self.kind
        if k == "refl":
            r = self
        elif k == "axiom":
            name = self.name[:-1] if self.name.endswith("'") else self.name + "'"
            r = Proof("axiom", self.rhs, self.lhs, name=name, sigma=self.sigma)
        elif k == "trans":
            p, q = self.args
            r = Proof("trans", self.rhs, self.lhs, (q.reverse(), p.reverse()))
        else:
            args = tuple(a.reverse() for a in self.args)
            r = Proof("cong", self.rhs, self.lhs, args, op=self.op, act=self.act)
        r._rev = self
        self._rev = r
        return r


# ---------------------------------------------------------------------------
# Linear traces

@dataclass(frozen=True)
class Step:
    """One trace step.  kind: refl | axiom | trans | cong | subst."""

    kind: str
    term: Term | None = None
    name: str | None = None
    sigma: tuple = ()
    refs: tuple = ()
    op: str | None = None
    act: Action | None = None


@dataclass
class ProofTrace:
    steps: list[Step]
    conclusion: Equation

    def __len__(self):
        return len(self.steps)

    @classmethod
    def from_proof(cls, proof: Proof, conclusion: Equation | None = None) -> "ProofTrace":
        index: dict[int, int] = {}
        steps: list[Step] = []
        stack = [(proof, False)]
        while stack:
            node, ready = stack.pop()
            if id(node) in index:
                continue
            if not ready and node.args:
                stack.append((node, True))
                stack.extend((a, False) for a in reversed(node.args) if id(a) not in index)
                continue
            refs = tuple(index[id(a)] for a in node.args)
            if node.kind == "refl":
                st = Step("refl", term=node.lhs)
            elif node.kind == "axiom":
                st = Step("axiom", name=node.name, sigma=node.sigma)
            elif node.kind == "trans":
                st = Step("trans", refs=refs)
            else:
                st = Step("cong", refs=refs, op=node.op, act=node.act)
            index[id(node)] = len(steps)
            steps.append(st)
        return cls(steps, conclusion or proof.equation)

    def uses(self) -> set[str]:
        return {s.name.rstrip("'") for s in self.steps if s.kind == "axiom"}


@dataclass
class CheckResult:
    valid: bool
    failed_step: int | None = None
    reason: str = ""
    equations: list = field(default_factory=list, repr=False)

    def __bool__(self):
        return self.valid


def _fail(i, reason, eqs):
    return CheckResult(False, i + 1 if i is not None else None, reason, eqs)


def check_proof(trace: ProofTrace, axioms: AxiomSystem) -> CheckResult:
    """Validate every step of a trace and its conclusion.  Step numbers in
    diagnostics are 1-based."""
    eqs: list[tuple[Term, Term]] = []
    for i, st in enumerate(trace.steps):
        if any(r < 0 or r >= i for r in st.refs):
            return _fail(i, "step refers to a later or missing step", eqs)
        if st.kind == "refl":
            eqs.append((st.term, st.term))
        elif st.kind == "axiom":
            if st.name not in axioms:
                return _fail(i, f"unknown axiom {st.name!r}", eqs)
            eq = axioms.get(st.name)
            allowed = variables(eq.lhs) | variables(eq.rhs)
            for v, img in st.sigma:
                if v not in allowed:
                    return _fail(i, f"variable ${v} does not occur in {st.name}", eqs)
                if not isinstance(img, Term):
                    return _fail(i, "substitution image is not a term", eqs)
            sub = Substitution(dict(st.sigma))
            eqs.append((apply_substitution(sub, eq.lhs), apply_substitution(sub, eq.rhs)))
        elif st.kind == "subst":
            return _fail(i, "substitution may only be applied to axioms", eqs)
        elif st.kind == "trans":
            if len(st.refs) != 2:
                return _fail(i, "transitivity needs two premises", eqs)
            (a, b), (c, d) = eqs[st.refs[0]], eqs[st.refs[1]]
            if not ac_equal(b, c):
                return _fail(i, "transitivity premises do not meet", eqs)
            eqs.append((a, d))
        elif st.kind == "cong":
            if st.op == "pre":
                if len(st.refs) != 1 or st.act is None:
                    return _fail(i, "prefix congruence needs one premise and an action", eqs)
                a, b = eqs[st.refs[0]]
                eqs.append((Prefix(st.act, a), Prefix(st.act, b)))
            elif st.op in OPS:
                if len(st.refs) != 2:
                    return _fail(i, f"congruence for {st.op} needs two premises", eqs)
                (a, b), (c, d) = eqs[st.refs[0]], eqs[st.refs[1]]
                cls = OPS[st.op]
                eqs.append((cls(a, c), cls(b, d)))
            else:
                return _fail(i, f"unknown operator {st.op!r}", eqs)
        else:
            return _fail(i, f"unknown rule {st.kind!r}", eqs)
        for side in eqs[-1]:
            if not isinstance(side, Term):
                return _fail(i, "step leaves the term language", eqs)
    if not eqs:
        return _fail(None, "empty trace", eqs)
    lhs, rhs = eqs[-1]
    c = trace.conclusion
    if not (ac_equal(lhs, c.lhs) and ac_equal(rhs, c.rhs)):
        return _fail(len(eqs) - 1, "last step does not prove the stated conclusion", eqs)
    return CheckResult(True, None, "ok", eqs)


# ---------------------------------------------------------------------------
# File format

def trace_to_text(trace: ProofTrace) -> str:
    from ..parser import pretty_print
    lines = []
    for k, st in enumerate(trace.steps, 1):
        if st.kind == "refl":
            body = f"REFL {pretty_print(st.term)}"
        elif st.kind in ("axiom", "subst"):
            binds = ", ".join(f"${v}:={pretty_print(t)}" for v, t in st.sigma)
            head = f"AXIOM {st.name}" if st.kind == "axiom" else f"SUBST {st.refs[0] + 1}"
            body = head + (f" WITH {binds}" if binds else "")
        elif st.kind == "trans":
            body = "TRANS " + " ".join(str(r + 1) for r in st.refs)
        else:
            op = f"pre:{st.act}" if st.op == "pre" else st.op
            body = f"CONG {op} " + " ".join(str(r + 1) for r in st.refs)
        lines.append(f"STEP {k} = {body}")
    lines.append(f"QED {pretty_print(trace.conclusion)}")
    return "\n".join(lines) + "\n"


class TraceFormatError(ValueError):
    pass


def _bindings(text: str) -> tuple:
    from ..parser import parse_term
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":=" not in part or not part.startswith("$"):
            raise TraceFormatError(f"bad binding {part!r}")
        v, t = part.split(":=", 1)
        out.append((v.strip()[1:], parse_term(t)))
    return tuple(sorted(out))


def parse_trace(text: str) -> ProofTrace:
    from ..parser import parse_equation, parse_term
    steps: list[Step] = []
    conclusion = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if line.startswith("QED "):
                conclusion = parse_equation(line[4:])
                continue
            if not line.startswith("STEP "):
                raise TraceFormatError("expected STEP or QED")
            head, body = line[5:].split("=", 1)
            k = int(head.strip())
            if k != len(steps) + 1:
                raise TraceFormatError(f"expected step {len(steps) + 1}, found {k}")
            body = body.strip()
            word, _, rest = body.partition(" ")
            if word == "REFL":
                steps.append(Step("refl", term=parse_term(rest)))
            elif word in ("AXIOM", "SUBST"):
                target, _, binds = rest.partition(" WITH ")
                sigma = _bindings(binds)
                if word == "AXIOM":
                    steps.append(Step("axiom", name=target.strip(), sigma=sigma))
                else:
                    steps.append(Step("subst", refs=(int(target) - 1,), sigma=sigma))
            elif word == "TRANS":
                steps.append(Step("trans", refs=tuple(int(x) - 1 for x in rest.split())))
            elif word == "CONG":
                parts = rest.split()
                op = parts[0]
                refs = tuple(int(x) - 1 for x in parts[1:])
                if op.startswith("pre:"):
                    steps.append(Step("cong", refs=refs, op="pre", act=action(op[4:])))
                else:
                    steps.append(Step("cong", refs=refs, op=op))
            else:
                raise TraceFormatError(f"unknown step kind {word!r}")
        except (ValueError, DomainError) as exc:
            raise TraceFormatError(f"line {lineno}: {exc}") from exc
    if conclusion is None:
        raise TraceFormatError("missing QED line")
    return ProofTrace(steps, conclusion)
