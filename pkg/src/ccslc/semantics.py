"""Operational semantics of closed terms and open-term configurations.

One moves function serves both: on a closed term it yields only plain action
labels, and on open terms variables fire trigger labels ``(x):mu`` and become
indexed variables ``x_mu``.  Configuration-level parallel composition behaves
exactly like the term-level one (interleaving plus communication), which keeps
the open semantics in step with every closed instance.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .syntax import (TAU, Action, Choice, CMerge, DomainError, IVar,
                     LMerge, Nil, Node, Prefix, Substitution, Term, Var,
                     ac_canon, ac_equal, alphabet_actions, apply_substitution,
                     indexed_variables, names, par_of, variables)

log = logging.getLogger(__name__)

DEFAULT_STATE_CAP = 200_000


class ResourceError(RuntimeError):
    """A configured resource bound (state count, search size) was exceeded."""


@dataclass(frozen=True)
class Label:
    """Transition label of the configuration LTS.

    kind is one of ``act`` (plain action), ``trig`` (variable trigger with a
    plain action), ``synch`` (trigger synchronised with a prefix), ``comm``
    (two triggers synchronised) or ``ivar`` (indexed-variable self-loop).
    """

    kind: str
    act: Action | None = None
    x: str | None = None
    y: str | None = None

    @property
    def silent(self) -> bool:
        return self.kind == "act" and self.act.is_tau

    def __str__(self) -> str:
        if self.kind == "act":
            return str(self.act)
        if self.kind == "trig":
            return f"({self.x}):{self.act}"
        if self.kind == "synch":
            return f"({self.x}):{self.act},tau"
        if self.kind == "comm":
            return f"({self.x},{self.y}):tau"
        return f"{self.x}@{self.act}"

    def sort_key(self) -> tuple:
        return (self.kind, self.act.sort_key() if self.act else (), self.x or "", self.y or "")


@lru_cache(maxsize=None)
def act_label(a: Action) -> Label:
    return Label("act", a)


TAU_LABEL = act_label(TAU)


def trig_label(x: str, a: Action) -> Label:
    return Label("trig", a, x)


def synch_label(x: str, a: Action) -> Label:
    if not a.visible:
        raise DomainError("synchronised triggers need a visible action")
    return Label("synch", a, x)


def comm_label(x: str, y: str) -> Label:
    x, y = sorted((x, y))
    return Label("comm", None, x, y)


def ivar_label(x: str, a: Action) -> Label:
    return Label("ivar", a, x)


def _communications(left, right):
    """All synchronisations between a move of the left and a move of the right."""
    out = []
    for l1, t1 in left:
        if l1.kind not in ("act", "trig") or not l1.act.visible:
            continue
        want = l1.act.complement()
        for l2, t2 in right:
            if l2.kind not in ("act", "trig") or l2.act != want:
                continue
            if l1.kind == "act" and l2.kind == "act":
                lab = TAU_LABEL
            elif l1.kind == "trig" and l2.kind == "act":
                lab = synch_label(l1.x, l1.act)
            elif l1.kind == "act":
                lab = synch_label(l2.x, l2.act)
            else:
                lab = comm_label(l1.x, l2.x)
            out.append((lab, par_of(t1, t2)))
    return out


@lru_cache(maxsize=1 << 18)
def _moves(n: Node, acts: tuple) -> tuple:
    if isinstance(n, Nil):
        return ()
    if isinstance(n, Prefix):
        return ((act_label(n.act), n.body),)
    if isinstance(n, Var):
        return tuple((trig_label(n.name, a), IVar(n.name, a)) for a in acts)
    if isinstance(n, IVar):
        return ((ivar_label(n.name, n.act), n),)
    if isinstance(n, Choice):
        return _moves(n.left, acts) + _moves(n.right, acts)
    left = _moves(n.left, acts)
    if isinstance(n, LMerge):
        return tuple((lab, par_of(t, n.right)) for lab, t in left)
    right = _moves(n.right, acts)
    if isinstance(n, CMerge):
        return tuple(_communications(left, right))
    out = [(lab, par_of(t, n.right)) for lab, t in left]
    out += [(lab, par_of(n.left, t)) for lab, t in right]
    out += _communications(left, right)
    return tuple(out)


def _dedupe(pairs: Iterable) -> list:
    seen = set()
    out = []
    for p in pairs:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def step_closed(p: Term) -> list[tuple[Action, Term]]:
    """Transitions of a closed term, as (action, target) pairs."""
    if not isinstance(p, Term) or not p.closed:
        raise DomainError("step_closed needs a closed term")
    return _dedupe((lab.act, t) for lab, t in _moves(p, ()))


def resolve_alphabet(alphabet: Iterable[str] | None, *nodes: Node) -> tuple[str, ...]:
    """The declared names plus every name occurring in the given nodes; if
    variables occur and no name is known, a single name ``a`` is used so that
    communication between variables stays observable."""
    out = set(alphabet or ())
    for n in nodes:
        out |= names(n)
    if not out and any(not n.closed for n in nodes):
        out.add("a")
    return tuple(sorted(out))


def _acts(alphabet: Sequence[str]) -> tuple:
    return tuple(alphabet_actions(alphabet))


def step_config(c: Node, alphabet: Iterable[str] | None = None) -> list[tuple[Label, Node]]:
    """Transitions of a configuration over ``alphabet`` (closed under complement)."""
    acts = _acts(resolve_alphabet(alphabet, c))
    return _dedupe(_moves(c, acts))


def init(p: Term) -> set[Action]:
    return {a for a, _ in step_closed(p)}


# ---------------------------------------------------------------------------
# Finite LTSs

class Lts:
    """A finite LTS over canonical configurations; may have several roots."""

    def __init__(self, states, succ, roots, alphabet):
        self.states: list[Node] = states
        self.succ: list[list[tuple[Label, int]]] = succ
        self.roots: list[int] = roots
        self.alphabet: tuple[str, ...] = alphabet

    @property
    def root(self) -> int:
        return self.roots[0]

    @property
    def edges(self) -> list[tuple[int, Label, int]]:
        return [(s, lab, t) for s, out in enumerate(self.succ) for lab, t in out]

    def __len__(self):
        return len(self.states)

    def epsilon_closure(self, s: int) -> set[int]:
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for lab, v in self.succ[u]:
                if lab.silent and v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    def reachable(self, s: int) -> set[int]:
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for _, v in self.succ[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    def silent_postorder(self) -> list[int]:
        """States ordered so that every tau-successor comes before its source.
        Requires the tau-graph to be acyclic (it always is here)."""
        order: list[int] = []
        mark = [0] * len(self.states)  # 0 new, 1 active, 2 done
        for start in range(len(self.states)):
            if mark[start]:
                continue
            stack = [(start, iter(self.succ[start]))]
            mark[start] = 1
            while stack:
                u, it = stack[-1]
                advanced = False
                for lab, v in it:
                    if not lab.silent:
                        continue
                    if mark[v] == 1:
                        raise DomainError("tau-cycle in LTS")
                    if mark[v] == 0:
                        mark[v] = 1
                        stack.append((v, iter(self.succ[v])))
                        advanced = True
                        break
                if not advanced:
                    mark[u] = 2
                    order.append(u)
                    stack.pop()
        return order

    # exports
    def to_records(self) -> str:
        from .parser import pretty_print
        lines = [f"root {r}" for r in self.roots]
        for i, s in enumerate(self.states):
            lines.append(f"state {i} {pretty_print(s)}")
        for s, lab, t in self.edges:
            lines.append(f"edge {s} {lab} {t}")
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        from .parser import pretty_print

        def q(s: str) -> str:
            return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'

        lines = ["digraph lts {", "  rankdir=LR;", "  node [shape=box];"]
        for i, s in enumerate(self.states):
            shape = ", peripheries=2" if i in self.roots else ""
            lines.append(f"  s{i} [label={q(pretty_print(s))}{shape}];")
        for s, lab, t in self.edges:
            lines.append(f"  s{s} -> s{t} [label={q(str(lab))}];")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        from .parser import pretty_print
        return {
            "roots": self.roots,
            "states": [pretty_print(s) for s in self.states],
            "edges": [[s, str(lab), t] for s, lab, t in self.edges],
        }


def build_lts_many(roots: Sequence[Node], alphabet: Iterable[str] | None = None,
                   cap: int = DEFAULT_STATE_CAP) -> Lts:
    """Materialise the reachable states of all roots in one shared LTS.
    States are merged modulo AC of + and ||."""
    alpha = resolve_alphabet(alphabet, *roots)
    acts = _acts(alpha)
    index: dict[Node, int] = {}
    states: list[Node] = []
    succ: list[list] = []
    queue: deque[int] = deque()

    def visit(c: Node) -> int:
        c = ac_canon(c)
        i = index.get(c)
        if i is None:
            if len(states) >= cap:
                raise ResourceError(f"state cap of {cap} exceeded")
            i = len(states)
            index[c] = i
            states.append(c)
            succ.append(None)
            queue.append(i)
        return i

    root_ids = [visit(r) for r in roots]
    while queue:
        i = queue.popleft()
        out = []
        seen = set()
        for lab, t in _moves(states[i], acts):
            j = visit(t)
            if (lab, j) not in seen:
                seen.add((lab, j))
                out.append((lab, j))
        succ[i] = out
    return Lts(states, succ, root_ids, alpha)


def build_lts(c: Node, alphabet: Iterable[str] | None = None,
              cap: int = DEFAULT_STATE_CAP) -> Lts:
    return build_lts_many([c], alphabet, cap)


def epsilon_closure(lts: Lts, s: int) -> set[int]:
    return lts.epsilon_closure(s)


# ---------------------------------------------------------------------------
# Explaining closed transitions by open ones

@dataclass(frozen=True)
class Explanation:
    """One way a transition of sigma(t) arises from a transition of t.

    ``kind`` is ``term`` (t moves by itself), ``var`` (a variable fires),
    ``synch`` (a variable synchronises with a prefix of t) or ``pair`` (two
    variables synchronise).  ``update`` maps the new indexed variables of
    ``config`` to the derivatives of their substituted processes.
    """

    kind: str
    label: Label
    config: Node
    update: tuple = ()

    def __str__(self):
        from .parser import pretty_print
        upd = ", ".join(f"{x}@{a} := {pretty_print(q)}" for (x, a), q in self.update)
        return f"{self.kind}: -{self.label}-> {pretty_print(self.config)}" + (f" [{upd}]" if upd else "")


def _closed_alphabet(t: Term, sigma) -> tuple[str, ...]:
    extra = [v for v in sigma.values()]
    return resolve_alphabet((), t, *extra)


def _instances(t: Term, sigma: Substitution, alpha):
    """Yield (explanation, action, closed target) for every way a transition
    of t combines with transitions of the substituted processes."""
    for lab, c in step_config(t, alpha):
        if lab.kind == "act":
            yield Explanation("term", lab, c), lab.act, apply_substitution(sigma, c)
            continue
        ivs = sorted(indexed_variables(c), key=lambda k: (k[0], k[1].sort_key()))
        choices = []
        for x, a in ivs:
            img = sigma.get(x, Var(x))
            if not img.closed:
                raise DomainError(f"substitution is not closed on ${x}")
            choices.append([((x, a), q) for b, q in step_closed(img) if b == a])
        kind = {"trig": "var", "synch": "synch", "comm": "pair"}[lab.kind]
        mu = lab.act if lab.kind == "trig" else TAU
        for combo in product(*choices):
            s2 = sigma.updated(dict(combo))
            yield Explanation(kind, lab, c, tuple(combo)), mu, apply_substitution(s2, c)


def instantiate_transitions(t: Term, sigma) -> set[tuple[Action, Node]]:
    """Closed transitions obtained by pushing every open transition of t
    through sigma (targets in AC-canonical form)."""
    sigma = sigma if isinstance(sigma, Substitution) else Substitution(sigma)
    alpha = _closed_alphabet(t, sigma)
    return {(mu, ac_canon(p)) for _, mu, p in _instances(t, sigma, alpha)}


def explain_transition(t: Term, sigma, mu: Action, p: Term) -> list[Explanation]:
    """All derivation cases of the closed transition sigma(t) -mu-> p."""
    sigma = sigma if isinstance(sigma, Substitution) else Substitution(sigma)
    missing = variables(t) - {k for k in sigma if isinstance(k, str)}
    if missing or not sigma.closed:
        raise DomainError("explain_transition needs a closed substitution covering t")
    closed = apply_substitution(sigma, t)
    if not any(a == mu and ac_equal(q, p) for a, q in step_closed(closed)):
        raise DomainError("not a transition of the instantiated term")
    alpha = _closed_alphabet(t, sigma)
    out = [e for e, a, q in _instances(t, sigma, alpha) if a == mu and ac_equal(q, p)]
    return _dedupe(out)
