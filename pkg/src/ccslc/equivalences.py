"""Strong, branching and rooted branching bisimilarity, plus depth measures.

Two deciders implement the same contract.  The default one is signature
refinement: since our LTSs have no tau-cycles, the branching signature of a
state can be computed in one pass over a tau-postorder.  The other is the
textbook greatest fixpoint over state pairs, kept as an independent oracle.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import random
from itertools import product

from .generate import a_power, random_term
from .semantics import Label, Lts, build_lts_many, resolve_alphabet, step_closed
from .syntax import (TAU, Action, Choice, DomainError, Nil, Node, Par, Prefix,
                     Substitution, Term, apply_substitution, indexed_variables,
                     variables)

log = logging.getLogger(__name__)

RELATIONS = ("strong", "bb", "rbb")


def partition(lts: Lts, branching: bool = True) -> list[int]:
    """Block index per state for the coarsest (branching) bisimulation."""
    n = len(lts.states)
    lab_ids: dict[Label, int] = {}
    succ = []
    for out in lts.succ:
        row = []
        for lab, t in out:
            lid = lab_ids.setdefault(lab, len(lab_ids))
            row.append((lid, t, branching and lab.silent))
        succ.append(row)
    order = lts.silent_postorder() if branching else list(range(n))
    block = [0] * n
    count = 1
    while True:
        sigs: list = [None] * n
        for s in order:
            b = block[s]
            sig = set()
            for lid, t, silent in succ[s]:
                if silent and block[t] == b:
                    sig |= sigs[t]
                else:
                    sig.add((lid, block[t]))
            sigs[s] = frozenset(sig)
        ids: dict = {}
        new = [ids.setdefault((block[s], sigs[s]), len(ids)) for s in range(n)]
        if len(ids) == count:
            return new
        block, count = new, len(ids)


def naive_branching_relation(lts: Lts) -> set[tuple[int, int]]:
    """Largest branching bisimulation, computed literally from the definition
    by deleting violating pairs until nothing changes.  Quadratic; for tests."""
    n = len(lts.states)
    eps = [lts.epsilon_closure(s) for s in range(n)]
    rel = {(p, q) for p in range(n) for q in range(n)}

    def simulated(p, q) -> bool:
        for lab, p1 in lts.succ[p]:
            if lab.silent and (p1, q) in rel:
                continue
            ok = False
            for q2 in eps[q]:
                if (p, q2) not in rel:
                    continue
                if any(l2 == lab and (p1, q1) in rel for l2, q1 in lts.succ[q2]):
                    ok = True
                    break
            if not ok:
                return False
        return True

    changed = True
    while changed:
        changed = False
        for p, q in sorted(rel):
            if (p, q) in rel and not (simulated(p, q) and simulated(q, p)):
                rel.discard((p, q))
                rel.discard((q, p))
                changed = True
    return rel


@dataclass
class Verdict:
    """Outcome of an equivalence query; ``witness`` explains a negative answer."""

    result: bool
    relation: str
    witness: str | None = None

    def __bool__(self):
        return self.result


def _root_moves(lts: Lts, root: int, block: list[int]) -> dict:
    out: dict = {}
    for lab, t in lts.succ[root]:
        out.setdefault((lab, block[t]), t)
    return out


def _signature(lts: Lts, root: int, block: list[int]) -> dict:
    """Branching signature of root: moves reachable through inert tau steps."""
    out: dict = {}
    seen = {root}
    stack = [root]
    b = block[root]
    while stack:
        s = stack.pop()
        for lab, t in lts.succ[s]:
            if lab.silent and block[t] == b:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
            else:
                out.setdefault((lab, block[t]), (s, t))
    return out


def _describe_gap(lts: Lts, side: int, other: int, moves: dict, other_moves: dict,
                  names=("left", "right")) -> str | None:
    from .parser import pretty_print
    for key, tgt in moves.items():
        if key not in other_moves:
            src, t = tgt if isinstance(tgt, tuple) else (lts.roots[side], tgt)
            return (f"{names[side]} side: {pretty_print(lts.states[src])} -{key[0]}-> "
                    f"{pretty_print(lts.states[t])} has no match on the {names[other]} side")
    return None


def compare(c1: Node, c2: Node, relation: str = "bb",
            alphabet: Iterable[str] | None = None, method: str = "refine") -> Verdict:
    """Decide ``c1 ~ c2`` for relation in {strong, bb, rbb}."""
    if relation not in RELATIONS:
        raise DomainError(f"unknown relation {relation!r}")
    lts = build_lts_many([c1, c2], alphabet)
    r1, r2 = lts.roots
    if method == "naive" and relation != "strong":
        rel = naive_branching_relation(lts)
        n = len(lts.states)
        block = [min(q for q in range(n) if (p, q) in rel) for p in range(n)]
    elif method in ("refine", "naive"):
        block = partition(lts, branching=(relation != "strong"))
    else:
        raise DomainError(f"unknown method {method!r}")
    if relation == "rbb":
        m1, m2 = _root_moves(lts, r1, block), _root_moves(lts, r2, block)
        if m1.keys() == m2.keys():
            return Verdict(True, relation)
        w = _describe_gap(lts, 0, 1, m1, m2) or _describe_gap(lts, 1, 0, m2, m1)
        return Verdict(False, relation, w)
    if block[r1] == block[r2]:
        return Verdict(True, relation)
    if relation == "strong":
        m1, m2 = _root_moves(lts, r1, block), _root_moves(lts, r2, block)
    else:
        m1, m2 = _signature(lts, r1, block), _signature(lts, r2, block)
    w = _describe_gap(lts, 0, 1, m1, m2) or _describe_gap(lts, 1, 0, m2, m1)
    return Verdict(False, relation, w or "the roots fall in different classes")


def strong_bisim(c1: Node, c2: Node, alphabet=None) -> bool:
    return compare(c1, c2, "strong", alphabet).result


def branching_bisim(c1: Node, c2: Node, alphabet=None) -> bool:
    return compare(c1, c2, "bb", alphabet).result


def rooted_branching_bisim(c1: Node, c2: Node, alphabet=None) -> bool:
    return compare(c1, c2, "rbb", alphabet).result


# ---------------------------------------------------------------------------
# Canonical branching classes of closed terms

_CLASS_IDS: dict[frozenset, int] = {}


def bb_class_ids(lts: Lts) -> list[int]:
    """Globally comparable identifiers of the branching classes of the states
    of a closed-term LTS: two states (of any LTSs) get the same id iff they
    are branching bisimilar."""
    block = partition(lts, branching=True)
    nblocks = max(block) + 1 if block else 0
    members: list[list[int]] = [[] for _ in range(nblocks)]
    for s, b in enumerate(block):
        members[b].append(s)
    # In the quotient without inert steps branching bisimilarity collapses to
    # strong bisimilarity, so a hereditary set of (label, class) pairs is a
    # canonical name.  The quotient is acyclic for closed terms.
    ids: list[int | None] = [None] * nblocks

    def name(b: int) -> int:
        if ids[b] is not None:
            return ids[b]
        stack = [(b, False)]
        while stack:
            cur, ready = stack.pop()
            if ids[cur] is not None:
                continue
            targets = {block[t] for s in members[cur] for lab, t in lts.succ[s]
                       if not (lab.silent and block[t] == cur)}
            pending = [t for t in targets if ids[t] is None]
            if pending and not ready:
                stack.append((cur, True))
                stack.extend((t, False) for t in pending)
                continue
            key = frozenset((str(lab), ids[block[t]]) for s in members[cur]
                            for lab, t in lts.succ[s]
                            if not (lab.silent and block[t] == cur))
            ids[cur] = _CLASS_IDS.setdefault(key, len(_CLASS_IDS))
        return ids[b]

    return [name(block[s]) for s in range(len(lts.states))]


def bb_class(p: Term) -> int:
    """Canonical branching-bisimilarity class identifier of a closed term."""
    if not p.closed:
        raise DomainError("bb_class needs a closed term")
    return _bb_class_cached(p)


@lru_cache(maxsize=1 << 16)
def _bb_class_cached(p: Term) -> int:
    lts = build_lts_many([p])
    return bb_class_ids(lts)[lts.root]


# ---------------------------------------------------------------------------
# Depth

@lru_cache(maxsize=1 << 16)
def depth(p: Term) -> int:
    """Length of a longest trace of visible actions of a closed term.

    Structural for the CCS operators (tau does not count, a visible prefix
    adds one, choice takes the max, parallel adds); left and communication
    merge are unfolded through their transitions.
    """
    if not p.closed:
        raise DomainError("depth needs a closed term")
    if isinstance(p, Nil):
        return 0
    if isinstance(p, Prefix):
        return depth(p.body) + (0 if p.act.is_tau else 1)
    if isinstance(p, Choice):
        return max(depth(p.left), depth(p.right))
    if isinstance(p, Par):
        return depth(p.left) + depth(p.right)
    return max((depth(q) + (0 if a.is_tau else 1) for a, q in step_closed(p)), default=0)


def rdepth(p: Term) -> int:
    """Rooted depth: an initial tau counts as a step."""
    if not p.closed:
        raise DomainError("rdepth needs a closed term")
    return max((1 + depth(q) for _, q in step_closed(p)), default=0)


def lts_depths(lts: Lts) -> list[int]:
    """Longest visible trace from each state of an acyclic closed-term LTS."""
    n = len(lts.states)
    out = [-1] * n

    def visit(s):
        stack = [(s, False)]
        while stack:
            u, ready = stack.pop()
            if out[u] >= 0:
                continue
            todo = [t for _, t in lts.succ[u] if out[t] < 0]
            if todo and not ready:
                stack.append((u, True))
                stack.extend((t, False) for t in todo)
                continue
            out[u] = max((out[t] + (0 if lab.silent else 1) for lab, t in lts.succ[u]), default=0)

    for s in range(n):
        visit(s)
    return out


def init(p: Term) -> set:
    return {a for a, _ in step_closed(p)}


def has_tau_root(p: Term) -> bool:
    return TAU in init(p)


# ---------------------------------------------------------------------------
# Open terms against their closed instances

def witness_substitutions(c1: Node, c2: Node, alphabet: Iterable[str] | None = None) -> list:
    """Closed substitutions that separate c1 and c2 whenever the
    configuration-level relation fails.

    Plain and indexed variables are eliminated one at a time.  For the current pair, n is
    chosen so that alpha^n is not branching bisimilar to any derivative: open
    derivatives never are, closed ones are excluded by depth.  Then x goes
    to alpha^(n+2) and every x_mu to alpha^(n+1).  Every assignment of alpha
    in {a, ~a} per variable is tried, since a fixed choice can be absorbed
    by communication with a partner such as x | a.0.  A third choice,
    a^m + ~a^m, lets a variable synchronise with itself, as in x | x.
    """
    alpha = resolve_alphabet(alphabet, c1, c2)
    keys = _keys(c1, c2)
    if not keys:
        return [Substitution()]
    a = alpha[0] if alpha else "a"
    pos, neg = Action(a), Action(a, True)
    choices = ((pos,), (neg,), (pos, neg))

    def image(m: int, acts) -> Term:
        out = a_power(m, acts[0])
        for act in acts[1:]:
            out = Choice(out, a_power(m, act))
        return out

    out = []
    for picks in product(choices, repeat=len(keys)):
        cur1, cur2, sigma = c1, c2, {}
        for key, acts in zip(keys, picks):
            lts = build_lts_many([cur1, cur2], alpha)
            n = 1 + max((depth(s) for s in lts.states if s.closed), default=0)
            step = {key: image(n + 2 if isinstance(key, str) else n + 1, acts)}
            cur1, cur2 = apply_substitution(step, cur1), apply_substitution(step, cur2)
            sigma.update(step)
        out.append(Substitution(sigma))
    return out


def _keys(c1: Node, c2: Node) -> list:
    ivs = indexed_variables(c1) | indexed_variables(c2)
    return sorted(variables(c1) | variables(c2)) + sorted(ivs, key=lambda k: (k[0], k[1].sort_key()))


def closed_instances_related(c1: Node, c2: Node, relation: str = "bb",
                             alphabet: Iterable[str] | None = None, rng=None,
                             random_count: int = 20, **term_kw) -> Verdict:
    """Quantify over the witness family plus ``random_count`` random closed
    substitutions; the result should agree with ``compare``."""
    alpha = resolve_alphabet(alphabet, c1, c2)
    rng = rng or random.Random(0)
    keys = _keys(c1, c2)
    sigmas = witness_substitutions(c1, c2, alpha)
    if keys:
        kw = {"max_size": 6, "max_depth": 3, **term_kw}
        for _ in range(random_count):
            sigmas.append(Substitution({k: random_term(rng, names=alpha or ("a",), **kw) for k in keys}))
    for sigma in sigmas:
        v = compare(apply_substitution(sigma, c1), apply_substitution(sigma, c2), relation)
        if not v.result:
            return Verdict(False, relation, f"under {sigma!r}: {v.witness}")
    return Verdict(True, relation)
