"""Parallel decomposition of closed processes modulo branching bisimilarity.

A process p with p ~ q || r can always take q and r to be (equivalent to)
derivatives of p: r can reach a deadlock r', and then q || r' ~ q is
reachable from q || r, hence p reaches a state equivalent to q.  The search
therefore only considers candidate factors whose branching class is the
class of some derivative of p.  Candidates are drawn from an enumerated
universe of small terms and, unless disabled, from the derivatives
themselves; with the latter the verdict is exact rather than bounded.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from .equivalences import bb_class, bb_class_ids, branching_bisim, depth, lts_depths
from .semantics import ResourceError, build_lts
from .syntax import (NIL, Action, Choice, DomainError, Par, Prefix, Term,
                     action, factors, make_par, strip_zeros)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class UniverseParams:
    alphabet: tuple[Action, ...]
    max_size: int = 8
    max_depth: int = 8

    def __post_init__(self):
        if self.max_size < 1:
            raise DomainError("max_size must be at least 1")
        acts = tuple(sorted({a if isinstance(a, Action) else action(a) for a in self.alphabet},
                            key=Action.sort_key))
        object.__setattr__(self, "alphabet", acts)

    @classmethod
    def over(cls, *acts: str, max_size: int = 8, max_depth: int = 8) -> "UniverseParams":
        return cls(tuple(action(a) for a in acts), max_size, max_depth)

    def to_dict(self) -> dict:
        return {"alphabet": [str(a) for a in self.alphabet], "max_size": self.max_size,
                "max_depth": self.max_depth}


@lru_cache(maxsize=8)
def _universe(alphabet: tuple, max_size: int) -> tuple[tuple[Term, ...], ...]:
    """Canonical 0-stripped closed CCS terms grouped by exact size."""
    by_size: list[list[Term]] = [[] for _ in range(max_size + 1)]
    by_size[1].append(NIL)
    for s in range(2, max_size + 1):
        out = by_size[s]
        for a in alphabet:
            for body in by_size[s - 1]:
                out.append(Prefix(a, body))
        for cls, kind in ((Choice, Choice), (Par, Par)):
            # elements: nonzero terms without cls at the head, in a fixed order
            pool = [t for k in range(2, s) for t in by_size[k] if not isinstance(t, kind)]
            sizes = [t.size for t in pool]
            out.extend(_multisets(pool, sizes, s, cls))
    return tuple(tuple(x) for x in by_size)


def _multisets(pool, sizes, total, cls):
    """All sums/products of >= 2 pool elements whose syntax size is total."""
    res = []

    def go(start, remaining, chosen):
        # remaining counts symbols still available for further elements
        if len(chosen) >= 2 and remaining == 0:
            parts = sorted(chosen, key=Term.sort_key)
            acc = parts[0]
            for p in parts[1:]:
                acc = cls(acc, p)
            res.append(acc)
            return
        for i in range(start, len(pool)):
            need = sizes[i] + (1 if chosen else 0)
            if need > remaining:
                continue
            chosen.append(pool[i])
            go(i, remaining - need, chosen)
            chosen.pop()

    go(0, total, [])
    return res


def enumerate_universe(u: UniverseParams) -> Iterator[Term]:
    """Every canonical, 0-stripped closed term within the bounds, once each,
    in order of increasing size."""
    for group in _universe(u.alphabet, u.max_size):
        for t in group:
            if depth(t) <= u.max_depth:
                yield t


@lru_cache(maxsize=1 << 16)
def _visible_actions(p: Term) -> frozenset:
    lts = build_lts(p)
    return frozenset(lab.act for _, lab, _ in lts.edges if not lab.silent)


@dataclass
class IndecompositionResult:
    """Outcome of the search for a split ``p ~ q || r``.

    ``exact`` is true when all derivative classes of p were candidates, so
    that a negative answer is a proof of indecomposability."""

    process: Term
    indecomposable: bool
    witness: tuple[Term, Term] | None
    bound: UniverseParams
    exact: bool
    candidates: int = 0

    @property
    def verdict(self) -> str:
        return "indecomposable_within_bound" if self.indecomposable else "decomposition"

    def to_dict(self) -> dict:
        from .parser import pretty_print
        d = {"process": pretty_print(self.process), "verdict": self.verdict,
             "exact": self.exact, "candidates": self.candidates, "bound": self.bound.to_dict()}
        if self.witness:
            d["factors"] = [pretty_print(x) for x in self.witness]
        return d


def is_indecomposable_bounded(p: Term, u: UniverseParams,
                              use_derivatives: bool = True) -> IndecompositionResult:
    """Search candidate pairs (q, r) with depth(q) + depth(r) = depth(p) and
    q || r ~ p."""
    if not p.closed:
        raise DomainError("decomposition needs a closed term")
    lts = build_lts(p)
    classes = bb_class_ids(lts)
    root_class = classes[lts.root]
    if branching_bisim(p, NIL):
        raise DomainError("0 has no decomposition")
    dp = depth(p)
    if dp < 2:
        return IndecompositionResult(p, True, None, u, True, 0)
    depths = lts_depths(lts)
    wanted: dict[int, int] = {}
    reps: dict[int, Term] = {}
    for s, c in enumerate(classes):
        if 1 <= depths[s] < dp:
            wanted[c] = depths[s]
            reps.setdefault(c, lts.states[s])
    allowed = _visible_actions(p)
    cands: dict[int, Term] = {}
    for q in enumerate_universe(u):
        d = depth(q)
        if not 1 <= d < dp or not _visible_actions(q) <= allowed:
            continue
        c = bb_class(q)
        if c in wanted and c not in cands:
            cands[c] = q
    if use_derivatives:
        for c, q in reps.items():
            cands.setdefault(c, strip_zeros(q))
    by_depth: dict[int, list[int]] = {}
    for c in cands:
        by_depth.setdefault(wanted[c], []).append(c)
    order = sorted(cands, key=lambda c: (cands[c].size, cands[c].sort_key()))
    rank = {c: i for i, c in enumerate(order)}
    for c1 in order:
        d1 = wanted[c1]
        for c2 in sorted(by_depth.get(dp - d1, ()), key=rank.get):
            if rank[c2] < rank[c1]:
                continue
            q, r = cands[c1], cands[c2]
            if bb_class(Par(q, r)) == root_class:
                return IndecompositionResult(p, False, (q, r), u, use_derivatives, len(cands))
    return IndecompositionResult(p, True, None, u, use_derivatives, len(cands))


@dataclass
class Factor:
    term: Term
    tag: str  # "indecomposable" or "unknown"


@dataclass
class FactorMultiset:
    process: Term
    factors: list[Factor] = field(default_factory=list)
    verified: bool = False

    def terms(self) -> list[Term]:
        return [f.term for f in self.factors]

    def classes(self) -> list[int]:
        return sorted(bb_class(t) for t in self.terms())

    def to_dict(self) -> dict:
        from .parser import pretty_print
        return {"process": pretty_print(self.process),
                "factors": [{"term": pretty_print(f.term), "tag": f.tag} for f in self.factors],
                "recomposition_verified": self.verified}


def decompose_bounded(p: Term, u: UniverseParams, max_splits: int = 64) -> FactorMultiset:
    """Split p into parallel factors until each is indecomposable (within
    the bound).  The recomposition is checked against p."""
    work = [f for f in factors(strip_zeros(p)) if not branching_bisim(f, NIL)]
    done: list[Factor] = []
    splits = 0
    while work:
        f = work.pop(0)
        if splits >= max_splits:
            done.append(Factor(f, "unknown"))
            continue
        try:
            res = is_indecomposable_bounded(f, u)
        except ResourceError:
            done.append(Factor(f, "unknown"))
            continue
        if res.indecomposable:
            done.append(Factor(f, "indecomposable"))
        else:
            splits += 1
            work[:0] = list(res.witness)
    fm = FactorMultiset(p, done)
    recomposed = make_par(fm.terms()) if done else NIL
    fm.verified = branching_bisim(recomposed, p)
    return fm


def check_cancellation(p: Term, q: Term, r: Term) -> bool:
    """The implication (p || r ~ q || r) => (p ~ q) for branching bisimilarity."""
    if not branching_bisim(Par(p, r), Par(q, r)):
        return True
    return branching_bisim(p, q)


def factor_classes_match(a: FactorMultiset, b: FactorMultiset) -> bool:
    return a.classes() == b.classes()
