"""Random terms, substitutions and sound rewrites for property testing.

Everything takes an explicit ``random.Random`` so that runs are reproducible
from a seed.
"""
from __future__ import annotations

import random
from typing import Iterable, Sequence

from .syntax import (NIL, Action, Choice, CMerge, IVar, LMerge, Nil, Node,
                     Par, Prefix, Substitution, Term, Var, alphabet_actions,
                     apply_substitution, par_of)

ALL_OPS = ("prefix", "choice", "par", "lmerge", "cmerge")
CCS_OPS = ("prefix", "choice", "par")
_BINARY = {"choice": Choice, "par": Par, "lmerge": LMerge, "cmerge": CMerge}


def random_term(rng: random.Random, max_size: int = 10, max_depth: int = 4,
                names: Sequence[str] = ("a", "b"), variables: Sequence[str] = (),
                ops: Sequence[str] = ALL_OPS, tau: bool = True,
                exact: bool = False, var_weight: float = 0.5) -> Term:
    """A random term with size <= max_size and prefix nesting <= max_depth."""
    acts = [a for a in alphabet_actions(names) if tau or a.visible]
    target = max_size if exact else rng.randint(1, max_size)

    def leaf():
        if variables and rng.random() < var_weight:
            return Var(rng.choice(variables))
        return NIL

    def go(budget: int, depth: int) -> Term:
        kinds = []
        if budget >= 2 and depth > 0 and "prefix" in ops:
            kinds += ["prefix"] * 3
        if budget >= 3:
            kinds += [k for k in ops if k != "prefix"]
        if not kinds:
            return leaf()
        kind = rng.choice(kinds)
        if kind == "prefix":
            return Prefix(rng.choice(acts), go(budget - 1, depth - 1))
        k = rng.randint(1, budget - 2)
        return _BINARY[kind](go(k, depth), go(budget - 1 - k, depth))

    return go(target, max_depth)


def random_closed_substitution(rng: random.Random, variables: Iterable[str],
                               **kw) -> Substitution:
    return Substitution({v: random_term(rng, **kw) for v in sorted(set(variables))})


def random_configuration(rng: random.Random, max_size: int = 8, max_depth: int = 3,
                         names: Sequence[str] = ("a",), variables: Sequence[str] = ("x", "y"),
                         ivars: int = 0) -> Node:
    """A random term composed in parallel with up to ``ivars`` indexed variables."""
    t = random_term(rng, max_size, max_depth, names, variables)
    acts = alphabet_actions(names)
    for _ in range(ivars):
        t = par_of(IVar(rng.choice(variables), rng.choice(acts)), t)
    return t


def a_power(k: int, a: Action = Action("a")) -> Term:
    t = NIL
    for _ in range(k):
        t = Prefix(a, t)
    return t


# ---------------------------------------------------------------------------
# Rewriting with sound equations

def match(pattern: Term, term: Term, sigma: dict | None = None) -> dict | None:
    """Syntactic first-order matching; repeated variables must agree."""
    sigma = dict(sigma or {})
    stack = [(pattern, term)]
    while stack:
        p, t = stack.pop()
        if isinstance(p, Var):
            bound = sigma.get(p.name)
            if bound is None:
                sigma[p.name] = t
            elif bound is not t:
                return None
            continue
        if type(p) is not type(t):
            return None
        if isinstance(p, Prefix):
            if p.act != t.act:
                return None
            stack.append((p.body, t.body))
        elif not isinstance(p, Nil):
            stack.append((p.left, t.left))
            stack.append((p.right, t.right))
    return sigma


def positions(t: Term) -> list[tuple[int, ...]]:
    out = []
    stack = [(t, ())]
    while stack:
        s, path = stack.pop()
        out.append(path)
        if isinstance(s, Prefix):
            stack.append((s.body, path + (0,)))
        elif isinstance(s, (Choice, Par, LMerge, CMerge)):
            stack.append((s.left, path + (0,)))
            stack.append((s.right, path + (1,)))
    return out


def subterm_at(t: Term, path) -> Term:
    for i in path:
        t = t.body if isinstance(t, Prefix) else (t.left if i == 0 else t.right)
    return t


def replace_at(t: Term, path, new: Term) -> Term:
    if not path:
        return new
    i, rest = path[0], path[1:]
    if isinstance(t, Prefix):
        return Prefix(t.act, replace_at(t.body, rest, new))
    if i == 0:
        return type(t)(replace_at(t.left, rest, new), t.right)
    return type(t)(t.left, replace_at(t.right, rest, new))


def random_rewrite(rng: random.Random, t: Term, equations: Sequence, attempts: int = 200,
                   filler=None) -> Term | None:
    """Apply one randomly chosen equation (either direction) at a random
    position.  Variables only on the produced side are filled by ``filler``."""
    pos = positions(t)
    for _ in range(attempts):
        eq = rng.choice(equations)
        lhs, rhs = (eq.lhs, eq.rhs) if rng.random() < 0.5 else (eq.rhs, eq.lhs)
        path = rng.choice(pos)
        sub = subterm_at(t, path)
        sigma = match(lhs, sub)
        if sigma is None:
            continue
        from .syntax import variables as vars_of
        for v in sorted(vars_of(rhs) - set(sigma)):
            if filler is None:
                break
            sigma[v] = filler()
        else:
            return replace_at(t, path, apply_substitution(sigma, rhs))
    return None
