"""Generators of related and unrelated term pairs shared by the tests."""
import random

from ccslc.equational import builtin_axioms
from ccslc.generate import random_rewrite, random_term
from ccslc.syntax import TAU, IVar, Prefix, alphabet_actions, par_of

NAMES = ("a", "b")
SOUND = list(builtin_axioms("E_RBB", NAMES).instances.values())
SOUND_A = list(builtin_axioms("E_RBB", ("a",)).instances.values())


def rewrite_chain(rng: random.Random, t, steps: int, eqs=SOUND, names=NAMES, variables=()):
    """Apply up to ``steps`` random rewrites; unmatched attempts are skipped."""
    def filler():
        return random_term(rng, 4, 2, names, variables)

    for _ in range(steps):
        u = random_rewrite(rng, t, eqs, filler=filler)
        if u is not None:
            t = u
    return t


def closed_pair(rng: random.Random, max_size=8, max_depth=3, names=NAMES, mix=0.3):
    """A pair (p, q): q is a sound rewrite of p, sometimes prefixed by tau
    (branching but not rooted), sometimes an unrelated random term."""
    p = random_term(rng, max_size, max_depth, names)
    r = rng.random()
    if r < mix:
        return p, random_term(rng, max_size, max_depth, names)
    q = rewrite_chain(rng, p, rng.randint(1, 4), names=names)
    if r < mix + 0.2:
        q = Prefix(TAU, q)
    return p, q


def open_pair(rng: random.Random, unsound, max_size=7, ivars=True):
    """Configuration pair over alphabet {a} with at most two variables."""
    t = random_term(rng, max_size, 3, ("a",), ("x", "y"))
    kind = rng.randrange(3)
    if kind == 2:
        u = random_term(rng, max_size, 3, ("a",), ("x", "y"))
    else:
        eqs = SOUND_A if kind == 0 else list(unsound) + SOUND_A[:5]
        u = rewrite_chain(rng, t, rng.randint(1, 3), eqs, ("a",), ("x", "y"))
    c1, c2 = t, u
    if ivars and rng.random() < 0.4:
        acts = alphabet_actions(["a"])
        iv = IVar(rng.choice("xy"), rng.choice(acts))
        other = iv if rng.random() < 0.7 else IVar(rng.choice("xy"), rng.choice(acts))
        c1, c2 = par_of(iv, c1), par_of(other, c2)
    return c1, c2
