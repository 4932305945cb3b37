"""Actions, terms, configurations and substitutions for CCS with left merge
and communication merge.

Terms are hash-consed: building the same tree twice returns the same object,
so equality is identity and hashing is O(1).  This keeps the many memo tables
in the semantics and the prover cheap.
"""
from __future__ import annotations

import weakref
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union


class DomainError(ValueError):
    """Raised when an operation is applied outside its domain."""


@dataclass(frozen=True)
class Action:
    """A visible name ``a``, a co-name ``~a`` or the silent action ``tau``."""

    name: str
    co: bool = False

    def __post_init__(self):
        if self.name == "tau" and self.co:
            raise DomainError("tau has no complement")

    @property
    def is_tau(self) -> bool:
        return self.name == "tau"

    @property
    def visible(self) -> bool:
        return self.name != "tau"

    def complement(self) -> "Action":
        if self.is_tau:
            raise DomainError("complement is undefined for tau")
        return Action(self.name, not self.co)

    def sort_key(self) -> tuple:
        return (0, "", False) if self.is_tau else (1, self.name, self.co)

    def __str__(self) -> str:
        return ("~" + self.name) if self.co else self.name


TAU = Action("tau")


def complement(a: Action) -> Action:
    return a.complement()


def action(text: str) -> Action:
    """Build an action from its concrete spelling (``a``, ``~a``, ``tau``)."""
    text = text.strip()
    if text == "tau":
        return TAU
    if text.startswith("~"):
        if text[1:] == "tau":
            raise DomainError("tau has no complement")
        return Action(text[1:], True)
    return Action(text)


def alphabet_actions(names: Iterable[str]) -> list[Action]:
    """All of A_tau over the given names: tau, then each name and co-name."""
    out = [TAU]
    for n in sorted(set(names)):
        out.append(Action(n))
        out.append(Action(n, True))
    return out


# ---------------------------------------------------------------------------
# Syntax trees

_TABLE: "weakref.WeakValueDictionary[tuple, Node]" = weakref.WeakValueDictionary()


class Node:
    """Common base of terms and configurations (immutable, interned)."""

    __slots__ = ("__weakref__", "size", "closed", "_key", "_canon", "_pp")
    RANK = -1

    def __setattr__(self, name, value):
        raise AttributeError("syntax nodes are immutable")

    def __reduce__(self):
        return (self.__class__, self._args())

    def _args(self) -> tuple:
        return ()

    def __repr__(self) -> str:
        from .parser import pretty_print
        return f"<{type(self).__name__} {pretty_print(self)}>"

    def __str__(self) -> str:
        from .parser import pretty_print
        return pretty_print(self)

    def sort_key(self) -> tuple:
        k = self._key
        if k is None:
            k = self._make_key()
            object.__setattr__(self, "_key", k)
        return k

    def _make_key(self) -> tuple:
        raise NotImplementedError


def _intern(cls, key: tuple, fields: dict, size: int, closed: bool):
    obj = _TABLE.get(key)
    if obj is None:
        obj = object.__new__(cls)
        for name, value in fields.items():
            object.__setattr__(obj, name, value)
        object.__setattr__(obj, "size", size)
        object.__setattr__(obj, "closed", closed)
        object.__setattr__(obj, "_key", None)
        object.__setattr__(obj, "_canon", None)
        object.__setattr__(obj, "_pp", None)
        _TABLE[key] = obj
    return obj


class Term(Node):
    """A CCS_LC term.  Concrete subclasses: Nil, Var, Prefix, Choice, Par,
    LMerge, CMerge."""

    __slots__ = ()


class Nil(Term):
    __slots__ = ()
    RANK = 0
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            obj = object.__new__(cls)
            for name, value in (("size", 1), ("closed", True), ("_key", None),
                                ("_canon", None), ("_pp", None)):
                object.__setattr__(obj, name, value)
            type.__setattr__(cls, "_instance", obj)
        return cls._instance

    def _make_key(self):
        return (0,)


NIL = Nil()


class Var(Term):
    __slots__ = ("name",)
    __match_args__ = ("name",)
    RANK = 1

    def __new__(cls, name: str):
        return _intern(cls, (cls, name), {"name": name}, 0, False)

    def _args(self):
        return (self.name,)

    def _make_key(self):
        return (1, self.name)


class Prefix(Term):
    __slots__ = ("act", "body")
    __match_args__ = ("act", "body")
    RANK = 3

    def __new__(cls, act: Action, body: Term):
        return _intern(cls, (cls, act, body), {"act": act, "body": body},
                       1 + body.size, body.closed)

    def _args(self):
        return (self.act, self.body)

    def _make_key(self):
        return (3, self.act.sort_key(), self.body.sort_key())


class _Binary(Term):
    __slots__ = ("left", "right")
    __match_args__ = ("left", "right")

    def __new__(cls, left: Term, right: Term):
        if not isinstance(left, Term) or not isinstance(right, Term):
            raise DomainError(f"{cls.__name__} expects terms")
        return _intern(cls, (cls, left, right), {"left": left, "right": right},
                       1 + left.size + right.size, left.closed and right.closed)

    def _args(self):
        return (self.left, self.right)

    def _make_key(self):
        return (self.RANK, self.left.sort_key(), self.right.sort_key())


class Choice(_Binary):
    __slots__ = ()
    RANK = 4


class Par(_Binary):
    __slots__ = ()
    RANK = 5


class LMerge(_Binary):
    __slots__ = ()
    RANK = 6


class CMerge(_Binary):
    __slots__ = ()
    RANK = 7


class IVar(Node):
    """Indexed variable x_mu: the closed process for x has started with mu."""

    __slots__ = ("name", "act")
    __match_args__ = ("name", "act")
    RANK = 2

    def __new__(cls, name: str, act: Action):
        return _intern(cls, (cls, name, act), {"name": name, "act": act}, 0, False)

    def _args(self):
        return (self.name, self.act)

    def _make_key(self):
        return (2, self.name, self.act.sort_key())


class CPar(Node):
    """Configuration-level parallel composition (at least one side is not a term)."""

    __slots__ = ("left", "right")
    __match_args__ = ("left", "right")
    RANK = 5  # shares the parallel rank so canonical forms interleave freely

    def __new__(cls, left: Node, right: Node):
        if isinstance(left, Term) and isinstance(right, Term):
            raise DomainError("use Par for the composition of two terms")
        return _intern(cls, (cls, left, right), {"left": left, "right": right},
                       left.size + right.size + 1, False)

    def _args(self):
        return (self.left, self.right)

    def _make_key(self):
        return (5, self.left.sort_key(), self.right.sort_key())


Configuration = Node


def par_of(left: Node, right: Node) -> Node:
    """Parallel composition at the right level: Par for terms, CPar otherwise."""
    if isinstance(left, Term) and isinstance(right, Term):
        return Par(left, right)
    return CPar(left, right)


def prefix(a: Union[Action, str], body: Term) -> Term:
    return Prefix(a if isinstance(a, Action) else action(a), body)


# ---------------------------------------------------------------------------
# Sums and products

def summands(t: Term) -> list[Term]:
    """Flatten nested choice, left to right."""
    out: list[Term] = []
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Choice):
            stack.append(s.right)
            stack.append(s.left)
        else:
            out.append(s)
    return out


def factors(c: Node) -> list[Node]:
    """Flatten nested parallel composition (term or configuration level)."""
    out: list[Node] = []
    stack = [c]
    while stack:
        s = stack.pop()
        if isinstance(s, (Par, CPar)):
            stack.append(s.right)
            stack.append(s.left)
        else:
            out.append(s)
    return out


def make_sum(terms: Iterable[Term]) -> Term:
    """Left-nested sum; the empty sum is 0."""
    it = iter(terms)
    acc = next(it, None)
    if acc is None:
        return NIL
    for t in it:
        acc = Choice(acc, t)
    return acc


def make_par(parts: Iterable[Node]) -> Node:
    it = iter(parts)
    acc = next(it, None)
    if acc is None:
        return NIL
    for p in it:
        acc = par_of(acc, p)
    return acc


# ---------------------------------------------------------------------------
# AC-canonical form

def ac_canon(c: Node) -> Node:
    """Canonical representative modulo associativity/commutativity of + and ||."""
    res = c._canon
    if res is not None:
        return res
    if isinstance(c, (Nil, Var, IVar)):
        res = c
    elif isinstance(c, Prefix):
        res = Prefix(c.act, ac_canon(c.body))
    elif isinstance(c, Choice):
        parts = sorted((ac_canon(s) for s in summands(c)), key=Node.sort_key)
        res = make_sum(parts)
    elif isinstance(c, (Par, CPar)):
        parts = sorted((ac_canon(s) for s in factors(c)), key=Node.sort_key)
        res = make_par(parts)
    elif isinstance(c, (LMerge, CMerge)):
        res = type(c)(ac_canon(c.left), ac_canon(c.right))
    else:  # pragma: no cover
        raise TypeError(c)
    object.__setattr__(c, "_canon", res)
    if res._canon is None:
        object.__setattr__(res, "_canon", res)
    return res


def ac_equal(t: Node, u: Node) -> bool:
    return t is u or ac_canon(t) is ac_canon(u)


def size(t: Node) -> int:
    return t.size


# ---------------------------------------------------------------------------
# Traversals

def subterms(t: Node) -> Iterator[Node]:
    """Pre-order traversal of all subterms, including t itself."""
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        if isinstance(s, Prefix):
            stack.append(s.body)
        elif isinstance(s, (_Binary, CPar)):
            stack.append(s.right)
            stack.append(s.left)


def variables(c: Node) -> set[str]:
    """Names of plain variables occurring in c."""
    return {s.name for s in subterms(c) if isinstance(s, Var)}


def indexed_variables(c: Node) -> set[tuple[str, Action]]:
    return {(s.name, s.act) for s in subterms(c) if isinstance(s, IVar)}


def names(c: Node) -> set[str]:
    """Visible action names (without co-marks) occurring in c."""
    out = set()
    for s in subterms(c):
        if isinstance(s, (Prefix, IVar)) and s.act.visible:
            out.add(s.act.name)
    return out


def is_ccs(t: Node) -> bool:
    """True for terms built from 0, variables, prefix, + and || only."""
    return all(isinstance(s, (Nil, Var, Prefix, Choice, Par)) for s in subterms(t))


def strip_zeros(t: Term) -> Term:
    """Remove syntactic 0 summands and 0 parallel factors (A0 and x || 0 = x)."""
    if isinstance(t, Prefix):
        return Prefix(t.act, strip_zeros(t.body))
    if isinstance(t, (Choice, Par)):
        left, right = strip_zeros(t.left), strip_zeros(t.right)
        if left is NIL:
            return right
        if right is NIL:
            return left
        return type(t)(left, right)
    if isinstance(t, (LMerge, CMerge)):
        return type(t)(strip_zeros(t.left), strip_zeros(t.right))
    return t


def has_zero_factor(t: Term, alphabet: Iterable[str] = ()) -> bool:
    """Does t contain a ||, |> or | whose argument is RBB-equivalent to 0
    under every closed substitution?

    An open term is equivalent to 0 exactly when its configuration LTS has no
    initial transition, which the open-term checker decides directly.
    """
    from .equivalences import rooted_branching_bisim

    alpha = set(alphabet) | names(t) or {"a"}
    for s in subterms(t):
        if isinstance(s, (Par, LMerge, CMerge)):
            for arg in (s.left, s.right):
                if rooted_branching_bisim(arg, NIL, alpha):
                    return True
    return False


# ---------------------------------------------------------------------------
# Substitutions

Key = Union[str, tuple]


class Substitution(Mapping):
    """Finite map from plain variables (``"x"``) and indexed variables
    (``("x", Action)``) to terms.  Unmapped variables stay put."""

    def __init__(self, mapping: Mapping | None = None, **kw):
        data: dict = {}
        for k, v in dict(mapping or {}, **kw).items():
            if isinstance(k, Var):
                k = k.name
            elif isinstance(k, IVar):
                k = (k.name, k.act)
            elif isinstance(k, tuple):
                k = (k[0], k[1] if isinstance(k[1], Action) else action(k[1]))
            if not isinstance(v, Term):
                raise DomainError("substitution images must be terms")
            data[k] = v
        self._data = data

    def __getitem__(self, k):
        return self._data[k]

    def __iter__(self):
        return iter(self._data)

    def __len__(self):
        return len(self._data)

    def __repr__(self):
        items = ", ".join(
            f"{k if isinstance(k, str) else k[0] + '@' + str(k[1])} := {v}"
            for k, v in self._data.items())
        return f"Substitution({items})"

    @property
    def closed(self) -> bool:
        return all(v.closed for v in self._data.values())

    def updated(self, more: Mapping) -> "Substitution":
        d = dict(self._data)
        d.update(Substitution(more)._data)
        return Substitution(d)


def apply_substitution(sigma: Mapping, c: Node) -> Node:
    """Homomorphic replacement of (indexed) variables in c."""
    if not isinstance(sigma, Substitution):
        sigma = Substitution(sigma)
    memo: dict[Node, Node] = {}

    def go(n: Node) -> Node:
        r = memo.get(n)
        if r is not None:
            return r
        if isinstance(n, Var):
            r = sigma.get(n.name, n)
        elif isinstance(n, IVar):
            r = sigma.get((n.name, n.act), n)
        elif isinstance(n, Nil):
            r = n
        elif isinstance(n, Prefix):
            r = Prefix(n.act, go(n.body))
        elif isinstance(n, CPar):
            r = par_of(go(n.left), go(n.right))
        else:
            r = type(n)(go(n.left), go(n.right))
        memo[n] = r
        return r

    return go(c)


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term
    name: str | None = None

    def __post_init__(self):
        for side in (self.lhs, self.rhs):
            if not isinstance(side, Term):
                raise DomainError("equation sides must be terms")

    def reversed(self) -> "Equation":
        return Equation(self.rhs, self.lhs, self.name)

    def __str__(self):
        from .parser import pretty_print
        return pretty_print(self)
