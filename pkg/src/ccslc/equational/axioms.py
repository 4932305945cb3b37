"""The axiom systems E_B, E_RBB and E0+TB, with per-action schema expansion."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from ..syntax import (Action, DomainError, Equation, alphabet_actions,
                      variables)

# Plain axioms: name -> "lhs = rhs".  Schemata are expanded below.
_PLAIN = {
    "A0": "$x + 0 = $x",
    "A1": "$x + $y = $y + $x",
    "A2": "($x + $y) + $z = $x + ($y + $z)",
    "A3": "$x + $x = $x",
    "L0": "0 |> $x = 0",
    "L2": "($x |> $y) |> $z = $x |> ($y || $z)",
    "L3": "$x |> 0 = $x",
    "L4": "($x + $y) |> $z = $x |> $z + $y |> $z",
    "C0": "0 | $x = 0",
    "C1": "$x | $y = $y | $x",
    "C2": "($x | $y) | $z = $x | ($y | $z)",
    "C3": "($x + $y) | $z = $x | $z + $y | $z",
    "C6": "($x |> $y) | $z = ($x | $z) |> $y",
    "C7": "$x | $y | $z = 0",
    "P": "$x || $y = $x |> $y + $y |> $x + $x | $y",
    "TL": "$x |> tau.$y = $x |> $y",
}

_SCHEMA_ORDER = ["A0", "A1", "A2", "A3", "L0", "L1", "L2", "L3", "L4",
                 "C0", "C1", "C2", "C3", "C4", "C5", "C6", "C7", "P", "TB", "TL"]

_SYSTEMS = {
    "E_B": ["A0", "A1", "A2", "A3", "L0", "L1", "L2", "L3", "L4",
            "C0", "C1", "C2", "C3", "C4", "C5", "C6", "C7", "P"],
    "E0_TB": ["A0", "A1", "A2", "A3", "TB"],
}
_SYSTEMS["E_RBB"] = _SYSTEMS["E_B"] + ["TB", "TL"]

# Laws derivable from E_RBB.
DERIVED_LAWS = {
    "D1": "$x || $y = $y || $x",
    "D2": "($x || $y) || $z = $x || ($y || $z)",
    "D3": "($x |> $y) | ($z |> $w) = ($x | $z) |> ($y || $w)",
    "D4": "$x || 0 = $x",
    "DT1": "a.tau.$x = a.$x",
    "DT2": "$x |> (tau.($y + $z) + $y) = $x |> ($y + $z)",
    "DT3": "tau.$x | $y = 0",
}


def derived_law(name: str) -> Equation:
    from ..parser import parse_equation
    eq = parse_equation(DERIVED_LAWS[name])
    return Equation(eq.lhs, eq.rhs, name)


def _schema_instances(name: str, acts: list[Action]) -> list[tuple[str, str]]:
    """Instance names and equation texts of one schema."""
    vis = [a for a in acts if a.visible]
    if name == "L1":
        return [(f"L1[{m}]", f"{m}.$x |> $y = {m}.($x || $y)") for m in acts]
    if name == "TB":
        return [(f"TB[{m}]", f"{m}.(tau.($x + $y) + $y) = {m}.($x + $y)") for m in acts]
    if name == "C4":
        return [(f"C4[{a},{a.complement()}]", f"{a}.$x | {a.complement()}.$y = tau.($x || $y)")
                for a in vis]
    if name == "C5":
        return [(f"C5[{a},{b}]", f"{a}.$x | {b}.$y = 0")
                for a in vis for b in vis if b != a.complement()]
    return [(name, _PLAIN[name])]


@dataclass
class AxiomSystem:
    """Named equations, grouped by schema and expanded over an alphabet.

    Instance names carry their action parameters, e.g. ``L1[a]`` or
    ``C4[a,~a]``.  Appending ``'`` to a name refers to the symmetric
    counterpart (the equation read right to left).
    """

    name: str
    alphabet: tuple[str, ...]
    schemata: dict[str, list[str]] = field(default_factory=dict)
    instances: dict[str, Equation] = field(default_factory=dict)
    builtin: bool = False

    @classmethod
    def from_equations(cls, name: str, eqs: Iterable[Equation],
                       alphabet: Iterable[str] = ()) -> "AxiomSystem":
        sysm = cls(name, tuple(sorted(set(alphabet))))
        for eq in eqs:
            if eq.name in sysm.instances:
                raise DomainError(f"duplicate axiom name {eq.name!r}")
            sysm.instances[eq.name] = eq
            sysm.schemata[eq.name] = [eq.name]
        return sysm

    def __contains__(self, name: str) -> bool:
        return name.rstrip("'") in self.instances

    def __len__(self) -> int:
        return len(self.instances)

    def get(self, name: str) -> Equation:
        """The equation of an instance name; a trailing ``'`` reverses it."""
        flips = len(name) - len(name.rstrip("'"))
        base = name.rstrip("'")
        if base not in self.instances:
            raise KeyError(name)
        eq = self.instances[base]
        return eq.reversed() if flips % 2 else eq

    def schema_names(self) -> list[str]:
        return list(self.schemata)

    def with_alphabet(self, names: Iterable[str]) -> "AxiomSystem":
        """The same system instantiated over a (possibly larger) alphabet."""
        names = set(names) | set(self.alphabet)
        if names == set(self.alphabet):
            return self
        if not self.builtin:
            return AxiomSystem(self.name, tuple(sorted(names)), dict(self.schemata),
                               dict(self.instances), False)
        return builtin_axioms(self.name, names)


_CACHE: dict = {}


def builtin_axioms(name: str = "E_RBB", alphabet: Iterable[str] = ("a",)) -> AxiomSystem:
    """E_B, E_RBB or E0_TB instantiated over the given action names."""
    from ..parser import parse_equation

    if name not in _SYSTEMS:
        raise DomainError(f"unknown axiom system {name!r} (expected one of {sorted(_SYSTEMS)})")
    alpha = tuple(sorted(set(alphabet)))
    key = (name, alpha)
    if key in _CACHE:
        return _CACHE[key]
    acts = alphabet_actions(alpha)
    sysm = AxiomSystem(name, alpha, builtin=True)
    for schema in _SYSTEMS[name]:
        names = []
        for inst, text in _schema_instances(schema, acts):
            eq = parse_equation(text)
            sysm.instances[inst] = Equation(eq.lhs, eq.rhs, inst)
            names.append(inst)
        sysm.schemata[schema] = names
    _CACHE[key] = sysm
    return sysm


def instance_variables(eq: Equation) -> list[str]:
    return sorted(variables(eq.lhs) | variables(eq.rhs))
