import pytest
from hypothesis import given

from ccslc import parse_configuration, parse_term, pretty_print
from ccslc.equivalences import rooted_branching_bisim
from ccslc.semantics import build_lts
from ccslc.syntax import (NIL, TAU, CPar, DomainError, IVar, Par,
                          Substitution, Var, ac_canon, ac_equal, action,
                          apply_substitution, complement, has_zero_factor,
                          size, strip_zeros, summands)

from conftest import closed_terms, open_terms

P = parse_term


def test_actions():
    a = action("a")
    assert complement(a) == action("~a")
    assert complement(action("~a")) == a
    assert complement(complement(a)) == a
    assert a != complement(a)
    with pytest.raises(DomainError):
        complement(TAU)
    assert TAU.is_tau and not TAU.visible


@pytest.mark.parametrize("text,expected", [("0", 1), ("a.0", 2), ("$x", 0),
                                           ("a.0 || $x", 3), ("$x | $y", 1)])
def test_size(text, expected):
    assert size(P(text)) == expected


def test_size_decreases_on_small_terms():
    # exhaustive over the closed CCS terms up to size 6
    from ccslc.decomposition import UniverseParams, enumerate_universe
    u = UniverseParams.over("a", "~a", "tau", max_size=6)
    count = 0
    for t in enumerate_universe(u):
        lts = build_lts(t)
        for s, _, d in lts.edges:
            assert lts.states[s].size > lts.states[d].size
        count += 1
    assert count > 400


def test_summands():
    assert [pretty_print(s) for s in summands(P("(a.0 + b.0) + c.0"))] == ["a.0", "b.0", "c.0"]
    assert summands(P("a.0 || b.0")) == [P("a.0 || b.0")]
    assert summands(NIL) == [NIL]


def test_ac_equal():
    assert ac_equal(P("(a.0+b.0)+c.0"), P("c.0+(b.0+a.0)"))
    assert ac_equal(P("a.0 || b.0"), P("b.0 || a.0"))
    assert not ac_equal(P("a.(b.0+c.0)"), P("a.b.0+a.c.0"))
    # AC does not reach through left merge or idempotence
    assert not ac_equal(P("a.0 |> b.0"), P("b.0 |> a.0"))
    assert not ac_equal(P("a.0 + a.0"), P("a.0"))


@given(open_terms, open_terms)
def test_ac_canon_is_a_normal_form(t, u):
    assert ac_canon(ac_canon(t)) is ac_canon(t)
    assert ac_equal(t, u) == (ac_canon(t) is ac_canon(u))


def test_strip_zeros_examples():
    assert strip_zeros(P("a.(0 || b.0) + 0")) is P("a.b.0")
    assert strip_zeros(P("0 || 0")) is NIL
    assert strip_zeros(P("$x + 0")) is Var("x")


@given(closed_terms)
def test_strip_zeros_idempotent_and_sound(t):
    s = strip_zeros(t)
    assert strip_zeros(s) is s
    assert rooted_branching_bisim(s, t)


def test_has_zero_factor():
    assert has_zero_factor(P("a.0 || (0+0)"))
    assert not has_zero_factor(P("a.0 || b.0"))
    assert has_zero_factor(P("a.0 || (b.0 | c.0)"))
    assert has_zero_factor(P("$x |> (tau.$y | $z)"))
    assert not has_zero_factor(P("$x |> $y"))


def test_substitution_examples():
    sigma = Substitution({("x", "a"): P("b.0"), ("x", "~a"): P("c.0")})
    assert apply_substitution(sigma, parse_configuration("$x@a || $x@~a")) is P("b.0 || c.0")
    assert apply_substitution(Substitution(), P("a.$x")) is P("a.$x")
    assert apply_substitution({"x": P("a.0")}, P("$x + b.$x")) is P("a.0 + b.a.0")
    assert Substitution({"x": P("a.0")}).closed
    assert not Substitution({"x": P("$y")}).closed


@given(open_terms, closed_terms, closed_terms)
def test_substitution_commutes_with_embedding(t, p, q):
    sigma = Substitution({"x": p, "y": q})
    conf = CPar(IVar("z", action("a")), t)
    out = apply_substitution(sigma, conf)
    assert isinstance(out, CPar)
    assert out.right is apply_substitution(sigma, t)


def test_configuration_invariants():
    with pytest.raises(DomainError):
        CPar(P("a.0"), P("b.0"))
    assert Par(Var("x"), NIL).closed is False


def test_interning():
    assert P("a.(b.0 + $x)") is P("a.(b.0 + $x)")
    assert hash(P("a.0")) == hash(P("a.0"))
