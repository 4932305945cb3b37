import itertools
import random

import pytest

from ccslc import parse_term, pretty_print
from ccslc.decomposition import (UniverseParams, check_cancellation,
                                 decompose_bounded, enumerate_universe,
                                 is_indecomposable_bounded)
from ccslc.equivalences import bb_class, branching_bisim, depth
from ccslc.family import build_p_n
from ccslc.generate import random_term
from ccslc.semantics import build_lts
from ccslc.syntax import (NIL, TAU, Choice, DomainError, Par, Prefix, ac_canon,
                          make_par, strip_zeros)

from helpers import rewrite_chain

P = parse_term
U8 = UniverseParams.over("a", "~a", "tau", max_size=8)


def brute_universe(acts, max_size):
    """Every closed CCS term up to max_size, then 0-free ones up to AC."""
    by = {1: [NIL]}
    for s in range(2, max_size + 1):
        out = [Prefix(a, b) for a in acts for b in by[s - 1]]
        for k in range(1, s - 1):
            for l, r in itertools.product(by[k], by[s - 1 - k]):
                out += [Choice(l, r), Par(l, r)]
        by[s] = out
    terms = [t for ts in by.values() for t in ts]
    return {ac_canon(t) for t in terms if strip_zeros(t) is t}


@pytest.mark.parametrize("names,max_size", [(("a",), 6), (("a", "~a", "tau"), 5)])
def test_universe_matches_brute_force(names, max_size):
    u = UniverseParams.over(*names, max_size=max_size, max_depth=max_size)
    got = list(enumerate_universe(u))
    assert len(got) == len(set(got))
    assert set(got) == brute_universe(u.alphabet, max_size)
    assert got == list(enumerate_universe(u))  # deterministic order


def test_universe_examples():
    small = set(enumerate_universe(UniverseParams.over("a", max_size=2, max_depth=1)))
    assert P("a.0") in small and P("a.a.0") not in small
    assert list(enumerate_universe(UniverseParams.over("a", max_size=1))) == [NIL]
    # A3 is not applied, so a.0 + a.0 is there once its size (5) is allowed
    assert P("a.0 + a.0") in set(enumerate_universe(UniverseParams.over("a", max_size=5)))
    assert P("a.a.0") not in set(enumerate_universe(UniverseParams.over("a", max_size=6, max_depth=1)))
    with pytest.raises(DomainError):
        UniverseParams.over("a", max_size=0)


@pytest.mark.parametrize("text", ["a.(a.0 + a.a.0)", "a.0 + a.a.0", "a.0 + a.a.0 + a.a.a.0",
                                  "a.0", "tau.a.0", "a.b.0"])
def test_indecomposable(text):
    res = is_indecomposable_bounded(P(text), U8)
    assert res.indecomposable and res.exact


def test_p3_indecomposable_over_a_and_coa():
    res = is_indecomposable_bounded(build_p_n(3), UniverseParams.over("a", "~a", max_size=10))
    assert res.verdict == "indecomposable_within_bound"


def test_mixed_sums_decompose():
    res = is_indecomposable_bounded(P("tau.a.0 + ~a.a.a.0 + a.~a.a.0 + ~a.a.a.0"), U8)
    assert res.verdict == "decomposition"
    q, r = res.witness
    assert sorted([bb_class(q), bb_class(r)]) == sorted([bb_class(P("~a.a.0")), bb_class(P("a.0"))])
    fm = decompose_bounded(P("tau.0 + ~a.a.0 + a.~a.0"), U8)
    assert fm.classes() == sorted([bb_class(P("a.0")), bb_class(P("~a.0"))])
    assert fm.verified


def test_decompose_examples():
    fm = decompose_bounded(P("a.0 || (b.0 || 0)"), U8)
    assert [pretty_print(t) for t in fm.terms()] == ["a.0", "b.0"]
    assert all(f.tag == "indecomposable" for f in fm.factors)
    assert [pretty_print(t) for t in decompose_bounded(P("a.0"), U8).terms()] == ["a.0"]
    assert decompose_bounded(P("0 || tau.0"), U8).terms() == []
    d = decompose_bounded(P("a.0 || a.0 || a.0"), U8).to_dict()
    assert d["recomposition_verified"] and len(d["factors"]) == 3


def test_zero_is_rejected():
    with pytest.raises(DomainError):
        is_indecomposable_bounded(P("tau.0 + 0"), U8)
    with pytest.raises(DomainError):
        is_indecomposable_bounded(P("a.$x"), U8)


def test_bounded_search_without_derivatives():
    # the a^{<=2} || a split is found from the universe alone
    p = P("a.0 || (a.0 + a.a.0)")
    res = is_indecomposable_bounded(p, U8, use_derivatives=False)
    assert not res.indecomposable and not res.exact
    # a universe too small to hold a factor gives a bounded verdict only
    res = is_indecomposable_bounded(p, UniverseParams.over("a", max_size=2), use_derivatives=False)
    assert res.indecomposable and not res.exact


def test_sum_of_expansion_resplits():
    fm = decompose_bounded(P("a.b.0 + b.a.0"), UniverseParams.over("a", "b", max_size=4))
    assert fm.classes() == sorted([bb_class(P("a.0")), bb_class(P("b.0"))])


def test_factor_characterisation_of_a_par_pn():
    rng = random.Random(23)
    for n in (2, 3):
        target = Par(P("a.0"), build_p_n(n))
        expected = sorted([bb_class(P("a.0")), bb_class(build_p_n(n))])
        for _ in range(6):
            p = rewrite_chain(rng, target, 3, names=("a",))
            if rng.random() < 0.5:
                p = Prefix(TAU, p)
            assert branching_bisim(p, target)
            assert decompose_bounded(p, U8).classes() == expected


def test_cancellation_examples():
    assert check_cancellation(P("a.0+a.0"), P("a.0"), P("b.0"))
    assert check_cancellation(P("a.0"), P("b.0"), P("c.0"))
    assert check_cancellation(P("tau.a.0"), P("a.0"), P("~a.0"))
    assert branching_bisim(P("tau.a.0 || ~a.0"), P("a.0 || ~a.0"))


def test_archimedean_spot_check():
    rng = random.Random(29)
    for _ in range(60):
        q = random_term(rng, 5, 2, ("a",), ops=("prefix", "choice"))
        if depth(q) == 0:
            continue
        q3 = make_par([q, q, q])
        p = random_term(rng, 9, 4, ("a",), ops=("prefix", "choice", "par"))
        if depth(p) < 3 * depth(q):
            target = bb_class(q3)
            assert all(bb_class(s) != target for s in build_lts(p).states)
