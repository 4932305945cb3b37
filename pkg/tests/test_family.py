import pytest

from ccslc import parse_term, pretty_print
from ccslc.equivalences import depth, rdepth, rooted_branching_bisim
from ccslc.family import (build_a_leq, build_e_n, build_p_n, check_property_Pn,
                          run_negative_experiment)
from ccslc.syntax import DomainError, Par, Prefix, action, summands

P = parse_term


def test_builders():
    assert pretty_print(build_a_leq(1)) == "a.0"
    assert pretty_print(build_a_leq(3)) == "a.0 + a.a.0 + a.a.a.0"
    assert pretty_print(build_p_n(2)) == "a.(a.0 + a.a.0)"
    assert pretty_print(build_p_n(3)) == "a.(a.0 + a.a.0) + a.(a.0 + a.a.0 + a.a.a.0)"
    assert len(summands(build_p_n(4))) == 3
    assert all(isinstance(s, Prefix) for s in summands(build_p_n(4)))
    with pytest.raises(DomainError):
        build_p_n(1)
    with pytest.raises(DomainError):
        build_a_leq(0)


def test_equation_shape():
    e = build_e_n(2)
    assert pretty_print(e.lhs) == "a.0 || a.(a.0 + a.a.0)"
    assert pretty_print(e.rhs) == "a.a.(a.0 + a.a.0) + a.(a.0 || (a.0 + a.a.0))"
    for n in (2, 3, 4):
        e = build_e_n(n)
        assert e.lhs is Par(P("a.0"), build_p_n(n))
        # one summand a.p_n and one a.(a || a^{<=i}) per 2 <= i <= n
        assert len(summands(e.rhs)) == n
        assert rooted_branching_bisim(e.lhs, e.rhs)


def test_property_pn_examples():
    assert check_property_Pn(Par(P("a.0"), build_p_n(3)), 3)
    assert not check_property_Pn(P("b.0"), 3)
    assert check_property_Pn(P("b.0 + (a.0 || (a.(a.0 + a.a.0) + a.(a.0 + a.a.0 + a.a.a.0)))"), 3)
    assert not check_property_Pn(build_e_n(3).rhs, 3)
    assert not check_property_Pn(build_e_n(3).lhs, 2)


def test_depths_of_e3():
    e = build_e_n(3)
    assert rdepth(e.lhs) == rdepth(e.rhs) == 5
    assert depth(e.lhs) == 5
    assert rdepth(build_p_n(3)) == 4


@pytest.mark.parametrize("n", [2, 3, 4])
def test_negative_experiment(n):
    rep = run_negative_experiment(n)
    assert rep.ok, rep.to_dict()
    assert rep.e_n_sound and rep.lhs_has_Pn and not rep.rhs_has_Pn
    assert all(rep.indecomposable.values())
    assert rep.proof_valid and rep.proof_steps > 0
    d = rep.to_dict()
    assert "seconds" not in d and d["depths"]["rdepth(p_n)"] == n + 1


def test_experiment_without_proof():
    rep = run_negative_experiment(2, prove=False)
    assert rep.proof_valid is None and rep.proof_trace is None
    with pytest.raises(DomainError):
        run_negative_experiment(1)


def test_rhs_summands_are_not_the_target():
    # no summand of the right-hand side is rooted branching bisimilar to a || p_n
    n = 3
    target = Par(P("a.0"), build_p_n(n))
    for s in summands(build_e_n(n).rhs):
        assert not rooted_branching_bisim(s, target)
    assert Prefix(action("a"), build_p_n(n)) in summands(build_e_n(n).rhs)
