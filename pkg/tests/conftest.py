import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ccslc.syntax import (NIL, Choice, CMerge, LMerge, Par, Prefix, Var,
                          alphabet_actions)

settings.register_profile("default", deadline=None, max_examples=100,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=1000,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def term_strategy(names=("a", "b"), variables=(), max_leaves=8, merges=True):
    acts = st.sampled_from(alphabet_actions(names))
    leaf = st.just(NIL)
    if variables:
        leaf = leaf | st.sampled_from([Var(v) for v in variables])
    ops = [Choice, Par] + ([LMerge, CMerge] if merges else [])

    def extend(kids):
        return st.one_of(st.builds(Prefix, acts, kids),
                         *[st.builds(op, kids, kids) for op in ops])

    return st.recursive(leaf, extend, max_leaves=max_leaves)


closed_terms = term_strategy()
open_terms = term_strategy(variables=("x", "y"))


# Acceptance results are collected here and reported once at the end of the
# run, so the summary shows even when output capture is on.
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
