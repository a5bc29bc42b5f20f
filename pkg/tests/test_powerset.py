import pytest
from hypothesis import given, settings

from colex import gallery
from colex.automaton import Automaton, isomorphic, minimize
from colex.errors import AlphabetMismatchError, CapExceededError
from colex.order import brute_force_nfa_width, dfa_width
from colex.powerset import (
    check_powerset_bounds,
    nfa_equivalent,
    nfa_membership,
    powerset_construct,
    state_bound,
)

from oracles import anchored_states, reached_from, words_upto
from strategies import dfas, nfas


def test_state_bound_values():
    assert state_bound(6, 1) == 11
    assert state_bound(5, 5) == 31
    assert state_bound(1, 1) == 1


def test_chain_nfa_bounds():
    a = gallery.chain_nfa()
    rep = check_powerset_bounds(a, 1)
    assert rep.state_bound == 11 and rep.width_bound == 1
    assert rep.ok
    assert rep.powerset_width == 1


def test_dfa_input_is_unchanged(running):
    res = powerset_construct(running)
    assert isomorphic(res.dfa, running)
    assert all(len(s) == 1 for s in res.subsets)


def test_cap():
    with pytest.raises(CapExceededError):
        powerset_construct(gallery.chain_nfa(), cap=2)


def test_p_range_checked():
    with pytest.raises(ValueError):
        check_powerset_bounds(gallery.chain_nfa(), 0)


@settings(max_examples=60)
@given(nfas(max_n=5))
def test_subsets_are_reached_sets(a):
    res = powerset_construct(a)
    d = res.dfa
    for w in words_upto(a.sigma, 4):
        reached = anchored_states(a, w)
        cur = d.source
        for x in w:
            cur = d.delta[cur].get(x)
            if cur is None:
                break
        if cur is None:
            assert not reached
        else:
            assert set(res.subsets[cur]) == reached
        assert nfa_membership(a, w) == bool(reached & a.finals)


@settings(max_examples=50, deadline=None)
@given(nfas(max_n=5))
def test_bounds_with_exact_width(a):
    p, _ = brute_force_nfa_width(a)
    rep = check_powerset_bounds(a, p)
    assert rep.states_ok and rep.width_ok
    # any larger p is also an upper bound on the width
    if p < a.n:
        assert check_powerset_bounds(a, p + 1).ok


def test_equivalence():
    assert nfa_equivalent(gallery.fan_dfa(), gallery.fan_dfa_split_k())
    assert nfa_equivalent(gallery.fan_dfa_split_h(), gallery.fan_dfa_split_k())
    a = Automaton.from_symbols("ab", 2, 0, [1], [(0, 1, "a")])
    b = Automaton.from_symbols("ab", 2, 0, [1], [(0, 1, "b")])
    assert not nfa_equivalent(a, b)
    with pytest.raises(AlphabetMismatchError):
        nfa_equivalent(a, gallery.running_dfa())


@settings(max_examples=40)
@given(nfas(max_n=5, max_sigma=2), nfas(max_n=4, max_sigma=2))
def test_equivalence_agrees_with_words(a, b):
    if a.alphabet != b.alphabet:
        return
    assert nfa_equivalent(a, b) == _same_language(a, b)


def _same_language(a, b):
    """Breadth-first search over pairs of reached sets."""
    start = (frozenset([a.source]), frozenset([b.source]))
    seen = {start}
    todo = [start]
    while todo:
        x, y = todo.pop()
        if bool(x & a.finals) != bool(y & b.finals):
            return False
        for c in range(a.sigma):
            nxt = (frozenset(reached_from(a, x, [c])), frozenset(reached_from(b, y, [c])))
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return True


@settings(max_examples=40)
@given(dfas(max_n=6))
def test_minimized_powerset_is_minimum(d):
    assert isomorphic(minimize(powerset_construct(d).dfa), minimize(d))
    assert dfa_width(powerset_construct(d).dfa)[0] == dfa_width(d)[0]
