import random

import pytest
from hypothesis import given, settings, strategies as st

from colex import gallery
from colex.abwt import abwt_of_dfa, build_abwt
from colex.errors import FormatError
from colex.generate import random_words
from colex.index import Index, SearchState, build_index
from colex.order import brute_force_nfa_width, chain_partition, maximal_colex_order
from colex.succinct import BitVector, IntDictionary

from oracles import anchored_states, subpath_states, words_upto
from strategies import dfas, nfas


def chains_of(ix):
    """Chain i as the list of automaton states in order (index 0 unused)."""
    layout = ix.t.layout
    return [[]] + [[layout[ix.first[i] + k - 1] for k in range(ix.size[i])]
                   for i in range(1, ix.p + 1)]


def in_labels_of(a, u):
    labels = {x for x, _ in a.in_edges[u]}
    if u == a.source:
        labels.add(-1)
    return labels


def indexed(a, po=None):
    if po is None:
        if a.is_deterministic():
            t = abwt_of_dfa(a)
            return build_index(t)
        _, po = brute_force_nfa_width(a, max_states=6)
    return build_index(build_abwt(a, chain_partition(po, a.source), po))


# -- golden ------------------------------------------------------------------


def test_golden_in_prime(running):
    ix = indexed(running)
    assert str(ix.in_prime) == "1001111000"
    assert [list(s) for s in ix.sigmas[1:]] == [[0, 1, 2], [0, 1]]
    assert ix.in_labels() == [0, 0, 0, 1, 2, 0, 1, 1, 1, 1]


def test_golden_queries(running):
    ix = indexed(running)
    assert ix.locate("a") == [1, 2, 4]
    assert ix.locate("aa") == [2, 4]
    assert not ix.exists("cc")
    assert ix.accepts_from_source("ab")[0].states == [5]
    assert ix.member("abaa")
    assert ix.count("") == 7
    assert ix.member("") == running.accepts(())


def test_empty_pattern_anchored(running):
    ix = indexed(running)
    res, _ = ix.accepts_from_source("")
    assert res.states == [running.source]


# -- primitives against direct counting ----------------------------------------


def check_primitives(a, ix):
    chains = chains_of(ix)
    edges = a.edges
    for i in range(1, ix.p + 1):
        q = chains[i]
        pos = {u: k for k, u in enumerate(q, 1)}
        for x in range(a.sigma):
            def inpre(k):
                return sum(1 for u, v, y in edges if y == x and v in pos and pos[v] <= k)

            for k in range(len(q) + 1):
                assert ix.in_prefix(i, k, x) == inpre(k)
            for h in range(len(edges) + 1):
                want = max(k for k in range(len(q) + 1) if inpre(k) <= h)
                assert ix.in_prefix_le(i, x, h) == want
            for z in range(len(edges) + 1):
                cand = [k for k in range(len(q) + 1) if inpre(k) >= z]
                assert ix.in_prefix_ge(i, x, z) == (min(cand) if cand else None)
            le = 0
            while le < len(q) and max(in_labels_of(a, q[le])) <= x:
                le += 1
            assert ix.max_label_le(i, x) == le
            below = [k for k, u in enumerate(q, 1) if min(in_labels_of(a, u)) < x]
            assert ix.min_label_ge(i, x) == (max(below) + 1 if below else 1)
            for j in range(1, ix.p + 1):
                src = chains[j]
                for k in range(len(src) + 1):
                    want = sum(1 for u, v, y in edges if y == x and v in pos and u in src[:k])
                    assert ix.out_prefix(j, k, i, x) == want


def test_primitives_running(running):
    check_primitives(running, indexed(running))


@settings(max_examples=40, deadline=None)
@given(dfas(max_n=9, max_sigma=3))
def test_primitives_dfa(d):
    check_primitives(d, indexed(d))


@settings(max_examples=40, deadline=None)
@given(nfas(max_n=5))
def test_primitives_nfa(a):
    check_primitives(a, indexed(a))


# -- search against simulation -------------------------------------------------


def check_queries(a, ix, words):
    chains = chains_of(ix)
    for w in words:
        want = subpath_states(a, w)
        res = ix.match_subpaths(w)
        assert set(res.states) == want and res.count == len(want)
        assert ix.exists(w) == bool(want)
        res, member = ix.accepts_from_source(w)
        reach = anchored_states(a, w)
        assert set(res.states) == reach
        assert member == a.accepts(w)
        s = ix.search(w, anchored=True)
        if reach:
            for i in range(1, ix.p + 1):
                here = reach & set(chains[i])
                if here:
                    assert set(chains[i][s.l[i]:s.r[i] - 1]) == here
        for state in (s, ix.search(w)):
            for i in range(1, ix.p + 1):
                assert 0 <= state.l[i] <= state.t[i] <= ix.size[i]
                if not state.empty():
                    assert state.l[i] < state.r[i]


def test_queries_running(running):
    check_queries(running, indexed(running), list(words_upto(3, 5)))


@settings(max_examples=50, deadline=None)
@given(dfas(max_n=15, max_sigma=3))
def test_queries_dfa(d):
    check_queries(d, indexed(d), list(words_upto(d.sigma, 4)))


@settings(max_examples=50, deadline=None)
@given(nfas(max_n=5))
def test_queries_nfa_brute_order(a):
    check_queries(a, indexed(a), list(words_upto(a.sigma, 4)))


@settings(max_examples=30, deadline=None)
@given(nfas(max_n=7))
def test_queries_nfa_greedy_order(a):
    check_queries(a, indexed(a, maximal_colex_order(a)), list(words_upto(a.sigma, 4)))


def test_queries_gallery():
    for a in [gallery.chain_nfa(), *gallery.twin_nfas(), gallery.staircase_dfa(3)]:
        check_queries(a, indexed(a), list(words_upto(a.sigma, 5)))


def test_long_random_patterns():
    rng = random.Random(11)
    from colex.generate import random_dfa

    d = random_dfa(rng, 40, 4, density=0.8)
    check_queries(d, indexed(d), random_words(rng, 4, 400, 12))


def test_unknown_symbol(running):
    from colex.errors import AlphabetMismatchError

    with pytest.raises(AlphabetMismatchError):
        indexed(running).locate("z")


def test_search_state_helpers():
    s = SearchState((0, 1, 0), (0, 3, 0), (0, 4, 1))
    assert s.ranges() == [(1, 2, 3)] and s.count() == 2 and not s.empty()


# -- persistence -----------------------------------------------------------------


def test_roundtrip(running, tmp_path):
    ix = indexed(running)
    path = tmp_path / "x.idx"
    ix.save(path)
    back = Index.load(path)
    assert back.locate("a") == [1, 2, 4]
    assert back.to_bytes() == ix.to_bytes()


def test_tampered_aux(running):
    t = abwt_of_dfa(running)
    with pytest.raises(FormatError):
        Index(t, in_prime=BitVector("1001111001"))
    with pytest.raises(FormatError):
        Index(t, sigmas=[IntDictionary([0, 1]), IntDictionary([0, 1])])
    data = indexed(running).to_bytes()
    with pytest.raises(FormatError):
        Index.from_bytes(b"ABWT" + data[4:])
    with pytest.raises(FormatError):
        Index.from_bytes(data[:-1])


@settings(max_examples=25, deadline=None)
@given(dfas(max_n=12), st.randoms(use_true_random=False))
def test_roundtrip_random(d, rng):
    ix = Index.from_bytes(indexed(d).to_bytes())
    check_queries(d, ix, random_words(rng, d.sigma, 30, 6))
