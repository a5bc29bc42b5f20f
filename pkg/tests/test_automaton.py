import pytest
from hypothesis import given, settings

from colex import gallery
from colex.automaton import Automaton, canonical, isomorphic, minimize, parse, serialize
from colex.errors import (
    AlphabetMismatchError,
    EmptyLanguageError,
    FormatError,
    NotDeterministicError,
)
from colex.powerset import powerset_construct

from oracles import words_upto
from strategies import dfas, nfas

RUNNING_TEXT = """\
# seven-state example
alphabet a b c
states 7
source 1
finals 4 5 6
edge 1 2 a
edge 2 6 b
edge 6 3 a
edge 6 7 b
edge 3 5 a
edge 5 3 a
edge 5 7 b
edge 7 4 b
edge 7 4 c
edge 4 7 b
"""


def test_parse_matches_gallery(running):
    assert parse(RUNNING_TEXT) == running


def test_serialize_is_canonical(running):
    text = serialize(running)
    assert parse(text) == running
    assert serialize(parse(text)) == text


@given(nfas(max_n=7, max_sigma=4))
def test_roundtrip_random(a):
    text = serialize(a)
    assert parse(text) == a
    assert serialize(parse(text)) == text


@pytest.mark.parametrize("text, fragment", [
    ("alphabet a\nstates 2\nsource 1\nsource 2\n", "initial"),
    ("alphabet a\nstates 2\nsource 1\nedge 1 2 b\n", "unknown symbol"),
    ("alphabet a\nstates 2\nsource 1\nedge 1 2 a\nedge 1 2 a\n", "duplicate edge"),
    ("alphabet a\nstates 2\nsource 1\nedge 1 3 a\n", "outside"),
    ("alphabet a\nstates 2\nsource 1\nedge 1 2\n", "expected"),
    ("alphabet a\nstates two\nsource 1\n", "integer"),
    ("alphabet a\nstates 2\n", "missing"),
    ("alphabet a a\nstates 1\nsource 1\n", "duplicate"),
    ("alphabet a\nstates 1\nsource 1\nbogus 3\n", "unknown directive"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(FormatError, match=fragment):
        parse(text)


def test_parse_error_reports_line():
    with pytest.raises(FormatError) as info:
        parse("alphabet a\nstates 2\nsource 1\nedge 1 2 z\n")
    assert info.value.line == 4


def test_source_need_not_be_first():
    a = parse("alphabet a\nstates 2\nsource 2\nfinals 1\nedge 2 1 a\n")
    assert a.source == 1
    b = a.with_source_first()
    assert b.source == 0 and b.accepts("a") and not b.accepts("")


def test_trim_and_reports():
    a = Automaton.from_symbols("ab", 4, 0, [1], [(0, 1, "a"), (0, 2, "b"), (3, 1, "a")])
    assert not a.is_trim()
    assert a.reachable() == {0, 1, 2}
    assert a.coreachable() == {0, 1, 3}
    t = a.trim()
    assert t.n == 2 and t.is_trim() and t.accepts("a")


def test_empty_language_rejected():
    a = Automaton.from_symbols("a", 2, 0, [], [(0, 1, "a")])
    with pytest.raises(EmptyLanguageError):
        a.trim()
    with pytest.raises(EmptyLanguageError):
        minimize(a)


def test_delta_requires_determinism():
    a = gallery.chain_nfa()
    assert not a.is_deterministic()
    with pytest.raises(NotDeterministicError):
        a.delta
    with pytest.raises(NotDeterministicError):
        minimize(a)


def test_encode():
    a = gallery.running_dfa()
    assert a.encode("abc") == (0, 1, 2)
    assert a.encode(["a", 2]) == (0, 2)
    with pytest.raises(AlphabetMismatchError):
        a.encode("abz")
    multi = Automaton(("ab", "c"), 1, 0, [0], [(0, 0, 0)])
    assert multi.encode("ab c ab") == (0, 1, 0)
    assert multi.decode((0, 1)) == "ab c"


def test_minimize_fan_variants():
    # the split variants merge back onto the width-3 DFA
    d1 = gallery.fan_dfa()
    assert minimize(d1) == canonical(d1)
    assert isomorphic(minimize(gallery.fan_dfa_split_k()), d1)
    assert isomorphic(minimize(gallery.fan_dfa_split_h()), d1)


def test_staircase_is_minimum():
    for n in range(1, 6):
        d = gallery.staircase_dfa(n)
        assert minimize(d).n == 3 * n


def test_isomorphic_detects_difference(running):
    other = Automaton(running.alphabet, running.n, running.source,
                      running.finals - {3}, running.edges)
    assert not isomorphic(running, other)
    perm = running.permute([6, 5, 4, 3, 2, 1, 0])
    assert isomorphic(running, perm)


@settings(max_examples=60)
@given(dfas(max_n=7))
def test_minimize_preserves_language(d):
    m = minimize(d)
    assert m.n <= d.n
    for w in words_upto(d.sigma, 5):
        assert m.accepts(w) == d.accepts(w)
    assert minimize(m) == m


@settings(max_examples=60)
@given(nfas(max_n=5))
def test_minimum_dfa_has_no_equivalent_states(a):
    m = minimize(powerset_construct(a).dfa)
    # distinct states must be separated by some short word
    sigs = set()
    for u in range(m.n):
        sig = tuple(
            bool(m.finals & _run_from(m, u, w)) for w in words_upto(m.sigma, m.n)
        )
        sigs.add(sig)
    assert len(sigs) == m.n


def _run_from(d, u, w):
    for x in w:
        u = d.delta[u].get(x)
        if u is None:
            return set()
    return {u}
