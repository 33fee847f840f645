import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bncontrol import (
    Control,
    ParseError,
    apply_control,
    evaluate,
    flips_for,
    format_network,
    hamming,
    parse_network,
    restrict,
    state_from_string,
    state_to_string,
)
from bncontrol.model import And, Const, Not, Or, Var, evaluate_all, force_control
from bncontrol.oracle import random_network

from .conftest import bits

S = state_from_string


class TestParse:
    def test_three_node_network(self, tn):
        assert tn.names == ("x1", "x2", "x3")
        assert tn.functions[0] == Var(1)
        assert tn.functions[1] == Var(0)
        assert tn.functions[2] == And((Var(1), Var(2)))

    def test_constant_network(self):
        g = parse_network("a = 1")
        assert g.n == 1
        assert g.functions == (Const(1),)

    def test_undeclared_variable(self):
        with pytest.raises(ParseError, match="b"):
            parse_network("a = b")

    def test_error_position(self):
        with pytest.raises(ParseError) as info:
            parse_network("a = a\nb = a & & b\n")
        assert info.value.line == 2
        assert info.value.column > 1

    def test_duplicate_definition(self):
        with pytest.raises(ParseError, match="duplicate"):
            parse_network("a = 1\na = 0\n")

    def test_empty_model(self):
        with pytest.raises(ParseError):
            parse_network("# nothing here\n")

    def test_missing_separator(self):
        with pytest.raises(ParseError) as info:
            parse_network("a = 1\nb 0\n")
        assert info.value.line == 2

    def test_precedence(self):
        g = parse_network("a = !a | b & c\nb = b\nc = c\n")
        assert g.functions[0] == Or((Not(Var(0)), And((Var(1), Var(2)))))

    def test_boolnet_layout(self, tn):
        text = "targets, factors\nx1, x2\nx2, x1\nx3, x2 & x3\n"
        assert parse_network(text) == tn

    def test_comments_and_blank_lines(self, tn):
        text = "# Example\n\nx1 = x2   # copy\nx2 = x1\n\nx3 = x2 & x3\n"
        assert parse_network(text) == tn


class TestEvaluate:
    def test_conjunction(self, tn):
        f3 = tn.functions[2]
        assert evaluate(f3, S("011")) == 1
        assert evaluate(f3, S("010")) == 0

    def test_copy(self, tn):
        assert evaluate(tn.functions[0], S("010")) == 1

    def test_accepts_bit_strings(self, tn):
        assert evaluate(tn.functions[2], "011") == 1

    def test_vectorised_matches_scalar(self):
        import numpy as np

        g = random_network(5, seed=3)
        codes = np.arange(32)
        for f in g.functions:
            assert list(evaluate_all(f, codes)) == [evaluate(f, int(s)) for s in codes]


class TestControls:
    def test_apply(self):
        assert apply_control(Control(one={0, 1}), S("000")) == S("110")

    def test_apply_empty(self):
        for s in range(8):
            assert apply_control(Control(), s) == s

    def test_apply_inconsistent(self):
        with pytest.raises(ValueError):
            apply_control(Control(zero={0}), S("000"))

    def test_both_values_rejected(self):
        with pytest.raises(ValueError):
            Control(zero={1}, one={1})

    def test_flips_for(self):
        assert flips_for(S("000"), {0}) == Control(one={0})
        assert flips_for(S("110"), {2}) == Control(one={2})
        assert flips_for(S("110"), {0, 1}) == Control(zero={0, 1})

    def test_minus_and_describe(self):
        c = Control(zero={2}, one={0, 1})
        assert c.minus({1, 2}) == Control(one={0})
        assert c.describe(("x1", "x2", "x3")) == "{x3=0, x1=1, x2=1}"

    @given(st.integers(0, 2**6 - 1), st.sets(st.integers(0, 5)))
    def test_flip_roundtrip(self, s, nodes):
        c = flips_for(s, nodes)
        t = apply_control(c, s)
        assert hamming(s, t) == len(nodes)
        assert force_control(c, s) == t
        assert apply_control(flips_for(t, nodes), t) == s


class TestRestrict:
    def test_constants(self, tn):
        r = restrict(tn, Control(one={0}))
        assert r.functions == (Const(1), Var(0), And((Var(1), Var(2))))

    def test_empty_control_is_identity(self, tn):
        r = restrict(tn, Control())
        assert r.functions == tn.functions
        assert r.subspace() == list(range(8))

    def test_subspace(self, tn):
        r = restrict(tn, Control(zero={2}))
        assert set(r.subspace()) == bits("000", "010", "100", "110")

    def test_unknown_node(self, tn):
        with pytest.raises(ValueError):
            restrict(tn, Control(one={5}))


class TestHamming:
    def test_examples(self):
        assert hamming(S("000"), S("110")) == 2
        assert hamming(S("101"), S("101")) == 0
        assert hamming(S("101"), S("010")) == 3

    @pytest.mark.parametrize("n", range(1, 7))
    def test_metric(self, n):
        space = range(1 << n)
        for s, t in itertools.product(space, space):
            d = hamming(s, t)
            assert (d == 0) == (s == t)
            assert d == hamming(t, s)
        if n <= 4:
            for s, t, u in itertools.product(space, space, space):
                assert hamming(s, u) <= hamming(s, t) + hamming(t, u)


class TestStrings:
    def test_node_order(self):
        assert S("110") == 0b011
        assert state_to_string(0b011, 3) == "110"

    @given(st.integers(1, 12).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2**n - 1))))
    def test_roundtrip(self, pair):
        n, s = pair
        assert S(state_to_string(s, n)) == s

    def test_rejects_other_characters(self):
        with pytest.raises(ValueError):
            S("1a0")


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(0, 10**6))
def test_format_parse_roundtrip(n, seed):
    g = random_network(n, seed)
    assert parse_network(format_network(g)) == g
