import random

import pytest
from hypothesis import given, settings, strategies as st

from equation_oracle import addition_case, make_locs, spine_case
from littlesync.solver import (
    Fail,
    FailReason,
    count_plus,
    in_fragment_a,
    in_fragment_b,
    solve,
    solve_a,
    solve_b,
    solved,
)
from littlesync.syntax import Location
from littlesync.values import TLoc, TOp, eval_trace


def locs(*values):
    table = {
        Location(id=i + 1, origin="user", name=chr(ord("a") + i)): float(v)
        for i, v in enumerate(values)
    }
    return list(table), table


class TestCountPlus:
    def test_leaf_is_the_location(self):
        (a,), rho = locs(5)
        assert count_plus(rho, a, TLoc(a)) == (1, 0.0)

    def test_leaf_is_another_location(self):
        (a, b), rho = locs(5, 7)
        assert count_plus(rho, a, TLoc(b)) == (0, 7.0)

    def test_sums_recurse(self):
        (a, b), rho = locs(5, 7)
        t = TOp("+", (TLoc(a), TOp("+", (TLoc(a), TLoc(b)))))
        assert count_plus(rho, a, t) == (2, 7.0)

    def test_other_operators_leave_the_fragment(self):
        (a, b), rho = locs(5, 7)
        t = TOp("*", (TLoc(a), TLoc(b)))
        res = count_plus(rho, a, t)
        assert isinstance(res, Fail) and res.reason is FailReason.NOT_IN_FRAGMENT


class TestFragments:
    def test_fragment_a(self):
        (a, b), _ = locs(1, 2)
        assert in_fragment_a(TOp("+", (TLoc(a), TLoc(b))))
        assert not in_fragment_a(TOp("*", (TLoc(a), TLoc(b))))

    def test_fragment_b_counts_occurrences(self):
        (a, b), _ = locs(1, 2)
        t = TOp("*", (TLoc(a), TLoc(b)))
        assert in_fragment_b(t, a)
        assert not in_fragment_b(TOp("+", (TLoc(a), TLoc(a))), a)
        assert not in_fragment_b(TLoc(b), a)


class TestSolveA:
    def test_linear(self):
        (a, b), rho = locs(5, 7)
        t = TOp("+", (TLoc(a), TOp("+", (TLoc(a), TLoc(b)))))
        assert solve_a(rho, a, 27.0, t) == 10.0

    def test_absent_location(self):
        (a, b), rho = locs(5, 7)
        res = solve_a(rho, a, 3.0, TLoc(b))
        assert isinstance(res, Fail) and res.reason is FailReason.LOC_ABSENT


class TestSolveB:
    def test_single_occurrence_peeling(self):
        (a, b), rho = locs(5.0, 2.0)
        # (a + 3) * b = n  ->  a = n/b - 3
        three = Location(id=99, origin="user")
        rho = {**rho, three: 3.0}
        t = TOp("*", (TOp("+", (TLoc(a), TLoc(three))), TLoc(b)))
        assert solve_b(rho, a, 16.0, t) == pytest.approx(5.0)

    def test_multiple_occurrences_always_fail(self):
        (a,), rho = locs(5)
        t = TOp("+", (TLoc(a), TLoc(a)))
        res = solve_b(rho, a, 10.0, t)
        assert isinstance(res, Fail)
        assert res.reason is FailReason.MULTIPLE_OCCURRENCES

    def test_subtraction_right_operand(self):
        # (10 - X) = 3 -> X = 7
        (a, c), rho = locs(1.0, 10.0)
        t = TOp("-", (TLoc(c), TLoc(a)))
        assert solve_b(rho, a, 3.0, t) == 7.0

    def test_subtraction_left_operand(self):
        # (X - 10) = 3 -> X = 13
        (a, c), rho = locs(1.0, 10.0)
        t = TOp("-", (TLoc(a), TLoc(c)))
        assert solve_b(rho, a, 3.0, t) == 13.0

    def test_trig_inverses_round_trip(self):
        (a,), rho = locs(0.3)
        for op in ("cos", "sin", "arccos", "arcsin"):
            t = TOp(op, (TLoc(a),))
            res = solve_b(rho, a, 0.5, t)
            assert solved(res)
            assert eval_trace({a: res}, t) == pytest.approx(0.5, abs=1e-12)

    def test_sqrt(self):
        (a,), rho = locs(4.0)
        assert solve_b(rho, a, 3.0, TOp("sqrt", (TLoc(a),))) == 9.0

    def test_sqrt_negative_target_is_domain_error(self):
        (a,), rho = locs(4.0)
        res = solve_b(rho, a, -1.0, TOp("sqrt", (TLoc(a),)))
        assert isinstance(res, Fail) and res.reason is FailReason.DOMAIN_ERROR

    def test_rounding_ops_not_invertible(self):
        (a,), rho = locs(4.2)
        for op in ("round", "floor"):
            res = solve_b(rho, a, 5.0, TOp(op, (TLoc(a),)))
            assert isinstance(res, Fail)
            assert res.reason is FailReason.NON_INVERTIBLE_OP

    def test_mod_not_invertible(self):
        (a, c), rho = locs(7.0, 3.0)
        res = solve_b(rho, a, 1.0, TOp("mod", (TLoc(a), TLoc(c))))
        assert isinstance(res, Fail)
        assert res.reason is FailReason.NON_INVERTIBLE_OP

    def test_multiply_by_zero_is_domain_error(self):
        (a, z), rho = locs(5.0, 0.0)
        res = solve_b(rho, a, 50.0, TOp("*", (TLoc(z), TLoc(a))))
        assert isinstance(res, Fail) and res.reason is FailReason.DOMAIN_ERROR

    def test_divide_solves_both_sides(self):
        (a, c), rho = locs(5.0, 2.0)
        assert solve_b(rho, a, 4.0, TOp("/", (TLoc(a), TLoc(c)))) == 8.0
        assert solve_b(rho, a, 4.0, TOp("/", (TLoc(c), TLoc(a)))) == 0.5

    def test_pow_both_sides(self):
        (a, c), rho = locs(2.0, 3.0)
        assert solve_b(rho, a, 8.0, TOp("pow", (TLoc(a), TLoc(c)))) == pytest.approx(2.0)
        assert solve_b(rho, a, 9.0, TOp("pow", (TLoc(c), TLoc(a)))) == pytest.approx(2.0)


class TestHybridSolve:
    def test_counting_first(self):
        (a, b), rho = locs(5, 7)
        t = TOp("+", (TLoc(a), TLoc(a)))
        assert solve(rho, a, 12.0, t) == 6.0  # solve_b alone would refuse

    def test_peeling_reenters_counting(self):
        # X occurs twice inside a subtree reached only by peeling
        (a, c), rho = locs(5.0, 3.0)
        t = TOp("*", (TOp("+", (TLoc(a), TLoc(a))), TLoc(c)))
        res = solve(rho, a, 30.0, t)
        assert res == 5.0

    def test_split_across_multiplication_fails(self):
        (a,), rho = locs(5.0)
        t = TOp("*", (TLoc(a), TLoc(a)))
        res = solve(rho, a, 36.0, t)
        assert isinstance(res, Fail)
        assert res.reason is FailReason.MULTIPLE_OCCURRENCES

    def test_wave_four_locations(self, wave, wave_canvas):
        """Dragging the third box to x=155 solves for each of the four
        unfrozen locations in its trace."""
        trace = wave_canvas.shapes[2].slots["x"].trace
        rho = dict(wave.rho0)
        expected = {
            wave.resolve_loc("x0"): 95.0,
            wave.resolve_loc("sep"): 52.5,
            wave.loc_by_id(2): 1.5,
            wave.loc_by_id(1): 1.75,
        }
        for loc, value in expected.items():
            res = solve(rho, loc, 155.0, trace)
            assert solved(res) and abs(res - value) <= 1e-9

    def test_zero_times_sep_is_domain_error(self, wave, wave_canvas):
        """The first box's x-offset term (* 0 sep) cannot reach 50 by
        changing sep."""
        trace = wave_canvas.shapes[0].slots["x"].trace
        offset = trace.args[1]  # (* l0 sep)
        res = solve(dict(wave.rho0), wave.resolve_loc("sep"), 50.0, offset)
        assert isinstance(res, Fail) and res.reason is FailReason.DOMAIN_ERROR


class TestRandomizedOracle:
    def test_additions(self):
        rng = random.Random(11)
        for _ in range(250):
            c = addition_case(rng)
            res = solve(c.rho, c.loc, c.target, c.trace)
            assert solved(res)
            rho2 = dict(c.rho)
            rho2[c.loc] = res
            assert eval_trace(rho2, c.trace) == pytest.approx(c.target, rel=1e-9, abs=1e-9)

    def test_spines(self):
        rng = random.Random(12)
        successes = 0
        for _ in range(250):
            c = spine_case(rng)
            res = solve(c.rho, c.loc, c.target, c.trace)
            if solved(res):
                successes += 1
                rho2 = dict(c.rho)
                rho2[c.loc] = res
                got = eval_trace(rho2, c.trace)
                assert abs(got - c.target) <= 1e-6 * max(1.0, abs(c.target))
        assert successes >= 200

    def test_a_and_b_agree_on_shared_fragment(self):
        rng = random.Random(13)
        for _ in range(250):
            c = addition_case(rng, distinct_leaves=True)
            a = solve_a(c.rho, c.loc, c.target, c.trace)
            b = solve_b(c.rho, c.loc, c.target, c.trace)
            assert solved(a) and solved(b)
            assert abs(a - b) <= 1e-9


@settings(max_examples=200, deadline=None)
@given(
    st.integers(min_value=1, max_value=4),
    st.floats(min_value=-100, max_value=100),
    st.floats(min_value=-100, max_value=100, allow_nan=False),
)
def test_linear_solutions_reevaluate(count, other, target):
    """c*X + s = n: the counting solver's answer always lands on n."""
    (a, b), rho = locs(1.0, other)
    t = TLoc(a)
    for _ in range(count - 1):
        t = TOp("+", (t, TLoc(a)))
    t = TOp("+", (t, TLoc(b)))
    res = solve_a(rho, a, target, t)
    assert solved(res)
    rho2 = dict(rho)
    rho2[a] = res
    assert eval_trace(rho2, t) == pytest.approx(target, rel=1e-9, abs=1e-9)
