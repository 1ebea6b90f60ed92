import pytest

from littlesync import parse_little, parse_program
from littlesync.errors import LittleSyntaxError
from littlesync.parser import parse_expression
from littlesync.syntax import (
    ECase,
    ECons,
    ENil,
    ENum,
    EOp,
    EStr,
    EVar,
)


def user_locs(program):
    return [loc for loc in program.locations() if loc.origin == "user"]


class TestLocations:
    def test_preorder_ids_prelude_first(self, prelude):
        program = parse_program("(svg [(rect 'red' 10 20 30 40)])", prelude)
        prelude_ids = [l.id for l in program.locations() if l.origin == "prelude"]
        uids = [l.id for l in user_locs(program)]
        assert prelude_ids == list(range(1, len(prelude_ids) + 1))
        assert uids == list(range(len(prelude_ids) + 1, len(prelude_ids) + 5))

    def test_user_literal_order_is_source_order(self, prelude):
        program = parse_program("(svg [(rect 'red' 10 20 30 40)])", prelude)
        assert [program.rho0[l] for l in user_locs(program)] == [10, 20, 30, 40]

    def test_aliases_from_list_defs(self, wave):
        assert [l.name for l in user_locs(wave)] == [
            "x0",
            "y0",
            "w",
            "h",
            "sep",
            "amp",
            "n",
        ]

    def test_context_is_enclosing_definition(self, wave):
        x0 = wave.resolve_loc("x0")
        assert x0.context == "x0" or x0.context  # alias defs carry their own name

    def test_resolve_by_name_and_id(self, wave):
        sep = wave.resolve_loc("sep")
        assert wave.resolve_loc(sep.id) is sep
        with pytest.raises(KeyError):
            wave.resolve_loc("nonexistent")

    def test_find_literal(self, prelude):
        program = parse_program("(def k 17) (svg [(rect 'red' k k 5 5)])", prelude)
        loc = program.find_literal(17.0)
        assert loc.name == "k"
        with pytest.raises(KeyError):
            program.find_literal(5.0)  # two matches


class TestAnnotations:
    def test_frozen_and_thawed_flags(self, prelude):
        program = parse_program("(svg [(rect 'red' 1! 2? 3 4)])", prelude)
        lits = {program.rho0[l]: program.literals[l] for l in user_locs(program)}
        assert lits[1.0].frozen and not lits[1.0].thawed
        assert lits[2.0].thawed and not lits[2.0].frozen
        assert not lits[3.0].frozen and not lits[3.0].thawed

    def test_range_annotation(self, wave):
        n = wave.resolve_loc("n")
        lit = wave.literals[n]
        assert lit.frozen and lit.range == (3.0, 30.0)

    def test_range_requires_numeric_bounds(self, prelude):
        with pytest.raises(LittleSyntaxError, match="range annotation bounds"):
            parse_program("(svg [(rect 'red' 1{a-b} 2 3 4)])", prelude)

    def test_default_frozen_set(self, wave):
        frozen = wave.frozen_locs()
        names = {l.name for l in frozen if l.origin == "user"}
        assert names == {"n"}  # the only ! literal
        assert all(l in frozen for l in wave.locations() if l.origin == "prelude")

    def test_freeze_default_thaws_only_question(self, prelude):
        program = parse_program("(svg [(rect 'red' 1! 2? 3 4)])", prelude)
        frozen = program.frozen_locs(freeze_default=True)
        by_value = {program.rho0[l]: (l in frozen) for l in user_locs(program)}
        assert by_value == {1.0: True, 2.0: False, 3.0: True, 4.0: True}

    def test_unfreeze_prelude_keeps_explicit_bangs(self, wave):
        frozen = wave.frozen_locs(prelude_frozen=False)
        prelude_frozen = [l for l in frozen if l.origin == "prelude"]
        # twoPi's 2! (and friends) stay frozen; unannotated prelude literals thaw
        assert prelude_frozen
        assert all(wave.literals[l].frozen for l in prelude_frozen)
        thawed = [
            l
            for l in wave.locations()
            if l.origin == "prelude" and l not in frozen
        ]
        assert thawed


class TestSyntaxForms:
    def test_negative_number_vs_subtraction(self):
        e, rho = parse_expression("(- -1 2)")
        assert isinstance(e, EOp) and e.op == "-"
        assert sorted(rho.values()) == [-1.0, 2.0]

    def test_string_literals_and_comments(self):
        e, _ = parse_expression("; leading comment\n'hi there' ; trailing")
        assert isinstance(e, EStr) and e.value == "hi there"

    def test_if_sugar_is_case_on_booleans(self):
        e, _ = parse_expression("(if (< 1 2) 10 20)")
        assert isinstance(e, ECase)
        assert len(e.branches) == 2

    def test_list_sugar(self):
        e, _ = parse_expression("[1 2]")
        assert isinstance(e, ECons)
        assert isinstance(e.tail, ECons) and isinstance(e.tail.tail, ENil)

    def test_list_sugar_with_tail(self):
        e, _ = parse_expression("[1 | rest]")
        assert isinstance(e, ECons) and isinstance(e.tail, EVar)

    def test_lambda_spellings(self):
        for spelling in ("(\\x x)", "(λx x)"):
            e, _ = parse_expression(spelling)
            assert type(e).__name__ == "EFun"

    def test_multi_parameter_lambda_curries(self):
        e, _ = parse_expression("(\\(a b) a)")
        assert type(e).__name__ == "EFun"
        assert type(e.body).__name__ == "EFun"

    def test_operator_partial_application(self):
        e, _ = parse_expression("(+ 1)")
        assert type(e).__name__ == "EApp"

    def test_operator_oversaturation(self):
        # (+ 1 2 3) applies the sum of the first two to the third
        e, _ = parse_expression("(+ 1 2 3)")
        assert type(e).__name__ == "EApp"
        assert isinstance(e.fn, EOp)

    def test_identifier_with_prime(self):
        e, _ = parse_expression("x0'")
        assert isinstance(e, EVar) and e.name == "x0'"


class TestErrors:
    def test_positions_in_messages(self, prelude):
        with pytest.raises(LittleSyntaxError, match=r"^2:"):
            parse_program("(svg\n  ])", prelude)

    def test_unbalanced(self, prelude):
        with pytest.raises(LittleSyntaxError):
            parse_program("(svg [", prelude)

    def test_duplicate_pattern_variable(self):
        with pytest.raises(LittleSyntaxError, match="duplicate"):
            parse_expression("(\\[a a] a)")

    def test_empty_program(self, prelude):
        with pytest.raises(LittleSyntaxError):
            parse_program("", prelude)

    def test_stray_close(self, prelude):
        with pytest.raises(LittleSyntaxError):
            parse_program("(svg []))", prelude)


class TestStability:
    def test_ids_stable_across_reparse(self, wave, prelude):
        again = parse_program(wave.source, prelude)
        assert [(l.id, l.name, l.origin) for l in wave.locations()] == [
            (l.id, l.name, l.origin) for l in again.locations()
        ]

    def test_custom_prelude(self):
        program = parse_program(
            "(svg [(box 1 2)])",
            "(def box (\\(x y) ['rect' [['x' x] ['y' y]] []]))",
        )
        assert len(program.locations()) == 2
