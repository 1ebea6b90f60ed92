import pytest

from littlesync import parse_program, unparse_program
from littlesync.canvas import index_canvas
from littlesync.evaluator import eval_program
from littlesync.substitution import (
    apply_substitution,
    subst_extend,
    subst_map,
    subst_of_program,
)


class TestSubstitutionAlgebra:
    def test_rightmost_binding_wins(self, wave):
        x0 = wave.resolve_loc("x0")
        rho = subst_extend(subst_of_program(wave), (x0, 1.0), (x0, 2.0))
        assert subst_map(rho)[x0] == 2.0

    def test_extend_appends(self, wave):
        x0 = wave.resolve_loc("x0")
        rho0 = subst_of_program(wave)
        rho = subst_extend(rho0, (x0, 7.0))
        assert len(rho) == len(rho0) + 1 and rho[-1] == (x0, 7.0)
        assert rho is not rho0  # the original is never mutated

    def test_program_substitution_order(self, wave):
        rho = subst_of_program(wave)
        assert [loc.id for loc, _ in rho] == sorted(loc.id for loc, _ in rho)


class TestApplySubstitution:
    def test_rewrites_target_literal(self, wave):
        x0 = wave.resolve_loc("x0")
        rho = subst_extend(subst_of_program(wave), (x0, 95.0))
        updated = apply_substitution(wave, rho)
        assert updated.rho0[updated.resolve_loc("x0")] == 95.0
        assert unparse_program(updated).startswith(
            "(def [x0 y0 w h sep amp] [95 120 20 90 30 60])"
        )

    def test_untouched_subtrees_are_shared(self, wave):
        x0 = wave.resolve_loc("x0")
        rho = subst_extend(subst_of_program(wave), (x0, 95.0))
        updated = apply_substitution(wave, rho)
        # prelude has no bindings here, so its defs are reused wholesale
        assert all(a is b for a, b in zip(updated.prelude_defs, wave.prelude_defs))

    def test_identity_keeps_text(self, wave):
        updated = apply_substitution(wave, subst_of_program(wave))
        assert unparse_program(updated) == unparse_program(wave)

    def test_annotations_preserved(self, prelude):
        program = parse_program("(def k 12!{3-30}) (svg [(rect 'r' k 2? 9 9)])", prelude)
        k = program.resolve_loc("k")
        rho = subst_extend(subst_of_program(program), (k, 15.0))
        text = unparse_program(apply_substitution(program, rho))
        assert "15!{3-30}" in text and "2?" in text

    def test_prelude_binding_updates_inmemory_prelude(self, wave):
        l0 = wave.loc_by_id(2)  # the 0 starting zeroTo
        rho = subst_extend(subst_of_program(wave), (l0, 1.0))
        updated = apply_substitution(wave, rho)
        # one fewer box: the index sequence now starts at 1
        assert len(index_canvas(eval_program(updated)).shapes) == 11
        # the user-visible source text is unchanged, only the prelude moved
        assert unparse_program(updated) == unparse_program(wave)

    def test_new_program_evaluates_under_new_bindings(self, wave):
        sep = wave.resolve_loc("sep")
        rho = subst_extend(subst_of_program(wave), (sep, 45.0))
        canvas = index_canvas(eval_program(apply_substitution(wave, rho)))
        assert canvas.shapes[1].slots["x"].value == 95.0  # 50 + 1*45

    def test_locations_keep_identity(self, wave):
        sep = wave.resolve_loc("sep")
        rho = subst_extend(subst_of_program(wave), (sep, 45.0))
        updated = apply_substitution(wave, rho)
        assert updated.resolve_loc("sep") is sep
