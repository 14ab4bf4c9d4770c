"""Tests for scenario parsing, serialization, and the solve entry point.

The canonical-form round trip is asserted as string equality, so any change
to the serializer that is not mirrored in the parser shows up immediately.
"""

from __future__ import annotations

import numpy as np
import pytest

from spinerod.errors import ScenarioParseError
from spinerod.rod import GRAVITY
from spinerod.scenario import (
    DEFAULT_GROUP,
    ResultRecord,
    Scenario,
    parse_scenario,
    serialize_scenario,
    solve_scenario,
)
from spinerod.spine import SpineConfig


class TestDefaults:
    def test_empty_text_gives_prototype(self):
        sc = parse_scenario("")
        assert sc.material.E == pytest.approx(0.507147e6)
        assert sc.material.L == 0.4
        assert sc.spine.length == 0.0
        assert sc.gravity_enabled
        np.testing.assert_array_equal(sc.g_dir, [0.0, 0.0, 1.0])
        np.testing.assert_array_equal(sc.pressures.pressures, np.zeros(9))
        np.testing.assert_allclose(sc.external.force, [0.0, 0.0, 0.053 * GRAVITY])
        assert sc.integration.n_points == 100
        assert sc.tol == 1e-8
        assert sc.max_iter == 50

    def test_comments_and_blank_lines_are_ignored(self):
        sc = parse_scenario(
            "# a scenario\n"
            "\n"
            "spine.length = 0.10  # ten centimetres\n"
            "   \n"
            "gravity = off\n"
        )
        assert sc.spine.length == 0.10
        assert not sc.gravity_enabled

    def test_spaces_around_equals_are_optional(self):
        sc = parse_scenario("spine.length=0.05")
        assert sc.spine.length == 0.05

    def test_default_tip_force_follows_gravity_direction(self):
        sc = parse_scenario("gravity.direction = 0 0 -1")
        np.testing.assert_allclose(sc.external.force, [0.0, 0.0, -0.053 * GRAVITY])


class TestPressureShorthand:
    def test_pressure_alone_uses_default_group(self):
        sc = parse_scenario("pressure = 150e3")
        p = sc.pressures.pressures
        assert DEFAULT_GROUP == 1
        np.testing.assert_array_equal(p[3:6], [150e3] * 3)
        np.testing.assert_array_equal(p[[0, 1, 2, 6, 7, 8]], np.zeros(6))

    @pytest.mark.parametrize("group,chambers", [(0, [0, 1, 2]), (2, [6, 7, 8])])
    def test_explicit_group_selects_triplet(self, group, chambers):
        sc = parse_scenario(f"group = {group}\npressure = 80e3")
        p = sc.pressures.pressures
        for i in range(9):
            assert p[i] == (80e3 if i in chambers else 0.0)

    def test_full_pressure_vector(self):
        sc = parse_scenario("pressures = 1 2 3 4 5 6 7 8 9")
        np.testing.assert_array_equal(sc.pressures.pressures, np.arange(1.0, 10.0))

    def test_group_without_pressure_is_an_error(self):
        with pytest.raises(ScenarioParseError) as err:
            parse_scenario("group = 1")
        assert err.value.key == "group"

    def test_shorthand_and_vector_are_mutually_exclusive(self):
        with pytest.raises(ScenarioParseError):
            parse_scenario("pressure = 1e3\npressures = 0 0 0 0 0 0 0 0 0")

    def test_invalid_group_is_attributed(self):
        with pytest.raises(ScenarioParseError) as err:
            parse_scenario("group = 5\npressure = 1e3")
        assert err.value.key == "group"

    def test_pressure_over_ceiling_is_attributed(self):
        with pytest.raises(ScenarioParseError) as err:
            parse_scenario("pressure = 500e3")
        assert err.value.key == "pressure"


class TestParseErrors:
    def test_unknown_key(self):
        with pytest.raises(ScenarioParseError) as err:
            parse_scenario("bogus.key = 1")
        assert err.value.key == "bogus.key"
        assert err.value.line_no == 1

    def test_duplicate_key_reports_second_line(self):
        with pytest.raises(ScenarioParseError) as err:
            parse_scenario("material.E = 2e5\nspine.length = 0.1\nmaterial.E = 3e5")
        assert err.value.key == "material.E"
        assert err.value.line_no == 3

    def test_missing_value(self):
        with pytest.raises(ScenarioParseError) as err:
            parse_scenario("material.E =")
        assert err.value.key == "material.E"

    def test_missing_equals_sign(self):
        with pytest.raises(ScenarioParseError) as err:
            parse_scenario("just some words")
        assert err.value.line_no == 1

    def test_non_numeric_value(self):
        with pytest.raises(ScenarioParseError) as err:
            parse_scenario("material.E = soft")
        assert err.value.key == "material.E"

    def test_bad_boolean(self):
        with pytest.raises(ScenarioParseError) as err:
            parse_scenario("gravity = sideways")
        assert err.value.key == "gravity"

    def test_vector_needs_three_components(self):
        with pytest.raises(ScenarioParseError) as err:
            parse_scenario("external.force = 1 2")
        assert err.value.key == "external.force"

    def test_malformed_table_token(self):
        with pytest.raises(ScenarioParseError) as err:
            parse_scenario("spine.modulus_table = 0.05-318e3")
        assert err.value.key == "spine.modulus_table"

    def test_negative_material_value_is_attributed(self):
        with pytest.raises(ScenarioParseError) as err:
            parse_scenario("material.E = -1.0")
        assert err.value.key == "material.E"

    def test_spine_beyond_envelope(self):
        with pytest.raises(ScenarioParseError) as err:
            parse_scenario("spine.length = 0.9")
        assert err.value.key == "spine.length"

    def test_zero_gravity_direction(self):
        with pytest.raises(ScenarioParseError) as err:
            parse_scenario("gravity.direction = 0 0 0")
        assert err.value.key == "gravity.direction"

    def test_grid_too_coarse(self):
        with pytest.raises(ScenarioParseError) as err:
            parse_scenario("grid.n = 5")
        assert err.value.key == "grid.n"

    def test_non_positive_tolerance(self):
        with pytest.raises(ScenarioParseError):
            parse_scenario("solver.tol = 0")


class TestAssembly:
    def test_material_overrides_flow_through(self):
        sc = parse_scenario("material.E = 1.0e6\nmaterial.L = 0.5")
        assert sc.material.E == 1.0e6
        assert sc.material.G == pytest.approx(1.0e6 / 3.0)
        assert sc.material.L == 0.5

    def test_gravity_direction_is_normalized(self):
        sc = parse_scenario("gravity.direction = 0 0 2")
        np.testing.assert_allclose(sc.g_dir, [0.0, 0.0, 1.0])

    def test_custom_modulus_table(self):
        sc = parse_scenario("spine.modulus_table = 0.1:1e6 0.2:2e6\nspine.length = 0.2")
        assert sc.spine.modulus_table == ((0.1, 1e6), (0.2, 2e6))
        assert sc.stiffness_profile().boundary_s == 0.2

    def test_custom_a_effect_table(self):
        sc = parse_scenario("spine.a_effect_table = 0.0:2.0 0.3:2.0")
        A_norm = np.pi * sc.material.r_c**2
        assert sc.effective_area() == pytest.approx(2.0 * A_norm)

    def test_grid_and_solver_settings(self):
        sc = parse_scenario("grid.n = 200\ngrid.reorthonormalize_every = 4\n"
                            "solver.tol = 1e-10\nsolver.max_iter = 12")
        assert sc.integration.n_points == 200
        assert sc.integration.reorthonormalize_every == 4
        assert sc.tol == 1e-10
        assert sc.max_iter == 12


class TestSerialize:
    def test_default_round_trip_is_byte_identical(self):
        text = serialize_scenario(parse_scenario(""))
        assert serialize_scenario(parse_scenario(text)) == text

    def test_custom_round_trip_is_byte_identical(self):
        sc = parse_scenario(
            "spine.length = 0.25\n"
            "group = 2\n"
            "pressure = 175e3\n"
            "gravity = off\n"
            "grid.n = 150\n"
            "solver.tol = 2.5e-9\n"
        )
        text = serialize_scenario(sc)
        again = parse_scenario(text)
        assert serialize_scenario(again) == text
        assert again.spine.length == 0.25
        assert not again.gravity_enabled
        np.testing.assert_array_equal(again.pressures.pressures, sc.pressures.pressures)

    def test_serialized_text_has_no_unknown_keys(self):
        # every emitted line must parse back (guards serializer/parser drift)
        text = serialize_scenario(Scenario())
        for line in text.strip().splitlines():
            key = line.split("=", 1)[0].strip()
            assert key, line
        parse_scenario(text)


class TestSolveScenario:
    def test_solve_and_record(self):
        sc = parse_scenario("pressure = 100e3\nspine.length = 0.10")
        result = solve_scenario(sc)
        assert result.converged
        record = ResultRecord.from_solve(sc, result)
        assert record.spine_length == 0.10
        assert record.pressure == 100e3
        assert record.grid_n == 100
        assert record.converged
        assert record.tip_x == result.tip_position[0]
        assert record.iterations == result.iterations
