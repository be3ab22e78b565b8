"""Vector nonlinearities and the preset registry."""

import numpy as np
import pytest

from ellab.exceptions import DomainError, ParameterRangeError, UnknownPresetError
from ellab.nonlin import PRESETS, ScalarNonlin, SystemKind, SystemNonlin, build_preset, parse_expr
from ellab.nonlin.presets import proportional_counterexample_system


class TestSystemNonlin:
    """
    Template constructors and their checks.

    Rationale:
      - Gradient systems must really be gradients (the potential feeds identities).
      - Proportional systems keep (phi, k, g, lam) so the proportionality criterion can use them.
    """

    def test_gradient_components_and_potential(self):
        F = parse_expr("u^3/3 + v^4/4 + u*v")
        S = SystemNonlin.gradient(F, label="test")
        assert S.kind is SystemKind.GRADIENT
        U = np.array([[2.0], [1.0]])
        np.testing.assert_allclose(S.evaluate(U)[:, 0], [4.0 + 1.0, 1.0 + 2.0])
        assert float(S.potential_values(U)[0]) == pytest.approx(8 / 3 + 0.25 + 2.0)
        J = S.jacobian_values(U)[:, :, 0]
        np.testing.assert_allclose(J, [[4.0, 1.0], [1.0, 3.0]])
        assert S.describe() == "test"

    def test_generic_has_no_potential(self):
        S = SystemNonlin.generic(parse_expr("v^2"), parse_expr("u^3"))
        assert S.m == 2
        with pytest.raises(DomainError):
            S.potential_values(np.ones((2, 3)))

    def test_potential_with_unknown_variable(self):
        with pytest.raises(DomainError):
            SystemNonlin.gradient(parse_expr("u^2 + v^2"), m=1)

    def test_extension_clips_negative_components(self):
        S = SystemNonlin.generic(parse_expr("v^2 + u"), parse_expr("u^3"))
        out = S.extended(np.array([[-1.0], [2.0]]))
        np.testing.assert_allclose(out[:, 0], [4.0, 0.0])

    def test_wrong_component_count(self):
        S = SystemNonlin.from_scalar(ScalarNonlin.parse("u^2"))
        with pytest.raises(ParameterRangeError):
            S.evaluate(np.ones((2, 4)))

    def test_proportional_parts(self):
        """
        Behavior:
          - f1 = k(u) (g(v) - lam g(u)) with phi = 1, k = s^p, g = s^q; the parts are kept.

        Importance:
          - The proportionality checker and the counterexample both read these parts.
        """
        S = proportional_counterexample_system(0.4, 0.4, 1.0)
        assert S.kind is SystemKind.PROPORTIONAL
        assert S.proportional.lam == 1.0
        U = np.array([[2.0], [3.0]])
        expected_f1 = 2.0**0.4 * (3.0**0.4 - 2.0**0.4)
        assert float(S.evaluate(U)[0, 0]) == pytest.approx(expected_f1)

    def test_negative_lambda_rejected(self):
        with pytest.raises(ParameterRangeError):
            proportional_counterexample_system(0.4, 0.4, -1.0)


class TestPresets:
    """build_preset instantiates named families with parameter overrides."""

    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_every_preset_builds_with_defaults(self, name):
        built = build_preset(name)
        assert isinstance(built, (ScalarNonlin, SystemNonlin))

    def test_override(self):
        f = build_preset("power", {"p": 4.0})
        assert f(2.0) == pytest.approx(16.0)

    def test_uk_integer_parameters(self):
        f = build_preset("uk", {"n": 3, "k": 10})
        # p = 3 + 1/10, q = 2p - 1
        assert f(2.0) == pytest.approx(2.0**3.1 + 2.0**5.2)
        with pytest.raises(ParameterRangeError):
            build_preset("uk", {"k": 2.5})

    def test_unknown_preset(self):
        with pytest.raises(UnknownPresetError) as exc:
            build_preset("no-such-family")
        assert exc.value.exit_code() == 2

    def test_unknown_parameter(self):
        with pytest.raises(ParameterRangeError) as exc:
            build_preset("benchmark", {"q": 1.0})
        assert exc.value.fields == ["q"]

    def test_sigma_must_be_unit(self):
        with pytest.raises(ParameterRangeError):
            build_preset("power-log", {"sigma": 2})
