import numpy as np
import pytest

from wproj.errors import DomainViolation, FrameMismatch, StepTooSmall
from wproj.forms import (Frame, OneForm, SmoothMap, TwoForm, VectorFieldValue, differential,
                         exterior_derivative, exterior_derivative_one_form, identity_map,
                         interior_product, linear_map, pullback_two_form, wirtinger_jacobian)
from wproj.hvec import HomPoint
from wproj.symplectic import (ReductionContext, action_map, omega0, omega0_field, omega_formula_z,
                              phase_map, retraction)

from conftest import random_point

F11 = Frame(1, 1)
ONE = np.array([1.0 + 0j, 1.0 + 0j])


def test_frame_layout():
    f = Frame(2, 1)
    assert f.N == 6
    assert f.labels() == ["dv0", "dv1", "dvbar0", "dvbar1", "dw0", "dwbar0"]
    np.testing.assert_array_equal(f.conj_perm, [2, 3, 0, 1, 5, 4])
    with pytest.raises(ValueError):
        Frame(0, 0)


def test_two_form_must_be_antisymmetric():
    with pytest.raises(ValueError):
        TwoForm(F11, np.eye(4))


def test_jacobian_identity(rng):
    z = random_point(rng, 2, 3).z
    f = Frame(2, 3)
    fd = SmoothMap(f, f, lambda x: x)
    np.testing.assert_allclose(wirtinger_jacobian(fd, z), np.eye(f.N), atol=1e-10)
    np.testing.assert_array_equal(wirtinger_jacobian(identity_map(f), z), np.eye(f.N))


def test_jacobian_of_action():
    lam = 0.8 + 0.3j
    f = Frame(2, 1)
    J = wirtinger_jacobian(SmoothMap(f, f, action_map(f, lam).evaluate), np.array([1, 2j, 3]))
    expected = np.diag([lam, lam, np.conj(lam), np.conj(lam), 1 / lam, np.conj(1 / lam)])
    np.testing.assert_allclose(J, expected, atol=1e-10)


def test_jacobian_of_retraction_at_unit_point():
    s = retraction(ReductionContext(F11))
    for use_analytic in (True, False):
        J = wirtinger_jacobian(s, ONE, use_analytic=use_analytic)
        np.testing.assert_allclose(J[0], [0.75, -0.25, 0.25, 0.25], atol=1e-9)


def test_fd_matches_analytic_jacobians(rng):
    for n, m in [(1, 1), (2, 3), (4, 2)]:
        f = Frame(n, m)
        p = random_point(rng, n, m)
        A = rng.normal(size=(n + m, n + m)) + 1j * rng.normal(size=(n + m, n + m))
        B = rng.normal(size=(n + m, n + m)) + 1j * rng.normal(size=(n + m, n + m))
        for g in (linear_map(f, A, B), phase_map(f, 0.7), action_map(f, 1.3 - 0.4j),
                  retraction(ReductionContext(f)), retraction(ReductionContext.for_point(p, beta=-0.6))):
            Ja = wirtinger_jacobian(g, p.z)
            Jf = wirtinger_jacobian(g, p.z, h=1e-5, use_analytic=False)
            assert np.linalg.norm(Ja - Jf) <= 1e-6 * np.linalg.norm(Ja)


def test_step_and_domain_errors():
    f = Frame(1, 1)
    with pytest.raises(StepTooSmall):
        wirtinger_jacobian(SmoothMap(f, f, lambda z: z), ONE, h=1e-13)
    # Retraction is undefined once v leaves V_0.
    s = retraction(ReductionContext(f))
    with pytest.raises(DomainViolation):
        wirtinger_jacobian(s, np.array([1e-13, 1.0]), use_analytic=False)


def test_pullback_examples():
    ctx = ReductionContext(F11)
    w0 = omega0(ctx)
    same = pullback_two_form(identity_map(F11), omega0_field(ctx), ONE)
    np.testing.assert_array_equal(same.coeff, w0.coeff)
    phase = pullback_two_form(phase_map(F11, 0.9), omega0_field(ctx), ONE)
    np.testing.assert_allclose(phase.coeff, w0.coeff, atol=1e-15)
    s = retraction(ctx)
    for use_analytic in (True, False):
        form = pullback_two_form(s, omega0_field(ctx), ONE, use_analytic=use_analytic)
        assert form["dv0", "dvbar0"] == pytest.approx(0.25j, abs=1e-9)
        assert form["dw0", "dwbar0"] == pytest.approx(0.25j, abs=1e-9)
        assert form["dv0", "dwbar0"] == pytest.approx(0.25j, abs=1e-9)
        assert form["dvbar0", "dw0"] == pytest.approx(-0.25j, abs=1e-9)
        assert form["dv0", "dw0"] == pytest.approx(0, abs=1e-9)
        assert form["dvbar0", "dwbar0"] == pytest.approx(0, abs=1e-9)


def test_chain_rule(rng):
    f = Frame(2, 1)
    z = random_point(rng, 2, 1).z
    ctx = ReductionContext(f)
    g1 = linear_map(f, np.eye(3) + 0.2 * rng.normal(size=(3, 3)), 0.1 * rng.normal(size=(3, 3)))
    g2 = SmoothMap(f, f, lambda x: x + 0.1 * x**2)
    field = omega_formula_z(f)
    composite = g1.then(g2)
    direct = pullback_two_form(composite, field, z)
    stepwise = pullback_two_form(g1, lambda y: pullback_two_form(g2, field, y), z)
    assert np.linalg.norm(direct.coeff - stepwise.coeff) <= 1e-6 * np.linalg.norm(direct.coeff)
    # Analytic composition agrees with differentiating the composite.
    both = g1.then(retraction(ctx))
    np.testing.assert_allclose(wirtinger_jacobian(both, z), wirtinger_jacobian(both, z, use_analytic=False),
                               atol=1e-8)


def test_exterior_derivative_examples(rng):
    ctx = ReductionContext(F11)
    assert exterior_derivative(omega0_field(ctx), ONE).max_abs() <= 1e-14

    def linear(z):
        C = np.zeros((4, 4), dtype=complex)
        C[2, 3], C[3, 2] = z[0], -z[0]
        return TwoForm(F11, C)

    T = exterior_derivative(linear, np.array([0.3 + 0.1j, 2.0]))
    assert T.coeff[0, 2, 3] == pytest.approx(1, abs=1e-9)
    assert T.coeff[2, 0, 3] == pytest.approx(-1, abs=1e-9)
    T.coeff[0, 2, 3] = T.coeff[2, 0, 3] = T.coeff[0, 3, 2] = T.coeff[3, 0, 2] = T.coeff[2, 3, 0] = T.coeff[3, 2, 0] = 0
    assert T.max_abs() <= 1e-9
    for _ in range(5):
        p = random_point(rng, 1, 1)
        assert exterior_derivative(omega_formula_z(F11), p.z).max_abs() <= 1e-5


def test_d_squared_vanishes(rng):
    f = Frame(2, 1)
    z = random_point(rng, 2, 1).z

    def poly(x):
        v0, v1, w = x
        return v0**2 * np.conj(v1) + 3 * w * np.conj(w) * v0 + np.conj(v0 * w) ** 3

    d2 = exterior_derivative_one_form(lambda x: differential(poly, x, f, 1e-4), z, 1e-4)
    assert np.max(np.abs(d2.coeff)) <= 1e-5


def test_interior_product_examples(rng):
    w0 = omega0(ReductionContext(F11))
    zero = interior_product(VectorFieldValue(F11, np.zeros(4)), w0)
    np.testing.assert_array_equal(zero.coeff, 0)
    X = VectorFieldValue(F11, [1j, -1j, -1j, 1j])
    np.testing.assert_allclose(interior_product(X, w0).coeff, 0.5 * np.array([-1, -1, 1, 1]), atol=1e-15)
    f = Frame(2, 2)
    for _ in range(10):
        A = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        omega = TwoForm(f, A - A.T)
        Y = VectorFieldValue(f, rng.normal(size=8) + 1j * rng.normal(size=8))
        assert abs(interior_product(Y, omega)(Y)) <= 1e-12
    with pytest.raises(FrameMismatch):
        interior_product(X, omega)


def test_differential_examples():
    d = differential(lambda z: z[0], np.array([0.4 + 2j, 1.0]), F11)
    np.testing.assert_allclose(d.coeff, [1, 0, 0, 0], atol=1e-10)
    z = np.array([1.5 - 0.5j])
    d = differential(lambda x: x[0] * np.conj(x[0]), z, Frame(1, 0))
    np.testing.assert_allclose(d.coeff, [np.conj(z[0]), z[0]], atol=1e-10)
    d = differential(lambda x: 0.5 * (abs(x[0]) ** 2 - abs(x[1]) ** 2), ONE, F11)
    np.testing.assert_allclose(d.coeff, 0.5 * np.array([1, 1, -1, -1]), atol=1e-10)


def test_one_form_wedge():
    a = OneForm(F11, [1, 0, 0, 0])
    b = OneForm(F11, [0, 0, 0, 1])
    assert (a ^ b)["dv0", "dwbar0"] == 1
    assert (b ^ a)["dv0", "dwbar0"] == -1


def test_reality_of_outputs(rng):
    for n, m in [(1, 1), (2, 2), (3, 1)]:
        f = Frame(n, m)
        p = random_point(rng, n, m)
        s = retraction(ReductionContext(f))
        pulled = pullback_two_form(s, omega0_field(ReductionContext(f)), p.z, use_analytic=False)
        assert pulled.reality_defect() <= 1e-10
        assert omega_formula_z(f)(p.z).reality_defect() <= 1e-10
        d = differential(lambda x: np.vdot(x, x).real, p.z, f)
        np.testing.assert_allclose(d.coeff[f.anti], np.conj(d.coeff[f.holo]), atol=1e-10)
