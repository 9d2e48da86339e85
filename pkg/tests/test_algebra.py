import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtquant import algebra as alg
from gtquant.algebra import (
    AlgebraElement,
    GroupElement,
    HeisenbergAlgebraElement,
    HeisenbergGroupElement,
    Variant,
)

comp = st.floats(-2.0, 2.0, allow_nan=False)
algebra_elems = st.builds(AlgebraElement, comp, comp, comp, comp)
group_elems = st.builds(
    lambda u1, u2, th, lr: GroupElement((u1, u2), th * math.pi / 2, math.exp(lr)),
    comp, comp, comp, comp,
)


def close(g, h, tol=1e-12):
    return alg.group_distance(g, h) <= tol


# --- rotation matrix --------------------------------------------------------


def test_rotation_matrix_examples():
    assert np.array_equal(alg.rotation_matrix(0.0), np.eye(2))
    np.testing.assert_allclose(alg.rotation_matrix(math.pi / 2), [[0, -1], [1, 0]], atol=1e-16)
    np.testing.assert_allclose(
        alg.rotation_matrix(0.3) @ alg.rotation_matrix(0.4), alg.rotation_matrix(0.7), atol=1e-15
    )


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_rotation_matrix_rejects_non_finite(bad):
    with pytest.raises(ValueError):
        alg.rotation_matrix(bad)


# --- group law ---------------------------------------------------------------


def test_identity_is_neutral():
    g = GroupElement((3.0, -1.0), 0.7, 2.0)
    assert close(alg.product(alg.identity(), g), g)
    assert close(alg.product(g, alg.identity()), g)


def test_product_worked_example():
    g = alg.product(GroupElement((1.0, 0.0), math.pi / 2, 2.0), GroupElement((0.0, 1.0), 0.0, 1.0))
    np.testing.assert_allclose(g.u, [0.5, 0.0], atol=1e-15)
    assert g.theta == math.pi / 2 and g.lam == 2.0


def test_inverse_worked_example():
    g = alg.inverse(GroupElement((1.0, 0.0), math.pi / 2, 2.0))
    np.testing.assert_allclose(g.u, [0.0, 2.0], atol=1e-15)
    assert g.theta == -math.pi / 2 and g.lam == 0.5
    assert close(alg.inverse(alg.identity()), alg.identity(), 0.0)
    h = GroupElement((1.0, 2.0), 1.1, 3.0)
    assert close(h @ alg.inverse(h), alg.identity())


def test_product_keeps_theta_unreduced():
    g = GroupElement((0.0, 0.0), 4.0, 1.0)
    assert alg.product(g, g).theta == 8.0


def test_variant_mismatch_rejected():
    with pytest.raises(ValueError):
        alg.product(GroupElement((0, 0), 0, 1, Variant.BASE), GroupElement((0, 0), 0, 1, Variant.COVER))


def test_lambda_must_be_positive():
    with pytest.raises(ValueError):
        GroupElement((0.0, 0.0), 0.0, 0.0)
    with pytest.raises(ValueError):
        GroupElement((0.0, 0.0), 0.0, -1.0)


def test_base_equality_mod_two_pi_cover_exact():
    a = GroupElement((1.0, 0.0), 0.5, 2.0, Variant.BASE)
    b = GroupElement((1.0, 0.0), 0.5 + 2 * math.pi, 2.0, Variant.BASE)
    assert a == b
    ac = GroupElement((1.0, 0.0), 0.5, 2.0, Variant.COVER)
    bc = GroupElement((1.0, 0.0), 0.5 + 2 * math.pi, 2.0, Variant.COVER)
    assert ac != bc
    assert alg.project(ac) == alg.project(bc)


@settings(max_examples=200, deadline=None)
@given(group_elems, group_elems, group_elems)
def test_associativity(g, h, k):
    assert close((g @ h) @ k, g @ (h @ k))


@settings(max_examples=100, deadline=None)
@given(group_elems)
def test_inverse_is_involution(g):
    assert close(alg.inverse(alg.inverse(g)), g)
    assert close(alg.inverse(g) @ g, alg.identity())


@settings(max_examples=100, deadline=None)
@given(group_elems, group_elems, st.integers(-3, 3))
def test_projection_commutes_with_product(g, h, wind):
    gc = GroupElement(g.u, g.theta + 2 * math.pi * wind, g.lam, Variant.COVER)
    hc = GroupElement(h.u, h.theta, h.lam, Variant.COVER)
    assert close(alg.project(gc @ hc), alg.project(gc) @ alg.project(hc))


# --- bracket -----------------------------------------------------------------


def test_bracket_examples():
    A = AlgebraElement(1, 2, 0.5, -0.3)
    assert alg.bracket(A, A).as_array().tolist() == [0, 0, 0, 0]
    e1, e_th, e_r = AlgebraElement(1, 0, 0, 0), AlgebraElement(0, 0, 1, 0), AlgebraElement(0, 0, 0, 1)
    assert alg.bracket(e1, e_th).as_array().tolist() == [0, -1, 0, 0]
    assert alg.bracket(e_th, e_r).as_array().tolist() == [0, 0, 0, 0]


@settings(max_examples=200, deadline=None)
@given(algebra_elems, algebra_elems, algebra_elems)
def test_jacobi_and_translation_image(A, B, C):
    br = alg.bracket
    jac = br(A, br(B, C)) + br(B, br(C, A)) + br(C, br(A, B))
    assert np.max(np.abs(jac.as_array())) <= 1e-12
    out = br(A, B)
    assert out.theta == 0 and out.r == 0
    np.testing.assert_allclose(out.as_array(), -br(B, A).as_array(), rtol=0, atol=1e-14)


def _matrix(A):
    """3x3 affine matrix of an algebra element, an independent model of the group."""
    J = np.array([[0.0, -1.0], [1.0, 0.0]])
    M = np.zeros((3, 3))
    M[:2, :2] = -A.r * np.eye(2) + A.theta * J
    M[:2, 2] = A.b
    return M


@settings(max_examples=100, deadline=None)
@given(algebra_elems, algebra_elems)
def test_bracket_matches_matrix_commutator(A, B):
    MA, MB = _matrix(A), _matrix(B)
    np.testing.assert_allclose(_matrix(alg.bracket(A, B)), MA @ MB - MB @ MA, atol=1e-12)


# --- exponential -------------------------------------------------------------


def test_exp_basis_elements():
    assert close(alg.exp(AlgebraElement(0, 0, 0, 0)), alg.identity(), 0.0)
    g = alg.exp(AlgebraElement(1.7, 0, 0, 0))
    assert g.u.tolist() == [1.7, 0.0] and g.theta == 0.0 and g.lam == 1.0
    g = alg.exp(AlgebraElement(0, -0.4, 0, 0))
    assert g.u.tolist() == [0.0, -0.4]
    g = alg.exp(AlgebraElement(0, 0, 2.5, 0))
    assert g.u.tolist() == [0.0, 0.0] and g.theta == 2.5 and g.lam == 1.0
    g = alg.exp(AlgebraElement(0, 0, 0, 0.8))
    assert g.lam == math.exp(0.8) and g.theta == 0.0


def _integrate_flow(A, steps=2000):
    """RK4 for g'(t) = g(t) A in the 3x3 affine model, an oracle for exp."""
    M = _matrix(A)
    G = np.eye(3)
    h = 1.0 / steps
    for _ in range(steps):
        k1 = G @ M
        k2 = (G + 0.5 * h * k1) @ M
        k3 = (G + 0.5 * h * k2) @ M
        k4 = (G + h * k3) @ M
        G = G + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return G


def test_exp_rotation_translation_oracle():
    A = AlgebraElement(1.0, 0.0, math.pi / 2, 0.0)
    g = alg.exp(A)
    np.testing.assert_allclose(g.u, [2 / math.pi, 2 / math.pi], atol=1e-15)
    assert g.theta == math.pi / 2 and g.lam == 1.0
    G = _integrate_flow(A)
    np.testing.assert_allclose(G[:2, 2], g.u, atol=1e-12)


@pytest.mark.parametrize(
    "A", [(0.3, -1.1, 0.7, 0.4), (1.0, 1.0, -2.0, 1.5), (0.5, 0.2, 1e-9, -1e-9), (-1.0, 2.0, 0.0, 0.0)]
)
def test_exp_matches_integrated_flow(A):
    A = AlgebraElement(*A)
    G = _integrate_flow(A)
    g = alg.exp(A)
    np.testing.assert_allclose(G[:2, 2], g.u, atol=1e-11)
    # the linear block of the affine model is lam^-1 A_theta
    np.testing.assert_allclose(G[:2, :2], alg.rotation_matrix(g.theta) / g.lam, atol=1e-11)


def test_phi1_series_branch_continuous():
    for z in (1e-4 * (1 + 1j), 0.99e-4, 1.01e-4j, -1e-5):
        direct = np.expm1(z) / z if abs(z) >= 1e-4 else None
        series = alg.phi1(z)
        ref = sum(z**k / math.factorial(k + 1) for k in range(20))
        assert abs(series - ref) <= 1e-15
        if direct is not None:
            assert abs(direct - ref) <= 1e-15
    assert alg.phi1(0.0) == 1.0


@settings(max_examples=200, deadline=None)
@given(algebra_elems, comp, comp)
def test_exp_one_parameter_subgroup(A, t, s):
    cover = Variant.COVER
    lhs = alg.exp(t * A, cover) @ alg.exp(s * A, cover)
    assert alg.group_distance(lhs, alg.exp((t + s) * A, cover)) <= 1e-10


# --- BCH ---------------------------------------------------------------------


def test_bch_trivial_cases():
    A = AlgebraElement(0.3, -0.2, 1.0, 0.5)
    B = AlgebraElement(1.0, 0.0, 0.0, 0.0)
    assert alg.bch_commutator_check(A, A, 0.5, 0.5) <= 1e-15
    assert alg.bch_commutator_check(A, B, 0.0, 0.5) == 0.0


def test_bch_rejects_large_parameters():
    A = AlgebraElement(1, 0, 0, 0)
    with pytest.raises(ValueError):
        alg.bch_commutator_check(A, A, 1.5, 0.1)


def test_bch_order_on_basis_pair():
    A, B = AlgebraElement(1, 0, 0, 0), AlgebraElement(0, 0, 1, 0)
    ts = [2.0**-k for k in range(3, 11)]
    d = [alg.bch_commutator_check(A, B, t, t) for t in ts]
    slope = np.polyfit(np.log(ts), np.log(d), 1)[0]
    assert slope >= 2.9
    ratios = [math.log2(d[i] / d[i + 1]) for i in range(len(d) - 1)]
    assert abs(ratios[-1] - 3.0) < 0.05


# --- Heisenberg group ---------------------------------------------------------


def test_heisenberg_product_example():
    g = alg.heis_product(
        HeisenbergGroupElement((1, 0), (0, 0), 0), HeisenbergGroupElement((0, 0), (1, 0), 0)
    )
    assert g.as_array().tolist() == [1, 0, 1, 0, -0.5]
    e = HeisenbergGroupElement((0, 0), (0, 0), 0)
    h = HeisenbergGroupElement((0.3, 1), (2, -1), 0.7)
    assert alg.heis_distance(alg.heis_product(e, h), h) == 0.0


heis_elems = st.builds(
    lambda v: HeisenbergGroupElement(v[:2], v[2:4], v[4]),
    st.lists(comp, min_size=5, max_size=5).map(np.array),
)


@settings(max_examples=100, deadline=None)
@given(heis_elems, heis_elems, heis_elems)
def test_heisenberg_associative_with_inverse(g, h, k):
    P = alg.heis_product
    assert alg.heis_distance(P(P(g, h), k), P(g, P(h, k))) <= 1e-12
    e = HeisenbergGroupElement((0, 0), (0, 0), 0)
    assert alg.heis_distance(P(g, alg.heis_inverse(g)), e) <= 1e-12


def test_heisenberg_bracket_examples():
    A = HeisenbergAlgebraElement((1, 0), (0, 0), 0)
    B = HeisenbergAlgebraElement((0, 0), (1, 0), 0)
    assert alg.heis_bracket(A, A).as_array().tolist() == [0] * 5
    z = alg.heis_bracket(A, B)
    assert z.a.tolist() == [0, 0] and z.b.tolist() == [0, 0] and abs(z.r) == 1
    C = HeisenbergAlgebraElement((0, 0), (0, 0), 3.0)
    assert alg.heis_bracket(C, B).r == 0.0


def test_heisenberg_exp_coordinates_subgroup():
    A = HeisenbergAlgebraElement((0.3, -1.0), (0.5, 2.0), 0.4)
    g = alg.heis_exp(A)
    gg = alg.heis_product(g, g)
    twice = alg.heis_exp(HeisenbergAlgebraElement(2 * A.a, 2 * A.b, 2 * A.r))
    assert alg.heis_distance(gg, twice) <= 1e-15
