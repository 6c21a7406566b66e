import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import SPACES4, SPACES6
from kahlerweyl.curvature import kahler_spaces, model_space, ricci_antisym
from kahlerweyl.germs import (
    GermError,
    KahlerWeylObstruction,
    MetricGerm,
    all_zero,
    at_origin,
    conformal_germ,
    curvature_at_origin,
    flat_metric,
    hermitian_germ,
    kahler_quadratic_family,
    kahler_weyl,
    lee_form,
    lemma41_metric,
    levi_civita,
    nabla_g_omega,
    nabla_g_omega_direct,
    nabla_g_omega_formula,
    pullback_germ,
    random_hermitian_germ,
    snapshot,
    weyl_connection,
    weyl_identity_residuals,
    wedge,
)
from kahlerweyl.jets import Jet
from kahlerweyl.polyparse import parse_polynomial
from kahlerweyl.space import pullback, random_structure_group_element
from kahlerweyl.tensor import Tensor
from kahlerweyl.twoforms import tau1

F = parse_polynomial("x1*x3/4")


def jets_agree(a, b):
    return all(p.agrees_with(q) for p, q in zip(np.ravel(a), np.ravel(b)))


def residuals_vanish(conn, germ):
    return all(all_zero(r) for r in weyl_identity_residuals(conn, germ).values())


def expected_table(space, f):
    """nabla^g Omega for the conformal family; entries H[i, j, k] = (nabla_k Omega)(e_i, e_j)."""
    eps11 = space.metric[0, 0]
    e = f.exp_double() * f.partial(2) * eps11
    s = space.s_J
    H = {(0, 2, 1): e * (-s), (0, 3, 0): e * s, (1, 3, 1): -e, (1, 2, 0): e * s}
    out = np.array([[[Jet(4, 3) for _ in range(4)] for _ in range(4)] for _ in range(4)], dtype=object)
    for (i, j, k), v in H.items():
        out[i, j, k] = v
        out[j, i, k] = -v
    return out


@pytest.mark.parametrize("space", SPACES4, ids=lambda s: s.label())
def test_koszul_symbols_of_conformal_family(space):
    germ = lemma41_metric(space, F, 4)
    G = levi_civita(germ).gamma
    eps11, eps22 = space.metric[0, 0], space.metric[2, 2]
    e2f = F.exp_double()
    d1, d3 = F.partial(0), F.partial(2)
    assert G[0, 0, 0].agrees_with(d1)
    assert G[0, 0, 2].agrees_with(d3)
    assert G[1, 1, 2].agrees_with(d3)
    assert G[0, 1, 1].agrees_with(-d1 * space.s_g)
    assert G[2, 0, 0].agrees_with(-(e2f * d3) * (eps11 * eps22))
    assert G[2, 1, 1].agrees_with(-(e2f * d3) * (eps11 * eps22 * space.s_g))
    assert G[3, 0, 0].is_zero() and G[1, 0, 0].is_zero()


@pytest.mark.parametrize("space", SPACES4, ids=lambda s: s.label())
@pytest.mark.parametrize("f", ["x1*x3/4", "x3^2 - x1*x3 + x1^3", "x1^2*x3^2"])
def test_conformal_nabla_omega_table(space, f):
    f = parse_polynomial(f)
    germ = lemma41_metric(space, f, 4)
    assert jets_agree(nabla_g_omega_direct(germ), nabla_g_omega_formula(germ))
    assert jets_agree(nabla_g_omega(germ), expected_table(space, f))


@pytest.mark.parametrize("space", SPACES4, ids=lambda s: s.label())
def test_conformal_lee_form_and_rho_a(space):
    germ = lemma41_metric(space, F, 4)
    phi = lee_form(germ)
    assert phi[2].agrees_with(-F.partial(2))
    assert all(phi[i].is_zero() for i in (0, 1, 3))
    snap = snapshot(germ)
    assert snap.rho_a == wedge(Tensor.basis_form(4, 0), Tensor.basis_form(4, 2))
    assert snap.d_phi == snap.rho_a * Fraction(-1, 4)


@pytest.mark.parametrize("space", SPACES4, ids=lambda s: s.label())
def test_rho_a_vanishes_without_mixed_quadratic_term(space):
    snap = snapshot(lemma41_metric(space, parse_polynomial("x1^2*x3^2 + x1^2 - x3^2"), 4))
    assert snap.rho_a.is_zero()


def test_lower_sign_reading_flips_rho_a():
    # the complex-kind example written with the lower sign uses f = -x1 x3 / 4
    space = SPACES4[0]
    snap = snapshot(lemma41_metric(space, -F, 4))
    assert snap.rho_a == wedge(Tensor.basis_form(4, 0), Tensor.basis_form(4, 2)) * -1


@pytest.mark.parametrize("space", SPACES4, ids=lambda s: s.label())
def test_kahler_weyl_on_conformal_family(space):
    germ = lemma41_metric(space, F, 4)
    conn = kahler_weyl(germ)
    assert residuals_vanish(conn, germ)
    _, KW, _ = kahler_spaces(space)
    assert KW.contains(curvature_at_origin(conn, germ))


@pytest.mark.parametrize("space", SPACES4, ids=lambda s: s.label())
def test_kahler_germs_have_zero_lee_form(space):
    family = kahler_quadratic_family(space, 4)
    assert len(family) == 25
    _, _, KR = kahler_spaces(space)
    for germ in family[::4]:
        assert all_zero(nabla_g_omega(germ))
        conn = kahler_weyl(germ)
        assert all_zero(conn.phi)
        assert KR.contains(curvature_at_origin(conn, germ))


@pytest.mark.parametrize("space", SPACES4 + SPACES6[:1], ids=lambda s: s.label())
def test_levi_civita_and_weyl_curvature_membership(space):
    rng = random.Random(5)
    R, W = model_space(space, "R"), model_space(space, "W")
    for _ in range(2):
        germ = random_hermitian_germ(space, rng, 3)
        assert germ.check_inverse()
        assert R.contains(curvature_at_origin(levi_civita(germ), germ))
        phi = np.array([Jet.constant(space.m, 3, rng.randint(-2, 2))
                        + Jet.variable(space.m, 3, rng.randrange(space.m)) * rng.randint(-2, 2)
                        for _ in range(space.m)], dtype=object)
        conn = weyl_connection(germ, phi)
        A = curvature_at_origin(conn, germ)
        assert W.contains(A)
        assert ricci_antisym(space, A) == snapshot(germ, conn).d_phi * (-space.m)


@pytest.mark.parametrize("space", SPACES4, ids=lambda s: s.label())
def test_random_germs_admit_kahler_weyl_in_dimension_four(space):
    rng = random.Random(7)
    _, KW, _ = kahler_spaces(space)
    for _ in range(2):
        germ = random_hermitian_germ(space, rng, 4)
        conn = kahler_weyl(germ)
        assert residuals_vanish(conn, germ)
        assert KW.contains(curvature_at_origin(conn, germ))


@pytest.mark.parametrize("space", SPACES6, ids=lambda s: s.label())
def test_dimension_six_obstruction(space):
    germ = random_hermitian_germ(space, random.Random(1), 3)
    with pytest.raises(KahlerWeylObstruction) as info:
        kahler_weyl(germ)
    u3 = info.value.u3_at_origin
    assert u3 is not None and not u3.is_zero()
    assert tau1(space, u3).is_zero()


@pytest.mark.parametrize("space", SPACES4, ids=lambda s: s.label())
def test_conformal_covariance(space):
    rng = random.Random(3)
    germ = random_hermitian_germ(space, rng, 4)
    u = parse_polynomial("x1 - 2*x2*x3 + x4^2/3")
    tilde = conformal_germ(germ, u)
    c0, c1 = kahler_weyl(germ), kahler_weyl(tilde)
    for i in range(4):
        assert c1.phi[i].agrees_with(c0.phi[i] - u.partial(i))
    assert jets_agree(c0.gamma, c1.gamma)


@pytest.mark.parametrize("space", SPACES4, ids=lambda s: s.label())
def test_structure_group_covariance(space):
    germ = random_hermitian_germ(space, random.Random(2), 4)
    base = snapshot(germ)
    for commuting in (True, False):
        T = random_structure_group_element(space, commuting, seed=6).T
        moved = snapshot(pullback_germ(germ, T))
        assert moved.R == pullback(space, T, base.R)
        assert moved.phi == pullback(space, T, base.phi)
        assert moved.rho_a == pullback(space, T, base.rho_a)


@pytest.mark.parametrize("space", SPACES4, ids=lambda s: s.label())
def test_jet_order_stability(space):
    for germ in (lemma41_metric(space, parse_polynomial("x1*x3/4 + x3^3"), 4),
                 random_hermitian_germ(space, random.Random(9), 4)):
        a, b = snapshot(germ), snapshot(germ.with_order(5))
        for name in ("R", "R_g", "rho_a", "phi", "d_phi", "nabla_g_omega", "delta_omega"):
            assert getattr(a, name) == getattr(b, name), name


def test_flat_germ_is_trivial():
    space = SPACES4[2]
    snap = snapshot(flat_metric(space, 4))
    assert snap.R.is_zero() and snap.phi.is_zero() and snap.nabla_g_omega.is_zero()


def test_germ_json_roundtrip():
    germ = random_hermitian_germ(SPACES4[1], random.Random(4), 4)
    back = MetricGerm.from_json(germ.to_json())
    assert jets_agree(back.g, germ.g)
    assert snapshot(back).R == snapshot(germ).R


def test_germ_validation():
    space = SPACES4[0]
    bad = np.zeros((4, 4), dtype=object)
    bad[0, 2] = bad[2, 0] = 1
    with pytest.raises(GermError):
        hermitian_germ(space, {(1, 0, 0, 0): bad})
    with pytest.raises(GermError):
        lemma41_metric(space, parse_polynomial("x2*x3"), 4)
    with pytest.raises(GermError):
        lemma41_metric(space, parse_polynomial("1 + x1"), 4)
    with pytest.raises(GermError):
        hermitian_germ(space, {(1, 0, 0, 0): np.identity(4, dtype=object)}, first_jet_zero=True)


def test_at_origin_reads_constant_terms():
    arr = np.array([Jet.constant(4, 2, 3) + Jet.variable(4, 2, 1), Jet(4, 2)], dtype=object)
    assert at_origin(arr) == Tensor(np.array([3, 0], dtype=object))
