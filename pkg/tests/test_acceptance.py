"""Acceptance criteria 1-11, exact arithmetic, zero tolerance.

Each test prints one PASS/FAIL line.  Run alone with
``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import random
import time
from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import SPACES4, SPACES6, random_tensor, tensors
from kahlerweyl.curvature import (
    gray_projector,
    gray_symmetrizer,
    higa_xi,
    kahler_spaces,
    model_space_dim,
    ricci_antisym,
    verify_higa,
)
from kahlerweyl.germs import (
    all_zero,
    curvature_at_origin,
    exterior_derivative_at_origin,
    kahler_quadratic_family,
    kahler_weyl,
    lemma41_metric,
    random_hermitian_germ,
    snapshot,
    wedge,
    weyl_identity_residuals,
)
from kahlerweyl.polyparse import parse_polynomial
from kahlerweyl.realization import kahler_span, verify_gray_identity, weyl_span, xi_omega_values
from kahlerweyl.space import pullback, random_structure_group_element, tensor_inner_product
from kahlerweyl.subspace import Subspace
from kahlerweyl.tensor import Tensor
from kahlerweyl.twoforms import J_star_form, decompose_two_tensor, lambda2_0, sigma, tau1

ALL = SPACES4 + SPACES6


@pytest.fixture
def report(capsys):
    def emit(n: int, title: str, failures: list, started: float):
        status = "PASS" if not failures else "FAIL"
        detail = f" ({len(failures)} failures: {failures[:3]})" if failures else ""
        with capsys.disabled():
            print(f"\n{status} criterion {n}: {title} [{time.time() - started:.1f}s]{detail}")
        assert not failures
    return emit


def test_criterion_01_dimension_table(report):
    t0 = time.time()
    expected = {"R": 20, "W": 26, "K_R": 9, "K_W": 14}
    bad = []
    for sp in SPACES4:
        dims = {k: model_space_dim(sp, k, "exact") for k in expected}
        l20 = lambda2_0(sp).dim
        if dims != expected or l20 != 5 or dims["K_W"] != dims["K_R"] + l20:
            bad.append((sp.label(), dims, l20))
    report(1, "m=4 dims R=20, W=26, K_R=9, K_W=14, Lambda2_0=5, 14 = 9 + 5", bad, t0)


def test_criterion_02_dimension_six(report):
    t0 = time.time()
    bad = []
    for sp in SPACES6:
        for mode in ("exact", "modular"):
            kw, kr = model_space_dim(sp, "K_W", mode), model_space_dim(sp, "K_R", mode)
            if (kw, kr) != (36, 36):
                bad.append((sp.label(), mode, kw, kr))
    report(2, "m=6 dim K_W = dim K_R = 36, exact and modular agree", bad, t0)


def test_criterion_03_higa(report):
    t0 = time.time()
    bad = [sp.label() for sp in ALL if not verify_higa(sp).passed]
    report(3, "W = R (+) Xi(Lambda2), orthogonal, rho_a(Xi psi) = -m psi on a basis", bad, t0)


def test_criterion_04_tau1_sigma(report):
    t0 = time.time()
    bad = []
    for sp in ALL:
        for i in range(sp.m):
            phi = Tensor.basis_form(sp.m, i)
            if tau1(sp, sigma(sp, phi)) != J_star_form(sp, phi) * (sp.m - 2):
                bad.append((sp.label(), i))
    report(4, "tau1 sigma = (m-2) J^* on the coordinate basis, m in {4,6}", bad, t0)


def test_criterion_05_conformal_family(report):
    t0 = time.time()
    f = parse_polynomial("x1*x3/4")
    dx13 = wedge(Tensor.basis_form(4, 0), Tensor.basis_form(4, 2))
    bad = []
    for sp in SPACES4:
        germ = lemma41_metric(sp, f, 4)
        conn = kahler_weyl(germ)
        phi_ok = conn.phi[2].agrees_with(-f.partial(2)) and all(conn.phi[i].is_zero() for i in (0, 1, 3))
        R = curvature_at_origin(conn, germ)
        rho_a = ricci_antisym(sp, R)
        parts = decompose_two_tensor(sp, rho_a)
        split_ok = (not parts.lambda_plus.is_zero() and not parts.lambda0.is_zero()
                    and parts.omega_part.is_zero())
        if not (phi_ok and rho_a == dx13 and split_ok):
            bad.append((sp.label(), phi_ok, rho_a, split_ok))
    report(5, "f = x1 x3/4: phi = -d3f dx3, rho_a = dx1^dx3 in every configuration", bad, t0)


def test_criterion_06_kahler_weyl_construction(report):
    t0 = time.time()
    bad = []
    lemma_fs = ["x1*x3/4", "-x1*x3/4", "x1^2 - x3^2 + 2*x1*x3", "x1*x3 - x1^2*x3 + x3^3/3", "x1^2*x3^2"]

    def check(sp, label, germ):
        conn = kahler_weyl(germ)
        res = [k for k, v in weyl_identity_residuals(conn, germ).items() if not all_zero(v)]
        R = curvature_at_origin(conn, germ)
        if res or exterior_derivative_at_origin(conn.phi) != ricci_antisym(sp, R) * Fraction(-1, sp.m):
            bad.append((sp.label(), label, res))

    for sp in SPACES4:
        for text in lemma_fs:
            for order in (4, 5):
                check(sp, f"f={text},D={order}", lemma41_metric(sp, parse_polynomial(text, 4, order), order))
    for sp in ALL:
        for n, germ in enumerate(kahler_quadratic_family(sp, 4)):
            check(sp, f"kahler[{n}]", germ)
    report(6, "torsion, nabla g = -2 phi g, nabla J = 0, omega relation, d phi = -rho_a/m", bad, t0)


def test_criterion_07_gray_identity(report):
    t0 = time.time()
    bad = [sp.label() for sp in ALL if not verify_gray_identity(sp, samples=20, seed=0).passed]
    elapsed = time.time() - t0
    if elapsed > 120:
        bad.append(f"runtime {elapsed:.0f}s exceeds 2 min")
    report(7, "G(R^nabla)(0) = 0 = G(R^g)(0), 20 random germs per configuration", bad, t0)


def test_criterion_08_span(report):
    t0 = time.time()
    bad = []
    for sp in SPACES4:
        _, KW, _ = kahler_spaces(sp)
        total = Subspace.spanned_by(sp, kahler_span(sp).basis + weyl_span(sp).basis, 4)
        if total.dim != 14 or not total.same_as(KW):
            bad.append((sp.label(), total.dim))
    report(8, "kahler_span (+) weyl_span = K_W, rank 14", bad, t0)


def test_criterion_09_golden_values(report):
    t0 = time.time()
    bad = []
    for sp in SPACES4:
        g = sp.metric
        a, b = xi_omega_values(sp)
        if a != -g[0, 0] * g[3, 3] or b != g[0, 0] * g[3, 3]:
            bad.append((sp.label(), a, b))
    report(9, "Xi(Omega)(e1,e4,e3,e1) = -g11 g44, partner value +g11 g44", bad, t0)


def test_criterion_10_projector(report):
    t0 = time.time()
    bad = []
    for sp in SPACES4:
        rng = random.Random(100)
        for n in range(50):
            A, B = random_tensor(rng, 4, 4), random_tensor(rng, 4, 4)
            PA = gray_projector(sp, A)
            if gray_projector(sp, PA) != PA:
                bad.append((sp.label(), n, "P^2"))
            if tensor_inner_product(sp, PA, B) != tensor_inner_product(sp, A, gray_projector(sp, B)):
                bad.append((sp.label(), n, "adjoint"))
        _, KW, _ = kahler_spaces(sp)
        bad += [(sp.label(), "K_W", i) for i, b in enumerate(KW.basis) if not gray_projector(sp, b).is_zero()]
    report(10, "P = G/8: P^2 = P, self-adjoint on 50 tensors, P(K_W) = 0", bad, t0)


def test_criterion_11_properties(report):
    t0 = time.time()
    bad = []

    for sp in SPACES4:
        @settings(max_examples=100)
        @given(theta=tensors(4, 2))
        def resolution(theta):
            comps = decompose_two_tensor(sp, theta)
            assert comps.total() == theta
            parts = list(comps.parts().values())
            assert all(tensor_inner_product(sp, a, b) == 0
                       for i, a in enumerate(parts) for b in parts[i + 1:])
        try:
            resolution()
        except AssertionError as exc:
            bad.append((sp.label(), "resolution", str(exc)[:80]))

    for sp in ALL:
        rng = random.Random(17)
        for seed in (1, 2):
            for commuting in (True, False):
                el = random_structure_group_element(sp, commuting, seed=seed)
                T, chi = el.T, el.chi
                A = random_tensor(rng, sp.m, 4)
                psi = random_tensor(rng, sp.m, 2)
                psi = psi - psi.transpose(1, 0)
                phi = random_tensor(rng, sp.m, 1)
                H = random_tensor(rng, sp.m, 3)
                checks = {
                    "G": gray_symmetrizer(sp, pullback(sp, T, A)) == pullback(sp, T, gray_symmetrizer(sp, A)),
                    "Xi": higa_xi(sp, pullback(sp, T, psi)) == pullback(sp, T, higa_xi(sp, psi)),
                    "sigma": sigma(sp, pullback(sp, T, phi)) == pullback(sp, T, sigma(sp, phi)) * chi,
                    "tau1": tau1(sp, pullback(sp, T, H)) == pullback(sp, T, tau1(sp, H)),
                }
                bad += [(sp.label(), name, seed, chi) for name, ok in checks.items() if not ok]

    for sp in SPACES4:
        rng = random.Random(23)
        germs = [lemma41_metric(sp, parse_polynomial("x1*x3/4 + x3^3 - x1^2*x3^2"), 4),
                 random_hermitian_germ(sp, rng, 4)]
        for n, germ in enumerate(germs):
            a, b = snapshot(germ), snapshot(germ.with_order(5))
            for name in ("R", "R_g", "rho_a", "phi", "d_phi", "nabla_g_omega", "delta_omega"):
                if getattr(a, name) != getattr(b, name):
                    bad.append((sp.label(), "D4 vs D5", n, name))
    report(11, "resolution of identity, equivariance of G, Xi, sigma, tau1, D=4 vs D=5 stability", bad, t0)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
