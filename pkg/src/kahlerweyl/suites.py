"""Named verification suites and the dimension table, as exposed on the command line."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable

import numpy as np

from .curvature import (
    kahler_spaces,
    model_space,
    model_space_dim,
    ricci_antisym,
    verify_higa,
    verify_kahler_weyl_decomposition,
)
from .germs import (
    KahlerWeylObstruction,
    MetricGerm,
    SignConventionError,
    all_zero,
    at_origin,
    conformal_family_phi,
    conformal_family_rho_a,
    curvature_at_origin,
    exterior_derivative_at_origin,
    hermitian_germ,
    kahler_quadratic_family,
    kahler_weyl,
    lemma41_metric,
    nabla_g_omega,
    random_hermitian_germ,
    weyl_identity_residuals,
)
from .jets import Jet
from .realization import verify_gray_identity, verify_multiplicities, verify_realization
from .report import VerificationReport
from .polyparse import parse_polynomial
from .space import PseudoHermitianSpace, tensor_inner_product
from .tensor import Tensor, _fmt
from .twoforms import (
    J_star_form,
    gray_hervella_split,
    in_u,
    sigma,
    sigma_range,
    tau1,
    two_form_blocks,
    u3_space,
    u_space_basis,
)

DEFAULT_F = "x1*x3/4"


def two_form_string(t: Tensor) -> str:
    """Write an antisymmetric 2-tensor as sum c dx_i^dx_j with a^b = (a(x)b - b(x)a)/2."""
    terms = []
    m = t.dim
    for i in range(m):
        for j in range(i + 1, m):
            c = 2 * t.data[i, j]
            if not c:
                continue
            mono = f"dx{i + 1}^dx{j + 1}"
            terms.append(mono if c == 1 else "-" + mono if c == -1 else f"{_fmt(Fraction(c))}*{mono}")
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def _one_form_string(phi) -> str:
    terms = [f"({p.to_string()}) dx{i + 1}" for i, p in enumerate(phi) if not p.is_zero()]
    return " + ".join(terms) if terms else "0"


# -- dimension table ----------------------------------------------------------------------


def dimension_table(space: PseudoHermitianSpace, mode: str = "exact") -> dict[str, int]:
    dims = {name: model_space_dim(space, name, mode) for name in ("W", "R", "K", "K_W", "K_R")}
    blocks = two_form_blocks(space)
    for name, sub in blocks.items():
        dims[name] = sub.dim
    dims["Lambda2_0"] = blocks["lambda_plus"].dim + blocks["lambda0"].dim
    U = u_space_basis(space)
    dims["U"] = U.dim
    dims["U3"] = u3_space(space).dim
    dims["U4"] = sigma_range(space).dim
    return dims


def dims_summary(space: PseudoHermitianSpace, dims: dict[str, int]) -> str:
    if dims["K_W"] == dims["K_R"]:
        return f"K_W = K_R: {dims['K_W']}"
    return f"K_W: {dims['K_W']}, K_R: {dims['K_R']}, Lambda2_0: {dims['Lambda2_0']}"


# -- two-form calculus ------------------------------------------------------------------------


def verify_gray_hervella(space: PseudoHermitianSpace, samples: int = 10, seed: int = 0) -> VerificationReport:
    """tau1 sigma = (m-2) J^*, U = U3 (+) U4, and the split of random elements of U."""
    rep = VerificationReport("thm25", {**space.config(), "samples": samples, "seed": seed})
    m = space.m
    ref = "U = (U cap ker tau1) (+) Range sigma"
    bad = 0
    for i in range(m):
        phi = Tensor.basis_form(m, i)
        if tau1(space, sigma(space, phi)) != J_star_form(space, phi) * (m - 2):
            bad += 1
    rep.check("tau1 sigma = (m-2) J^* on the coordinate basis (failures)", bad, 0, "tau1 sigma = (m-2) J^*")
    U, U3, U4 = u_space_basis(space), u3_space(space), sigma_range(space)
    rep.check("dim Range sigma = m", U4.dim, m, ref)
    rep.check("Range sigma contained in U", U.contains_subspace(U4), True, ref)
    rep.check("dim U = dim U3 + dim U4", U.dim, U3.dim + U4.dim, ref)
    if m == 4:
        rep.check("m = 4: U3 = 0", U3.dim, 0, ref)
    else:
        rep.check("m >= 6: U3 nontrivial", U3.dim > 0, True, ref)
    cross = [a for x in U3.basis for y in U4.basis if (a := tensor_inner_product(space, x, y))]
    rep.check("U3 orthogonal to Range sigma", len(cross), 0, ref)

    rng = random.Random(seed)
    failures = 0
    for _ in range(samples):
        H = U.combine([Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(U.dim)])
        H3, H4 = gray_hervella_split(space, H)
        ok = (H3 + H4 == H and tau1(space, H3).is_zero() and in_u(space, H3)
              and U4.contains(H4) and (m > 4 or H3.is_zero()))
        failures += not ok
    rep.check("random elements of U split as H3 + H4 (failures)", failures, 0, ref)
    return rep


# -- jet geometry --------------------------------------------------------------------------------


def _conformal_nabla_omega(space: PseudoHermitianSpace, f: Jet, order: int) -> np.ndarray:
    """Closed-form nabla^g Omega for the conformal family: four components and their swaps."""
    base = f.with_order(order).exp_double() * f.with_order(order).partial(2) * space.metric[0, 0]
    s = space.s_J
    H = np.empty((4, 4, 4), dtype=object)
    for idx in np.ndindex(4, 4, 4):
        H[idx] = Jet(4, order - 1)
    for (x, y, z), c in (((0, 2, 1), -s), ((0, 3, 0), s), ((1, 3, 1), -1), ((1, 2, 0), s)):
        H[x, y, z] = base * c
        H[y, x, z] = base * (-c)
    return H


def _jets_equal(a: np.ndarray, b: np.ndarray) -> bool:
    return all(x.agrees_with(y) for x, y in zip(a.reshape(-1), b.reshape(-1)))


def verify_conformal_family(space: PseudoHermitianSpace, f: Jet | str = DEFAULT_F,
                            order: int = 4) -> VerificationReport:
    """The conformal family e^{2f} on the first coordinate pair, f = f(x1, x3)."""
    if isinstance(f, str):
        f = parse_polynomial(f, 4, order)
    f = f.with_order(order)
    rep = VerificationReport("lemma41", {**space.config(), "f": f.to_string(), "D": order})
    germ = lemma41_metric(space, f, order)
    try:
        H = nabla_g_omega(germ)
        rep.check("nabla^g Omega: direct and closed-form paths agree", True, True, "nabla^g Omega formula")
    except SignConventionError as exc:
        rep.check("nabla^g Omega: direct and closed-form paths agree", str(exc), True,
                  "nabla^g Omega formula", passed=False)
        return rep
    rep.check("nabla^g Omega = -s_J eps11 e^{2f} d3f (x) its four-term pattern (jets)",
              _jets_equal(H, _conformal_nabla_omega(space, f, order)), True,
              "(1,3;2) = -s_J e, (1,4;1) = s_J e, (2,4;2) = -e, (2,3;1) = s_J e")
    conn = kahler_weyl(germ)
    phi_ok = _jets_equal(conn.phi, conformal_family_phi(space, f))
    rep.check("phi = -d3f dx3 (jets)", phi_ok, True, "phi = s_J/(m-2) J^* delta Omega")
    rep.check("phi", _one_form_string(conn.phi), _one_form_string(conformal_family_phi(space, f)),
              "phi = -d3f dx3")
    rep.check("phi at 0", at_origin(conn.phi), at_origin(conformal_family_phi(space, f)),
              "phi = -d3f dx3")
    R = curvature_at_origin(conn, germ)
    rho_a = ricci_antisym(space, R)
    expected = conformal_family_rho_a(space, f)
    rep.check("rho_a at 0", two_form_string(rho_a), two_form_string(expected),
              "rho_a = 4 d1 d3 f dx1^dx3")
    rep.check("rho_a at 0 (tensor)", rho_a, expected, "rho_a = 4 d1 d3 f dx1^dx3")
    d_phi = exterior_derivative_at_origin(conn.phi)
    rep.check("d phi = -(1/m) rho_a at 0", d_phi, rho_a * Fraction(-1, 4), "d phi = -(1/m) rho_a")
    res = weyl_identity_residuals(conn, germ)
    for name, arr in res.items():
        rep.check(f"jet identity residual '{name}' vanishes", all_zero(arr), True, _RESIDUAL_REFS[name])
    _, KW, _ = kahler_spaces(space)
    rep.check("curvature at 0 lies in K_W", KW.contains(R), True, "curvature of a Kahler-Weyl connection")
    rep.notes.append("phi = -d3f dx3 and rho_a = 4 d1d3f dx1^dx3 for both kinds; "
                     "2-forms use a^b = (a(x)b - b(x)a)/2")
    return rep


_RESIDUAL_REFS = {
    "torsion": "torsion free",
    "metric": "nabla g = -2 phi (x) g",
    "nabla_J": "nabla J = 0",
    "omega_relation": "nabla^g Omega = sigma(phi) + g(x, (nabla_z J) y)",
}


def _kahler_combination(space, family, rng, order) -> MetricGerm:
    m = space.m
    pert: dict = {}
    for germ in family:
        c = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        if not c:
            continue
        for i in range(m):
            for j in range(m):
                for e, v in germ.g[i, j].coeffs.items():
                    if sum(e) == 2:
                        mat = pert.setdefault(e, np.zeros((m, m), dtype=object))
                        mat[i, j] += c * v
    return hermitian_germ(space, pert, order, first_jet_zero=True)


def _check_construction(rep: VerificationReport, space, label: str, germ: MetricGerm,
                        expect_kahler: bool) -> None:
    conn = kahler_weyl(germ)
    res = weyl_identity_residuals(conn, germ)
    bad = [name for name, arr in res.items() if not all_zero(arr)]
    rep.check(f"{label}: torsion, nabla g + 2 phi g, nabla J, relation residuals vanish",
              bad, [], "Kahler-Weyl structure from the Lee form")
    R = curvature_at_origin(conn, germ)
    d_phi = exterior_derivative_at_origin(conn.phi)
    rep.check(f"{label}: d phi = -(1/m) rho_a at 0", d_phi,
              ricci_antisym(space, R) * Fraction(-1, space.m), "d phi = -(1/m) rho_a")
    if expect_kahler:
        rep.check(f"{label}: phi = 0", all_zero(conn.phi), True, "Kahler germ: delta Omega = 0")
        rep.check(f"{label}: nabla^g Omega = 0", all_zero(nabla_g_omega(germ)), True, "Kahler germ")
    if space.m == 4:
        _, KW, _ = kahler_spaces(space)
        rep.check(f"{label}: curvature at 0 in K_W", KW.contains(R), True, "curvature model space")
    else:
        rep.check(f"{label}: curvature at 0 in K_R", model_space(space, "K_R").contains(R), True,
                  "curvature model space")


def verify_kahler_weyl_construction(space: PseudoHermitianSpace, order: int = 4, samples: int = 2,
                                    seed: int = 0) -> VerificationReport:
    """The Lee-form Weyl connection is Kahler-Weyl whenever nabla^g Omega lies in Range sigma."""
    rep = VerificationReport("thm31", {**space.config(), "D": order, "samples": samples, "seed": seed})
    rng = random.Random(seed)
    m = space.m
    family = kahler_quadratic_family(space, order)
    for n in range(samples):
        _check_construction(rep, space, f"Kahler germ {n}", _kahler_combination(space, family, rng, order), True)
    if m == 4:
        for text in (DEFAULT_F, "x1^2 - x3^2 + 2*x1*x3", "x1*x3 - x1^2*x3 + x3^3/3"):
            f = parse_polynomial(text, 4, order)
            _check_construction(rep, space, f"conformal f = {text}", lemma41_metric(space, f, order), False)
        for n in range(samples):
            germ = random_hermitian_germ(space, rng, order=order)
            _check_construction(rep, space, f"random Hermitian germ {n}", germ, False)
    else:
        U3 = u3_space(space)
        for n in range(samples):
            germ = random_hermitian_germ(space, rng, order=order)
            label = f"random Hermitian germ {n}"
            try:
                kahler_weyl(germ)
                rep.check(f"{label}: obstruction reported", False, True,
                          "nabla^g Omega has a ker(tau1) component", passed=False)
            except KahlerWeylObstruction as exc:
                u3 = exc.u3_at_origin
                ok = u3 is not None and not u3.is_zero() and U3.contains(u3)
                rep.check(f"{label}: obstruction reported with nonzero U3 component", ok, True,
                          "nabla^g Omega has a ker(tau1) component")
    return rep


# -- registry ----------------------------------------------------------------------------------


def verify_decomposition_and_multiplicities(space: PseudoHermitianSpace) -> VerificationReport:
    rep = verify_kahler_weyl_decomposition(space)
    rep.extend(verify_multiplicities(space))
    return rep


SUITES: dict[str, Callable[..., VerificationReport]] = {
    "thm13": verify_decomposition_and_multiplicities,
    "thm14": verify_realization,
    "thm15": verify_gray_identity,
    "thm23": verify_higa,
    "thm25": verify_gray_hervella,
    "lemma41": verify_conformal_family,
    "thm31": verify_kahler_weyl_construction,
}

M4_ONLY = {"thm13", "thm14", "lemma41"}
