"""Algebraic curvature model spaces cut out by linear symmetries.

Conventions: ``A[x, y, z, w] = A(x, y, z, w) = g(R(x, y) z, w)``,
``rho(x, y) = eps^{ab} A(e_a, x, y, e_b)`` and
``rho_a(x, y) = (rho(x, y) - rho(y, x)) / 2``.

The Weyl identity ``A(x,y,z,w) + A(x,y,w,z) = -(4/m) rho_a(x,y) g(z,w)``
is linear in ``A`` once ``rho_a`` is written out as a contraction, so all
model spaces are plain nullspaces of sparse constraint systems.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from . import linalg
from .report import VerificationReport
from .space import PseudoHermitianSpace, tensor_inner_product
from .subspace import Subspace
from .tensor import Tensor, contract_axis
from .twoforms import lambda2_0, sym_antisym_blocks


def _idx(m):
    def idx(x, y, z, w):
        return ((x * m + y) * m + z) * m + w
    return idx


def antisymmetry_rows(space: PseudoHermitianSpace):
    m, idx = space.m, _idx(space.m)
    for x in range(m):
        for y in range(x, m):
            for z in range(m):
                for w in range(m):
                    if x == y:
                        yield {idx(x, x, z, w): 1}
                    else:
                        yield {idx(x, y, z, w): 1, idx(y, x, z, w): 1}


def bianchi_rows(space: PseudoHermitianSpace):
    m, idx = space.m, _idx(space.m)
    for x in range(m):
        for y in range(m):
            for z in range(m):
                for w in range(m):
                    row: dict[int, int] = {}
                    for k in (idx(x, y, z, w), idx(y, z, x, w), idx(z, x, y, w)):
                        row[k] = row.get(k, 0) + 1
                    yield row


def weyl_trace_rows(space: PseudoHermitianSpace):
    """A(x,y,z,w) + A(x,y,w,z) + (4/m) g(z,w) rho_a(A)(x,y) = 0."""
    m, idx = space.m, _idx(space.m)
    inv = space.inverse_metric
    pairs = [(a, b, inv[a, b]) for a in range(m) for b in range(m) if inv[a, b]]
    c = Fraction(4, m)
    for x in range(m):
        for y in range(m):
            for z in range(m):
                for w in range(z, m):
                    row: dict[int, Fraction] = {}
                    for k in (idx(x, y, z, w), idx(x, y, w, z)):
                        row[k] = row.get(k, 0) + 1
                    gzw = space.metric[z, w]
                    if gzw:
                        for a, b, e in pairs:
                            # rho_a(x, y) = 1/2 eps^{ab} (A(a,x,y,b) - A(a,y,x,b))
                            for k, sgn in ((idx(a, x, y, b), 1), (idx(a, y, x, b), -1)):
                                row[k] = row.get(k, 0) + c * gzw * e * sgn / 2
                    yield row


def riemann_rows(space: PseudoHermitianSpace):
    m, idx = space.m, _idx(space.m)
    for x in range(m):
        for y in range(m):
            for z in range(m):
                for w in range(z, m):
                    if z == w:
                        yield {idx(x, y, z, z): 1}
                    else:
                        yield {idx(x, y, z, w): 1, idx(x, y, w, z): 1}


def kahler_rows(space: PseudoHermitianSpace):
    """A(x, y, Jz, Jw) + s_J A(x, y, z, w) = 0."""
    m, idx = space.m, _idx(space.m)
    J = space.J
    Jc = [[(a, J[a, i]) for a in range(m) if J[a, i]] for i in range(m)]
    s = space.s_J
    for x in range(m):
        for y in range(m):
            for z in range(m):
                for w in range(m):
                    row = {idx(x, y, z, w): s}
                    for a, ja in Jc[z]:
                        for b, jb in Jc[w]:
                            k = idx(x, y, a, b)
                            row[k] = row.get(k, 0) + ja * jb
                    yield row


_FAMILIES = {
    "W": (antisymmetry_rows, bianchi_rows, weyl_trace_rows),
    "R": (antisymmetry_rows, bianchi_rows, weyl_trace_rows, riemann_rows),
    "K": (kahler_rows,),
    "K_W": (antisymmetry_rows, bianchi_rows, weyl_trace_rows, kahler_rows),
    "K_R": (antisymmetry_rows, bianchi_rows, weyl_trace_rows, riemann_rows, kahler_rows),
}

SPACE_NAMES = tuple(_FAMILIES)


def constraint_rows(space: PseudoHermitianSpace, which: str):
    for family in _FAMILIES[which]:
        yield from family(space)


@lru_cache(maxsize=None)
def model_space(space: PseudoHermitianSpace, which: str) -> Subspace:
    """Exact basis of one of the model spaces W, R, K, K_W, K_R."""
    m = space.m
    vectors = linalg.nullspace(constraint_rows(space, which), m**4)
    return Subspace.from_vectors(space, vectors, 4, which)


def weyl_space(space):
    return model_space(space, "W")


def riemann_space(space):
    return model_space(space, "R")


def kahler_spaces(space) -> tuple[Subspace, Subspace, Subspace]:
    return model_space(space, "K"), model_space(space, "K_W"), model_space(space, "K_R")


@lru_cache(maxsize=None)
def model_space_dim(space: PseudoHermitianSpace, which: str, mode: str = "exact") -> int:
    """Dimension by rank; ``mode='modular'`` ranks over a large prime field."""
    N = space.m**4
    rows = constraint_rows(space, which)
    if mode == "exact":
        return N - linalg.rank(rows)
    if mode == "modular":
        return N - linalg.rank_mod(rows)
    raise ValueError(f"unknown rank mode {mode!r}")


# -- maps -------------------------------------------------------------------------


def _check4(space, A: Tensor):
    if A.rank != 4 or A.dim != space.m:
        raise ValueError(f"expected a rank-4 tensor on m={space.m}")


def ricci(space: PseudoHermitianSpace, A: Tensor) -> Tensor:
    _check4(space, A)
    return Tensor(np.einsum("axyb,ab->xy", A.data, space.inverse_metric))


def ricci_antisym(space: PseudoHermitianSpace, A: Tensor) -> Tensor:
    r = ricci(space, A)
    return (r - r.transpose(1, 0)) * Fraction(1, 2)


def is_antisymmetric(t: Tensor) -> bool:
    return t == -t.transpose(1, 0)


def higa_xi(space: PseudoHermitianSpace, psi: Tensor) -> Tensor:
    """2 psi(x,y)<z,w> + psi(x,z)<y,w> - psi(y,z)<x,w> - psi(x,w)<y,z> + psi(y,w)<x,z>."""
    if psi.rank != 2 or psi.dim != space.m:
        raise ValueError("higa_xi expects a rank-2 tensor")
    if not is_antisymmetric(psi):
        raise ValueError("higa_xi expects an antisymmetric 2-form")
    p, g = psi.data, space.metric
    out = (2 * np.einsum("xy,zw->xyzw", p, g)
           + np.einsum("xz,yw->xyzw", p, g)
           - np.einsum("yz,xw->xyzw", p, g)
           - np.einsum("xw,yz->xyzw", p, g)
           + np.einsum("yw,xz->xyzw", p, g))
    return Tensor(out)


@lru_cache(maxsize=None)
def higa_space(space: PseudoHermitianSpace) -> Subspace:
    """L = Xi(Lambda^2)."""
    lam = sym_antisym_blocks(space)["Lambda2"]
    return Subspace(space, [higa_xi(space, b) for b in lam.basis], 4, "L")


def _J_on(data: np.ndarray, J: np.ndarray, axes) -> np.ndarray:
    for ax in axes:
        data = contract_axis(data, J, ax)
    return data


def gray_symmetrizer(space: PseudoHermitianSpace, A: Tensor) -> Tensor:
    """Eight-term Gray symmetrizer; the six mixed terms carry the sign s_J."""
    _check4(space, A)
    d, J, s = A.data, space.J, space.s_J
    out = d + _J_on(d, J, (0, 1, 2, 3))
    for axes in ((0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2)):
        out = out + s * _J_on(d, J, axes)
    return Tensor(out)


def gray_projector(space: PseudoHermitianSpace, A: Tensor) -> Tensor:
    return gray_symmetrizer(space, A) * Fraction(1, 8)


def weyl_residuals(space: PseudoHermitianSpace, A: Tensor) -> dict[str, Tensor]:
    """Residuals of the three Weyl curvature identities (all zero iff A in W)."""
    _check4(space, A)
    d = A.data
    ra = ricci_antisym(space, A).data
    m = space.m
    return {
        "antisymmetry": Tensor(d + d.transpose(1, 0, 2, 3)),
        "bianchi": Tensor(d + d.transpose(1, 2, 0, 3) + d.transpose(2, 0, 1, 3)),
        "trace": Tensor(d + d.transpose(0, 1, 3, 2)
                        + Fraction(4, m) * np.multiply.outer(ra, space.metric)),
    }


def kahler_residual(space: PseudoHermitianSpace, A: Tensor) -> Tensor:
    return Tensor(_J_on(A.data, space.J, (2, 3)) + space.s_J * A.data)


def riemann_residual(A: Tensor) -> Tensor:
    return Tensor(A.data + A.data.transpose(0, 1, 3, 2))


def higa_split(space: PseudoHermitianSpace, A: Tensor) -> tuple[Tensor, Tensor]:
    """W = (Riemann part) + Xi(-rho_a(W)/m) for W in the Weyl space."""
    L_part = higa_xi(space, ricci_antisym(space, A) * Fraction(-1, space.m))
    return A - L_part, L_part


# -- verification --------------------------------------------------------------------


def verify_kahler_weyl_decomposition(space: PseudoHermitianSpace) -> VerificationReport:
    """m = 4: K_W = K_R (+) L0 with L0 modelled on the 2-forms orthogonal to Omega."""
    if space.m != 4:
        raise ValueError("the K_W = K_R + L0 decomposition is checked for m = 4 only")
    rep = VerificationReport("thm13", space.config())
    _, KW, KR = kahler_spaces(space)
    L20 = lambda2_0(space)
    ref = "K_W = K_R (+) L0, L0 ~ Lambda2_0"
    rep.check("dim K_W", KW.dim, 14, ref)
    rep.check("dim K_R", KR.dim, 9, ref)
    rep.check("dim Lambda2_0", L20.dim, 5, ref)
    rep.check("dim K_W - dim K_R = dim Lambda2_0", KW.dim - KR.dim, L20.dim, ref)
    rep.check("K_R contained in K_W", KW.contains_subspace(KR), True, ref)

    comp = KW.orthogonal_complement_in(KR, "L0")
    rep.check("orthogonal complement of K_R in K_W has dim 5", comp.dim, 5, ref)
    images = [ricci_antisym(space, b) for b in comp.basis]
    img = Subspace.spanned_by(space, images, 2, "rho_a(L0)")
    rep.check("rho_a injective on the complement (consistency evidence)", img.dim, comp.dim, ref)
    ortho = [tensor_inner_product(space, t, space.omega) for t in images]
    rep.check("rho_a(complement) orthogonal to Omega", all(x == 0 for x in ortho), True, ref)
    rep.check("rho_a(complement) spans Lambda2_0", img.same_as(L20), True, ref)
    with_omega = Subspace.spanned_by(space, images + [space.omega], 2)
    rep.check("no nonzero complement element has rho_a proportional to Omega",
              with_omega.dim, comp.dim + 1, "Xi(Omega) is not a Kahler tensor")
    return rep


def verify_higa(space: PseudoHermitianSpace, samples: int = 0, seed: int = 0) -> VerificationReport:
    """W = R (+) Xi(Lambda^2) with rho_a o Xi = -m id."""
    rep = VerificationReport("thm23", space.config())
    W, R, L = weyl_space(space), riemann_space(space), higa_space(space)
    m = space.m
    ref = "W = R (+) L, L ~ Lambda2"
    rep.check("dim W", W.dim, R.dim + L.dim, ref)
    rep.check("dim L = dim Lambda2", L.dim, m * (m - 1) // 2, ref)
    rep.check("dim R = m^2(m^2-1)/12", R.dim, m * m * (m * m - 1) // 12, ref)
    rep.check("L contained in W", W.contains_subspace(L), True, ref)
    cross = [tensor_inner_product(space, a, b) for a in R.basis for b in L.basis]
    rep.check("R orthogonal to L", all(x == 0 for x in cross), True, ref)
    lam = sym_antisym_blocks(space)["Lambda2"]
    ok = all(ricci_antisym(space, higa_xi(space, psi)) == psi * (-m) for psi in lam.basis)
    rep.check("rho_a(Xi psi) = -m psi on a basis of Lambda2", ok, True, "rho_a o Xi = -m id")
    bad = 0
    for b in W.basis:
        r_part, l_part = higa_split(space, b)
        if not (R.contains(r_part) and L.contains(l_part)):
            bad += 1
    rep.check("every W basis element splits as R-part + Xi(-rho_a/m)", bad, 0, ref)
    return rep


def orthogonal_pairs(space, subspaces):
    """All pairwise cross inner products between the listed subspaces."""
    out = {}
    for a, b in combinations(subspaces, 2):
        out[(a.name, b.name)] = [tensor_inner_product(space, x, y) for x in a.basis for y in b.basis]
    return out
