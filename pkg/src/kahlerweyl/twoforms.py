"""Two-tensors and covariant derivatives of the Kahler form.

Every sign below is derived from ``s_J`` (J^2 = s_J id) and ``s_g``
(J^* g = s_g g) on the space; the metric and the Kahler form both sit in
the ``s_g`` eigenspace of J^*, the "other" pieces in the ``s_J`` eigenspace.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from . import linalg
from .space import PseudoHermitianSpace, pullback, tensor_inner_product
from .subspace import Subspace
from .tensor import Tensor

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class TwoTensorComponents:
    s_plus: Tensor
    scalar_part: Tensor
    s0: Tensor
    lambda_plus: Tensor
    omega_part: Tensor
    lambda0: Tensor

    FIELDS = ("s_plus", "scalar_part", "s0", "lambda_plus", "omega_part", "lambda0")

    def parts(self) -> dict[str, Tensor]:
        return {name: getattr(self, name) for name in self.FIELDS}

    def total(self) -> Tensor:
        parts = list(self.parts().values())
        out = parts[0]
        for p in parts[1:]:
            out = out + p
        return out


def J_eigenprojection(space: PseudoHermitianSpace, theta: Tensor, sign: int) -> Tensor:
    """(theta + sign * J^* theta) / 2."""
    return (theta + sign * pullback(space, space.J, theta)) * HALF


def decompose_two_tensor(space: PseudoHermitianSpace, theta: Tensor) -> TwoTensorComponents:
    if theta.rank != 2 or theta.dim != space.m:
        raise ValueError(f"expected a rank-2 tensor on m={space.m}, got rank {theta.rank}")
    sym = (theta + theta.transpose(1, 0)) * HALF
    anti = (theta - theta.transpose(1, 0)) * HALF
    g, omega = space.g, space.omega

    s_block = J_eigenprojection(space, sym, space.s_g)
    scalar = g * Fraction(tensor_inner_product(space, s_block, g), tensor_inner_product(space, g, g))
    a_block = J_eigenprojection(space, anti, space.s_g)
    omega_part = omega * Fraction(tensor_inner_product(space, a_block, omega),
                                  tensor_inner_product(space, omega, omega))
    return TwoTensorComponents(
        s_plus=J_eigenprojection(space, sym, space.s_J),
        scalar_part=scalar,
        s0=s_block - scalar,
        lambda_plus=J_eigenprojection(space, anti, space.s_J),
        omega_part=omega_part,
        lambda0=a_block - omega_part,
    )


def two_form_blocks(space: PseudoHermitianSpace) -> dict[str, Subspace]:
    """Explicit bases of the six summands of the two-tensor decomposition.

    Built by projecting the coordinate basis; used for dimension tables and
    as the source modules for multiplicity counts.
    """
    m = space.m
    coords = [Tensor.basis_form(m, i, j) for i in range(m) for j in range(m)]
    comps = [decompose_two_tensor(space, t) for t in coords]
    return {name: Subspace.spanned_by(space, [c.parts()[name] for c in comps], 2, name)
            for name in TwoTensorComponents.FIELDS}


def sym_antisym_blocks(space: PseudoHermitianSpace) -> dict[str, Subspace]:
    m = space.m
    coords = [Tensor.basis_form(m, i, j) for i in range(m) for j in range(m)]
    sym = [(t + t.transpose(1, 0)) * HALF for t in coords]
    anti = [(t - t.transpose(1, 0)) * HALF for t in coords]
    return {
        "S2": Subspace.spanned_by(space, sym, 2, "S2"),
        "Lambda2": Subspace.spanned_by(space, anti, 2, "Lambda2"),
        "S2_gblock": Subspace.spanned_by(space, [J_eigenprojection(space, t, space.s_g) for t in sym], 2),
        "Lambda2_gblock": Subspace.spanned_by(space, [J_eigenprojection(space, t, space.s_g) for t in anti], 2),
    }


def lambda2_0(space: PseudoHermitianSpace) -> Subspace:
    """2-forms orthogonal to the Kahler form (the lambda_plus and lambda0 pieces)."""
    blocks = two_form_blocks(space)
    return Subspace(space, blocks["lambda_plus"].basis + blocks["lambda0"].basis, 2, "Lambda2_0")


# -- sigma, tau1 ----------------------------------------------------------------


def sigma_array(phi: np.ndarray, g: np.ndarray, J: np.ndarray) -> np.ndarray:
    """sigma(phi)(x,y;z) over any ring whose elements support + and *.

    phi(Jx)<y,z> - phi(Jy)<x,z> + phi(x)<Jy,z> - phi(y)<Jx,z>.
    """
    phiJ = phi.dot(J)
    JTg = J.T.dot(g)
    a = np.multiply.outer(phiJ, g)
    b = np.multiply.outer(phi, JTg)
    return a - a.transpose(1, 0, 2) + b - b.transpose(1, 0, 2)


def tau1_array(H: np.ndarray, inverse_metric: np.ndarray) -> np.ndarray:
    """(tau1 H)(x) = eps^{ij} H(x, e_i; e_j)."""
    return np.tensordot(H, inverse_metric, axes=([1, 2], [0, 1]))


def sigma(space: PseudoHermitianSpace, phi: Tensor) -> Tensor:
    if phi.rank != 1 or phi.dim != space.m:
        raise ValueError("sigma expects a 1-form")
    return Tensor(sigma_array(phi.data, space.metric, space.J))


def tau1(space: PseudoHermitianSpace, H: Tensor) -> Tensor:
    if H.rank != 3 or H.dim != space.m:
        raise ValueError("tau1 expects a rank-3 tensor")
    return Tensor(tau1_array(H.data, space.inverse_metric))


def J_star_form(space: PseudoHermitianSpace, phi: Tensor) -> Tensor:
    """(J^* phi)(x) = phi(J x)."""
    return Tensor(phi.data.dot(space.J))


# -- the space U of covariant-derivative Kahler tensors --------------------------


def _J_cols(space: PseudoHermitianSpace) -> list[list[tuple[int, Rational]]]:
    """J e_i = sum_a J[a, i] e_a, as sparse (a, J[a, i]) lists."""
    m = space.m
    return [[(a, space.J[a, i]) for a in range(m) if space.J[a, i]] for i in range(m)]


def u_constraint_rows(space: PseudoHermitianSpace):
    """Linear constraints cutting out U inside the rank-3 tensors.

    H(x,y;z) + H(y,x;z) = 0,
    H(x,y;z) - s_J H(Jx,Jy;z) = 0,
    H(x,y;z) + s_J H(x,Jy;Jz) = 0.
    """
    m = space.m
    Jc = _J_cols(space)
    s = space.s_J

    def idx(i, j, k):
        return (i * m + j) * m + k

    for x in range(m):
        for y in range(m):
            for z in range(m):
                yield {idx(x, y, z): 1, idx(y, x, z): 1} if x != y else {idx(x, x, z): 1}
                row = {idx(x, y, z): Fraction(1)}
                for a, ja in Jc[x]:
                    for b, jb in Jc[y]:
                        row[idx(a, b, z)] = row.get(idx(a, b, z), 0) - s * ja * jb
                yield row
                row = {idx(x, y, z): Fraction(1)}
                for b, jb in Jc[y]:
                    for c, jc in Jc[z]:
                        row[idx(x, b, c)] = row.get(idx(x, b, c), 0) + s * jb * jc
                yield row


def u_residuals(space: PseudoHermitianSpace, H: Tensor) -> list[Tensor]:
    """Residual tensors of the three defining symmetries of U (all zero iff H in U)."""
    J = space.J
    s = space.s_J
    d = H.data
    jj_first = np.einsum("abz,ax,by->xyz", d, J, J)
    jj_last = np.einsum("xbc,by,cz->xyz", d, J, J)
    return [
        Tensor(d + d.transpose(1, 0, 2)),
        Tensor(d - s * jj_first),
        Tensor(d + s * jj_last),
    ]


def in_u(space: PseudoHermitianSpace, H: Tensor) -> bool:
    return all(r.is_zero() for r in u_residuals(space, H))


def u_space_basis(space: PseudoHermitianSpace) -> Subspace:
    m = space.m
    vectors = linalg.nullspace(u_constraint_rows(space), m**3)
    return Subspace.from_vectors(space, vectors, 3, "U")


def sigma_range(space: PseudoHermitianSpace) -> Subspace:
    m = space.m
    images = [sigma(space, Tensor.basis_form(m, i)) for i in range(m)]
    return Subspace.spanned_by(space, images, 3, "U4")


def u3_space(space: PseudoHermitianSpace) -> Subspace:
    """U intersected with ker(tau1)."""
    U = u_space_basis(space)
    rows = []
    taus = [tau1(space, b) for b in U.basis]
    for i in range(space.m):
        rows.append([t.data[i] for t in taus])
    null = linalg.nullspace(rows, U.dim)
    return Subspace(space, [U.combine(v) for v in null], 3, "U3", check=False)


class NotInUError(ValueError):
    pass


def gray_hervella_split(space: PseudoHermitianSpace, H: Tensor) -> tuple[Tensor, Tensor]:
    """Split H in U as (H3 in ker tau1, H4 in Range sigma)."""
    if H.rank != 3 or H.dim != space.m:
        raise ValueError("expected a rank-3 tensor")
    if not in_u(space, H):
        raise NotInUError("input does not have the covariant-derivative Kahler symmetries")
    phi = J_star_form(space, tau1(space, H)) * Fraction(space.s_J, space.m - 2)
    H4 = sigma(space, phi)
    return H - H4, H4
