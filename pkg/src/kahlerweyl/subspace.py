"""Subspaces of tensor spaces with an exact Gram matrix."""

from __future__ import annotations

from functools import cached_property
from numbers import Rational
from typing import Iterable, Sequence

from . import linalg
from .space import PseudoHermitianSpace, raise_all
from .tensor import Tensor, _fmt


class Subspace:
    """A linearly independent list of rank-k tensors spanning a subspace.

    Projections use the Gram matrix of the basis, so they are orthogonal
    projections for the (possibly indefinite) induced inner product.  That
    requires the Gram matrix to be invertible, which holds for every
    structure-group invariant subspace.
    """

    def __init__(self, space: PseudoHermitianSpace, basis: Sequence[Tensor], rank: int,
                 name: str = "", check: bool = True):
        self.space = space
        self.basis = list(basis)
        self.rank = rank
        self.name = name
        for b in self.basis:
            if b.rank != rank or b.dim != space.m:
                raise ValueError(f"basis element of rank {b.rank} in a rank-{rank} subspace")
        if check and linalg.rank(self._sparse) != len(self.basis):
            raise ValueError(f"basis of {name or 'subspace'} is linearly dependent")

    @classmethod
    def spanned_by(cls, space: PseudoHermitianSpace, tensors: Iterable[Tensor], rank: int,
                   name: str = "") -> "Subspace":
        """Subspace spanned by ``tensors``; a maximal independent subset is kept."""
        kept: list[Tensor] = []
        pivots: dict = {}
        for t in tensors:
            if linalg.insert_row(pivots, _sparse_of(t)):
                kept.append(t)
        return cls(space, kept, rank, name, check=False)

    @classmethod
    def from_vectors(cls, space, vectors, rank, name="") -> "Subspace":
        m = space.m
        return cls(space, [Tensor.from_flat(v, m, rank) for v in vectors], rank, name, check=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return self.dim

    @cached_property
    def _sparse(self) -> list[dict[int, Rational]]:
        return [_sparse_of(b) for b in self.basis]

    @cached_property
    def _raised(self) -> list[dict[int, Rational]]:
        return [_sparse_of(Tensor(raise_all(self.space, b.data))) for b in self.basis]

    @cached_property
    def gram(self) -> list[list[Rational]]:
        n = self.dim
        G = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                G[i][j] = G[j][i] = _sdot(self._sparse[i], self._raised[j])
        return G

    def inner_with(self, target: Tensor) -> list[Rational]:
        t = _sparse_of(target)
        return [_sdot(t, r) for r in self._raised]

    @cached_property
    def gram_inverse(self) -> list[list[Rational]]:
        return linalg.inverse(self.gram)

    def coefficients(self, target: Tensor) -> list[Rational]:
        """Solve ``gram . c = <basis, target>``; raises on a degenerate Gram matrix."""
        if self.dim == 0:
            return []
        rhs = self.inner_with(target)
        return [linalg.normalize(sum((a * b for a, b in zip(row, rhs)), 0)) for row in self.gram_inverse]

    def combine(self, coeffs: Sequence[Rational]) -> Tensor:
        out = Tensor.zeros(self.space.m, self.rank)
        data = out.data
        for c, b in zip(coeffs, self.basis):
            if c:
                data = data + c * b.data
        return Tensor(data)

    def project(self, target: Tensor) -> Tensor:
        return self.combine(self.coefficients(target))

    def residual(self, target: Tensor) -> Tensor:
        return target - self.project(target)

    def contains(self, target: Tensor) -> bool:
        """Exact membership via rank (independent of the Gram matrix)."""
        if target.is_zero():
            return True
        return linalg.rank(self._sparse + [_sparse_of(target)]) == self.dim

    def contains_subspace(self, other: "Subspace") -> bool:
        return linalg.rank(self._sparse + other._sparse) == self.dim

    def same_as(self, other: "Subspace") -> bool:
        return self.dim == other.dim and self.contains_subspace(other)

    def orthogonal_complement_in(self, sub: "Subspace", name: str = "") -> "Subspace":
        """Elements of ``self`` orthogonal to every element of ``sub``."""
        rows = [[_sdot(s, r) for r in self._raised] for s in sub._sparse]
        null = linalg.nullspace(rows, self.dim)
        return Subspace(self.space, [self.combine(v) for v in null], self.rank, name, check=False)

    def intersect(self, other: "Subspace", name: str = "") -> "Subspace":
        """Exact intersection by solving sum a_i b_i = sum c_j d_j."""
        n = self.dim
        cols = self._sparse + other._sparse
        width = self.space.m ** self.rank
        rows = [{k: v[idx] for k, v in enumerate(cols) if idx in v} for idx in range(width)]
        null = linalg.nullspace(rows, len(cols))
        return Subspace.spanned_by(self.space, [self.combine(v[:n]) for v in null], self.rank, name)

    def to_record(self) -> dict:
        return {
            "name": self.name,
            "rank": self.rank,
            "dim": self.dim,
            "basis": [b.to_record() for b in self.basis],
            "gram": [[_fmt(x) for x in row] for row in self.gram],
        }

    def __repr__(self) -> str:
        return f"Subspace({self.name or '?'}, dim={self.dim}, rank={self.rank})"


def _sparse_of(t: Tensor) -> dict[int, Rational]:
    flat = t.data.reshape(-1)
    return {i: v for i, v in enumerate(flat) if v}


def _sdot(a: dict, b: dict) -> Rational:
    if len(a) > len(b):
        a, b = b, a
    s = 0
    for k, v in a.items():
        w = b.get(k)
        if w:
            s += v * w
    return linalg.normalize(s)


def gram_determinant_nonzero(sub: Subspace) -> bool:
    return linalg.rank(sub.gram) == sub.dim


def stack(space: PseudoHermitianSpace, parts: Sequence[Subspace], name: str = "") -> Subspace:
    basis = [b for p in parts for b in p.basis]
    return Subspace.spanned_by(space, basis, parts[0].rank, name)
