"""Para/pseudo-Hermitian vector spaces and their structure groups.

Coordinates come in pairs ``(x1, x2), (x3, x4), ...`` with the canonical
structure ``J e1 = e2, J e2 = s_J e1`` on each pair.  The flat metric is
eps_p-weighted; on pair ``p`` the diagonal is
``(eps_p, s_g * eps_p)`` so that ``g(J., J.) = s_g g(., .)``.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

from . import linalg
from .tensor import Tensor, exact_array, pullback_array


class StructureKind(enum.Enum):
    COMPLEX = "complex"
    PARA = "para"

    @property
    def s_J(self) -> int:
        """J^2 = s_J id."""
        return -1 if self is StructureKind.COMPLEX else 1

    @property
    def s_g(self) -> int:
        """J^* g = s_g g."""
        return -self.s_J

    @classmethod
    def parse(cls, name: "str | StructureKind") -> "StructureKind":
        if isinstance(name, cls):
            return name
        key = name.strip().lower()
        aliases = {"complex": cls.COMPLEX, "hermitian": cls.COMPLEX, "para": cls.PARA,
                   "paracomplex": cls.PARA, "para-complex": cls.PARA}
        if key not in aliases:
            raise ValueError(f"unknown structure kind {name!r}")
        return aliases[key]


# (kind, eps11, eps22) accepted by build_space.
ADMITTED_CONFIGS = (
    (StructureKind.COMPLEX, 1, 1),
    (StructureKind.COMPLEX, 1, -1),
    (StructureKind.COMPLEX, -1, -1),
    (StructureKind.PARA, 1, 1),
)


class IncompatibleStructureError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PseudoHermitianSpace:
    kind: StructureKind
    metric: np.ndarray
    J: np.ndarray
    pair_signs: tuple[int, ...] = ()
    inverse_metric: np.ndarray = field(init=False)
    kahler_form: np.ndarray = field(init=False)

    def __post_init__(self):
        g = exact_array(self.metric)
        J = exact_array(self.J)
        m = g.shape[0]
        if g.shape != (m, m) or J.shape != (m, m):
            raise ValueError("metric and J must be square of equal size")
        if m < 4 or m % 2:
            raise ValueError("even dimension required (m >= 4)")
        if np.any(g != g.T):
            raise ValueError("metric must be symmetric")
        ident = np.identity(m, dtype=object)
        if np.any(J.dot(J) != self.kind.s_J * ident):
            raise IncompatibleStructureError(f"J^2 != {self.kind.s_J} id")
        if np.any(J.T.dot(g).dot(J) != self.kind.s_g * g):
            raise IncompatibleStructureError("metric is not J-compatible: g(J., J.) != s_g g")
        inv = exact_array(linalg.inverse(g.tolist()))
        omega = g.dot(J)
        if np.any(omega != -omega.T):
            raise IncompatibleStructureError("Kahler form is not antisymmetric")
        object.__setattr__(self, "metric", g)
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "inverse_metric", inv)
        object.__setattr__(self, "kahler_form", exact_array(omega))

    @property
    def m(self) -> int:
        return self.metric.shape[0]

    @property
    def s_J(self) -> int:
        return self.kind.s_J

    @property
    def s_g(self) -> int:
        return self.kind.s_g

    @property
    def signature(self) -> tuple[int, int]:
        d = np.diag(self.metric)
        if np.count_nonzero(self.metric) == len(d):
            return (sum(1 for x in d if x > 0), sum(1 for x in d if x < 0))
        ev = np.linalg.eigvalsh(self.metric.astype(float))
        return (int((ev > 0).sum()), int((ev < 0).sum()))

    @property
    def g(self) -> Tensor:
        return Tensor(self.metric)

    @property
    def omega(self) -> Tensor:
        return Tensor(self.kahler_form)

    def label(self) -> str:
        signs = ",".join(str(s) for s in self.pair_signs)
        return f"{self.kind.value}[m={self.m};eps={signs}]"

    def config(self) -> dict:
        return {"kind": self.kind.value, "m": self.m, "sig": list(self.pair_signs)}

    def __eq__(self, other):
        if not isinstance(other, PseudoHermitianSpace):
            return NotImplemented
        return (self.kind is other.kind and np.array_equal(self.metric, other.metric)
                and np.array_equal(self.J, other.J))

    def __hash__(self):
        return hash((self.kind, tuple(self.metric.reshape(-1)), tuple(self.J.reshape(-1))))

    def __repr__(self):
        return f"PseudoHermitianSpace({self.label()})"


def canonical_J(kind: StructureKind, m: int) -> np.ndarray:
    J = np.zeros((m, m), dtype=object)
    for p in range(0, m, 2):
        J[p + 1, p] = 1          # J e_{2p+1} = e_{2p+2}
        J[p, p + 1] = kind.s_J   # J e_{2p+2} = s_J e_{2p+1}
    return J


def build_space_general(kind, m: int, diagonal: Sequence[int]) -> PseudoHermitianSpace:
    """Space with the canonical J and a diagonal metric given entrywise.

    ``diagonal`` lists all ``m`` diagonal entries; compatibility with J is
    validated, not assumed.
    """
    kind = StructureKind.parse(kind)
    if m % 2:
        raise ValueError("odd dimension: even dimension required")
    if m < 4:
        raise ValueError("even dimension required (m >= 4)")
    if len(diagonal) != m:
        raise ValueError(f"need {m} diagonal entries, got {len(diagonal)}")
    g = np.diag(np.array([normalize_sign(x) for x in diagonal], dtype=object))
    pair_signs = tuple(int(diagonal[p]) for p in range(0, m, 2))
    return PseudoHermitianSpace(kind, g, canonical_J(kind, m), pair_signs)


def normalize_sign(x) -> Rational:
    x = linalg.normalize(Fraction(x))
    if x == 0:
        raise ValueError("metric diagonal entries must be nonzero")
    return x


def pair_diagonal(kind, pair_signs: Sequence[int]) -> list[int]:
    kind = StructureKind.parse(kind)
    out = []
    for e in pair_signs:
        out += [e, kind.s_g * e]
    return out


def build_space(kind, eps11: int = 1, eps22: int = 1) -> PseudoHermitianSpace:
    """The four-dimensional model space for one of the admitted configurations."""
    kind = StructureKind.parse(kind)
    if (kind, eps11, eps22) not in ADMITTED_CONFIGS:
        raise ValueError(f"configuration ({kind.value}, {eps11}, {eps22}) is not admitted")
    return build_space_general(kind, 4, pair_diagonal(kind, (eps11, eps22)))


def build_space_pairs(kind, pair_signs: Sequence[int]) -> PseudoHermitianSpace:
    """Any even dimension: one sign per coordinate pair (complex or para)."""
    kind = StructureKind.parse(kind)
    return build_space_general(kind, 2 * len(pair_signs), pair_diagonal(kind, pair_signs))


def all_configurations(m: int = 4) -> list[PseudoHermitianSpace]:
    if m == 4:
        return [build_space(*c) for c in ADMITTED_CONFIGS]
    if m == 6:
        return [build_space_pairs(StructureKind.COMPLEX, (1, 1, 1)),
                build_space_pairs(StructureKind.COMPLEX, (1, 1, -1)),
                build_space_pairs(StructureKind.COMPLEX, (-1, -1, -1)),
                build_space_pairs(StructureKind.PARA, (1, 1, 1))]
    raise ValueError("only m = 4 and m = 6 have preset configurations")


# -- tensors attached to a space --------------------------------------------


def tensor_inner_product(space: PseudoHermitianSpace, A: Tensor, B: Tensor) -> Rational:
    """Full contraction of A and B against one inverse metric per slot."""
    if A.rank != B.rank or A.dim != space.m or B.dim != space.m:
        raise ValueError(f"rank/dim mismatch: {A.rank}/{A.dim} vs {B.rank}/{B.dim} on m={space.m}")
    raised = raise_all(space, B.data)
    return linalg.normalize(np.sum(A.data * raised) if A.rank else A.data[()] * raised[()])


def raise_all(space: PseudoHermitianSpace, data: np.ndarray) -> np.ndarray:
    inv = space.inverse_metric
    if _is_diagonal(inv):
        w = np.array(np.diag(inv), dtype=object)
        out = data
        for axis in range(data.ndim):
            shape = [1] * data.ndim
            shape[axis] = -1
            out = out * w.reshape(shape)
        return out
    return pullback_array(data, inv)


def _is_diagonal(a: np.ndarray) -> bool:
    return np.count_nonzero(a - np.diag(np.diag(a))) == 0


def pullback(space: PseudoHermitianSpace, T, A: Tensor) -> Tensor:
    """(T^* A)(x1, ..., xk) = A(T x1, ..., T xk)."""
    T = exact_array(T)
    if T.shape != (space.m, space.m) or A.dim != space.m:
        raise ValueError("dimension mismatch in pullback")
    return Tensor(pullback_array(A.data, T))


def J_pullback(space: PseudoHermitianSpace, A: Tensor) -> Tensor:
    return pullback(space, space.J, A)


# -- structure group ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StructureGroupElement:
    T: np.ndarray
    chi: int

    def validate(self, space: PseudoHermitianSpace) -> None:
        T = self.T
        if np.any(T.T.dot(space.metric).dot(T) != space.metric):
            raise ValueError("T is not an isometry")
        if np.any(space.J.dot(T) != self.chi * T.dot(space.J)):
            raise ValueError(f"J T != {self.chi} T J")

    def __matmul__(self, other: "StructureGroupElement") -> "StructureGroupElement":
        return StructureGroupElement(exact_array(self.T.dot(other.T)), self.chi * other.chi)


def _param(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-6, 6), rng.randint(1, 6))


def _rotation_pair(rng, hyperbolic: bool) -> tuple[Fraction, Fraction]:
    """Rational (c, s) with c^2 + s^2 = 1, or c^2 - s^2 = 1 when hyperbolic."""
    while True:
        t = _param(rng)
        if hyperbolic:
            if t * t == 1:
                continue
            return (1 + t * t) / (1 - t * t), 2 * t / (1 - t * t)
        return (1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)


def _pair_generator(space: PseudoHermitianSpace, p: int, rng) -> np.ndarray:
    """a*id + b*J on one coordinate pair; an isometry commuting with J."""
    a, b = _rotation_pair(rng, hyperbolic=space.s_J == 1)
    T = np.identity(space.m, dtype=object)
    i, j = 2 * p, 2 * p + 1
    T[i, i] = T[j, j] = a
    T[j, i] = b
    T[i, j] = b * space.s_J
    return T


def _mixing_generator(space: PseudoHermitianSpace, p: int, q: int, twisted: bool, rng) -> np.ndarray:
    """c*id + s*K mixing pairs p and q, with K commuting with J.

    Untwisted K is g-antisymmetric (e_p -> e_q, e_q -> -r e_p); twisted K is
    S*J with S g-symmetric (e_p -> e_q, e_q -> r e_p), r = eps_p / eps_q.
    In both cases K^T g K = lam * g on the block, so c^2 + lam s^2 = 1.
    """
    m = space.m
    g = space.metric
    eps_p, eps_q = g[2 * p, 2 * p], g[2 * q, 2 * q]
    r = Fraction(eps_p) / eps_q
    K = np.zeros((m, m), dtype=object)
    for k in range(2):
        K[2 * q + k, 2 * p + k] = 1
        K[2 * p + k, 2 * q + k] = r if twisted else -r
    lam = eps_p * eps_q
    if twisted:
        K = K.dot(space.J)
        lam *= space.s_g
    c, s = _rotation_pair(rng, hyperbolic=lam == -1)
    T = np.identity(m, dtype=object)
    for idx in (2 * p, 2 * p + 1, 2 * q, 2 * q + 1):
        T[idx, idx] = c
    return exact_array(T + s * K)


def conjugation(space: PseudoHermitianSpace) -> StructureGroupElement:
    """diag(1, -1, 1, -1, ...): an isometry anticommuting with J."""
    m = space.m
    T = np.diag(np.array([1 if i % 2 == 0 else -1 for i in range(m)], dtype=object))
    return StructureGroupElement(T, -1)


def random_structure_group_element(space: PseudoHermitianSpace, commuting: bool = True,
                                   seed: int | None = None, length: int = 4) -> StructureGroupElement:
    """Random exact element of U* with chi = +1 (commuting) or -1.

    ``seed=None`` returns the identity (or the bare conjugation for chi = -1).
    """
    m = space.m
    out = StructureGroupElement(np.identity(m, dtype=object), 1)
    if seed is not None:
        rng = random.Random(seed)
        npairs = m // 2
        for _ in range(length):
            if npairs > 1 and rng.random() < 0.6:
                p, q = rng.sample(range(npairs), 2)
                T = _mixing_generator(space, p, q, rng.random() < 0.5, rng)
            else:
                T = _pair_generator(space, rng.randrange(npairs), rng)
            out = out @ StructureGroupElement(exact_array(T), 1)
    if not commuting:
        out = out @ conjugation(space)
    out.validate(space)
    return out
