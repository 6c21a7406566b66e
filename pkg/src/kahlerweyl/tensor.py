"""Dense covariant tensors with exact rational entries."""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from numbers import Rational
from typing import Any, Iterator

import numpy as np

from .linalg import normalize


def exact_array(data: Any) -> np.ndarray:
    arr = np.array(data, dtype=object)
    flat = arr.reshape(-1)
    for i, v in enumerate(flat):
        flat[i] = normalize(v)
    return arr


class Tensor:
    """A rank-k covariant tensor on an m-dimensional space.

    Entries live in an ``object`` ndarray of shape ``(m,) * k`` and are
    always ``int`` or ``Fraction``.  Index order is the slot order, so
    ``A[i, j, k, l] == A(e_i, e_j, e_k, e_l)``.
    """

    __slots__ = ("data",)

    def __init__(self, data: Any):
        arr = exact_array(data)
        if arr.ndim and len(set(arr.shape)) != 1:
            raise ValueError(f"tensor must have equal extents, got shape {arr.shape}")
        self.data = arr

    @classmethod
    def zeros(cls, dim: int, rank: int) -> "Tensor":
        return cls(np.zeros((dim,) * rank, dtype=object))

    @classmethod
    def from_flat(cls, flat, dim: int, rank: int) -> "Tensor":
        if len(flat) != dim**rank:
            raise ValueError(f"expected {dim**rank} coefficients, got {len(flat)}")
        return cls(np.array(list(flat), dtype=object).reshape((dim,) * rank))

    @classmethod
    def basis_form(cls, dim: int, *indices: int) -> "Tensor":
        """The decomposable tensor dx^{i1} (x) ... (x) dx^{ik} (0-based)."""
        t = cls.zeros(dim, len(indices))
        t.data[tuple(indices)] = 1
        return t

    @property
    def rank(self) -> int:
        return self.data.ndim

    @property
    def dim(self) -> int:
        return self.data.shape[0] if self.data.ndim else 0

    def flat(self) -> list[Rational]:
        return list(self.data.reshape(-1))

    def __getitem__(self, idx):
        return self.data[idx]

    def __iter__(self) -> Iterator:
        return iter(self.data)

    def _check(self, other: "Tensor") -> None:
        if self.data.shape != other.data.shape:
            raise ValueError(f"shape mismatch: {self.data.shape} vs {other.data.shape}")

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check(other)
        return Tensor(self.data + other.data)

    def __sub__(self, other: "Tensor") -> "Tensor":
        self._check(other)
        return Tensor(self.data - other.data)

    def __neg__(self) -> "Tensor":
        return Tensor(-self.data)

    def __mul__(self, c: Rational) -> "Tensor":
        if not isinstance(c, Rational):
            return NotImplemented
        return Tensor(self.data * c)

    __rmul__ = __mul__

    def __truediv__(self, c: Rational) -> "Tensor":
        return Tensor(self.data * Fraction(1) / c)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.data.shape == other.data.shape and bool(np.all(self.data == other.data))

    def __hash__(self):
        return hash((self.data.shape, tuple(self.flat())))

    def is_zero(self) -> bool:
        return not any(self.data.reshape(-1))

    def nonzero(self) -> dict[tuple[int, ...], Rational]:
        return {idx: v for idx, v in np.ndenumerate(self.data) if v}

    def transpose(self, *axes: int) -> "Tensor":
        return Tensor(np.transpose(self.data, axes))

    def __repr__(self) -> str:
        nz = self.nonzero()
        body = ", ".join(f"{k}: {v}" for k, v in itertools.islice(nz.items(), 8))
        more = ", ..." if len(nz) > 8 else ""
        return f"Tensor(rank={self.rank}, dim={self.dim}, {{{body}{more}}})"

    # -- serialization -------------------------------------------------

    def to_record(self) -> dict:
        return {
            "rank": self.rank,
            "dim": self.dim,
            "coeffs": [_fmt(v) for v in self.flat()],
        }

    @classmethod
    def from_record(cls, record: dict) -> "Tensor":
        try:
            rank, dim, coeffs = int(record["rank"]), int(record["dim"]), record["coeffs"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed tensor record: {exc}") from exc
        if rank < 0 or dim < 1:
            raise ValueError("malformed tensor record: bad rank/dim")
        return cls.from_flat([Fraction(str(c)) for c in coeffs], dim, rank)

    def to_json(self) -> str:
        return json.dumps(self.to_record())

    @classmethod
    def from_json(cls, text: str) -> "Tensor":
        return cls.from_record(json.loads(text))


def _fmt(v: Rational) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def contract_axis(data: np.ndarray, matrix: np.ndarray, axis: int) -> np.ndarray:
    """Replace slot ``axis`` by ``sum_j data[..., j, ...] * matrix[j, i]``."""
    mono = _monomial_columns(matrix)
    if mono is not None:
        # one nonzero per column (e.g. J): gather and rescale instead of a dense product
        rows, scale = mono
        out = np.take(data, rows, axis=axis)
        if any(c != 1 for c in scale):
            shape = [1] * data.ndim
            shape[axis] = len(scale)
            out = out * np.array(scale, dtype=object).reshape(shape)
        return out
    out = np.tensordot(data, matrix, axes=([axis], [0]))
    return np.moveaxis(out, -1, axis)


def _monomial_columns(matrix: np.ndarray):
    rows, scale = [], []
    for i in range(matrix.shape[1]):
        nz = [j for j in range(matrix.shape[0]) if matrix[j, i]]
        if len(nz) != 1:
            return None
        rows.append(nz[0])
        scale.append(matrix[nz[0], i])
    return rows, scale


def pullback_array(data: np.ndarray, T: np.ndarray) -> np.ndarray:
    for axis in range(data.ndim):
        data = contract_axis(data, T, axis)
    return data
