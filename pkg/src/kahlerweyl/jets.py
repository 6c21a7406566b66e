"""Truncated multivariate power series with exact rational coefficients.

A :class:`Jet` in ``nvars`` variables knows its coefficients up to total
degree ``order``.  Products are re-truncated to the smaller order of the
two factors; a partial derivative loses one order.  Plain numbers act as
exact constants and adopt the order of the jet they meet.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Mapping

from .linalg import normalize
from .tensor import _fmt

Exps = tuple[int, ...]


class Jet:
    __slots__ = ("nvars", "order", "coeffs")

    def __init__(self, nvars: int, order: int, coeffs: Mapping[Exps, Rational] | None = None):
        if order < 0:
            raise ValueError("jet order must be >= 0")
        self.nvars = nvars
        self.order = order
        clean = {}
        for e, c in (coeffs or {}).items():
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
            if c and sum(e) <= order:
                clean[tuple(e)] = normalize(c)
        self.coeffs = clean

    @classmethod
    def _raw(cls, nvars: int, order: int, coeffs: dict) -> "Jet":
        """Internal constructor for already-normalized, in-range coefficients."""
        out = cls.__new__(cls)
        out.nvars = nvars
        out.order = order
        out.coeffs = coeffs
        return out

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, nvars: int, order: int, c: Rational) -> "Jet":
        return cls(nvars, order, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, order: int, i: int) -> "Jet":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, order, {tuple(e): 1})

    @classmethod
    def monomial(cls, nvars: int, order: int, exps: Exps, c: Rational = 1) -> "Jet":
        return cls(nvars, order, {tuple(exps): c})

    # -- inspection --------------------------------------------------------

    def constant_term(self) -> Rational:
        return self.coeffs.get((0,) * self.nvars, 0)

    def coefficient(self, exps: Exps) -> Rational:
        return self.coeffs.get(tuple(exps), 0)

    def linear_coefficient(self, i: int) -> Rational:
        e = [0] * self.nvars
        e[i] = 1
        return self.coeffs.get(tuple(e), 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def variables_used(self) -> set[int]:
        return {i for e in self.coeffs for i, k in enumerate(e) if k}

    def min_degree(self) -> int | None:
        return min((sum(e) for e in self.coeffs), default=None)

    # -- arithmetic --------------------------------------------------------

    def _lift(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.nvars != self.nvars:
                raise ValueError("jets in different numbers of variables")
            return other
        if isinstance(other, Rational):
            return Jet.constant(self.nvars, self.order, other)
        raise TypeError(f"cannot combine Jet with {type(other).__name__}")

    def __add__(self, other) -> "Jet":
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        order = min(self.order, other.order)
        if order < self.order or order < other.order:
            return Jet(self.nvars, order, _merge(self.coeffs, other.coeffs))
        return Jet._raw(self.nvars, order, _merge(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        return Jet._raw(self.nvars, self.order, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other) -> "Jet":
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Jet":
        return (-self) + other

    def __mul__(self, other) -> "Jet":
        if isinstance(other, Rational):
            if not other:
                return Jet._raw(self.nvars, self.order, {})
            return Jet._raw(self.nvars, self.order,
                            {e: normalize(c * other) for e, c in self.coeffs.items()})
        if not isinstance(other, Jet):
            return NotImplemented
        other = self._lift(other)
        order = min(self.order, other.order)
        a = sorted(((sum(e), e, c) for e, c in self.coeffs.items()), key=lambda t: t[0])
        b = sorted(((sum(e), e, c) for e, c in other.coeffs.items()), key=lambda t: t[0])
        out: dict[Exps, Rational] = {}
        for da, ea, ca in a:
            if da > order:
                break
            for db, eb, cb in b:
                if da + db > order:
                    break
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return Jet._raw(self.nvars, order, {e: normalize(c) for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, c: Rational) -> "Jet":
        if not isinstance(c, Rational):
            return NotImplemented
        return self * (Fraction(1) / c)

    def __pow__(self, n: int) -> "Jet":
        out = Jet.constant(self.nvars, self.order, 1)
        for _ in range(n):
            out = out * self
        return out

    def partial(self, i: int) -> "Jet":
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        out = {}
        for e, c in self.coeffs.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return Jet._raw(self.nvars, self.order - 1, out)

    def truncate(self, order: int) -> "Jet":
        return Jet(self.nvars, min(order, self.order), self.coeffs)

    def with_order(self, order: int) -> "Jet":
        """Reinterpret as a jet of a different order (drops terms above it)."""
        return Jet(self.nvars, order, self.coeffs)

    def exp_double(self) -> "Jet":
        """Series of exp(2 f) for f(0) = 0, truncated at this jet's order."""
        if self.constant_term():
            raise ValueError("exp_double requires f(0) = 0")
        two_f = self * 2
        term = Jet.constant(self.nvars, self.order, 1)
        out = term
        for n in range(1, self.order + 1):
            term = term * two_f * Fraction(1, n)
            out = out + term
        return out

    def substitute_linear(self, T) -> "Jet":
        """Compose with the linear map x -> T x, i.e. x_i -> sum_j T[i][j] x_j."""
        n = self.nvars
        images = [sum((Jet.variable(n, self.order, j) * T[i][j] for j in range(n) if T[i][j]),
                      Jet(n, self.order)) for i in range(n)]
        out = Jet(n, self.order)
        for e, c in self.coeffs.items():
            term = Jet.constant(n, self.order, c)
            for i, k in enumerate(e):
                for _ in range(k):
                    term = term * images[i]
            out = out + term
        return out

    def agrees_with(self, other, order: int | None = None) -> bool:
        """Coefficientwise equality up to the common (or given) order."""
        other = self._lift(other)
        n = min(self.order, other.order) if order is None else order
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coeffs.get(e, 0) == other.coeffs.get(e, 0) for e in keys if sum(e) <= n)

    def __eq__(self, other) -> bool:
        if isinstance(other, (Jet, Rational)):
            return self.agrees_with(other)
        return NotImplemented

    __hash__ = None

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        return f"Jet({self.to_string()}; order={self.order})"

    def to_string(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, key=lambda e: (sum(e), tuple(-k for k in e))):
            c = self.coeffs[e]
            mono = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_terms(self) -> list:
        return [[list(e), _fmt(c)] for e, c in sorted(self.coeffs.items())]

    @classmethod
    def from_terms(cls, nvars: int, order: int, terms) -> "Jet":
        coeffs: dict[Exps, Rational] = {}
        for exps, c in terms:
            e = tuple(int(k) for k in exps)
            if len(e) != nvars or min(e, default=0) < 0:
                raise ValueError(f"bad exponent {exps!r}")
            coeffs[e] = coeffs.get(e, 0) + Fraction(str(c))
        return cls(nvars, order, coeffs)


def _merge(a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + c
        if v:
            out[e] = normalize(v)
        else:
            out.pop(e, None)
    return out
