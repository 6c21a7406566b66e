"""Exact linear algebra over the rationals.

Rows are handled sparsely as ``{column: value}`` dicts.  Elimination is
fraction-free: every row is scaled to a primitive integer vector and
updated by integer cross-multiplication, so no intermediate ``Fraction``
objects are ever built during the sweep.

A modular variant computes ranks over a large prime field.  It is fast but
only "high-confidence": the modular rank can drop below the rational rank
if the prime happens to divide a critical minor.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from numbers import Rational
from typing import Iterable, Mapping, Sequence

# 2**61 - 1 and 2**31 - 1 are both prime.
DEFAULT_PRIME = (1 << 61) - 1
BACKUP_PRIME = (1 << 31) - 1

SparseRow = Mapping[int, Rational]


class DegenerateGramError(ValueError):
    """Raised when a Gram (or any square) system is singular."""


def normalize(x: Rational) -> Rational:
    """Return ``x`` as an ``int`` when integral, else as a reduced ``Fraction``."""
    if isinstance(x, int):
        return x
    if not isinstance(x, Fraction):
        x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def _integer_row(row: SparseRow) -> dict[int, int]:
    den = 1
    for v in row.values():
        if v:
            den = lcm(den, Fraction(v).denominator)
    out = {}
    for c, v in row.items():
        if v:
            out[c] = int(Fraction(v) * den)
    return _primitive(out)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    if not row:
        return row
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g == 1:
        return row
    return {c: v // g for c, v in row.items()}


def _combine(a: dict[int, int], b: dict[int, int], col: int) -> dict[int, int]:
    """Eliminate ``col`` from ``a`` using pivot row ``b``: ``b[col]*a - a[col]*b``."""
    pa, pb = b[col], a[col]
    out = {c: pa * v for c, v in a.items()}
    for c, v in b.items():
        w = out.get(c, 0) - pb * v
        if w:
            out[c] = w
        else:
            out.pop(c, None)
    return _primitive(out)


def echelon(rows: Iterable[SparseRow]) -> dict[int, dict[int, int]]:
    """Incremental fraction-free row echelon form.

    Returns a map ``pivot column -> primitive integer row`` whose leading
    entry sits in that pivot column.
    """
    pivots: dict[int, dict[int, int]] = {}
    for raw in rows:
        insert_row(pivots, raw)
    return pivots


def insert_row(pivots: dict[int, dict[int, int]], raw: SparseRow) -> bool:
    """Reduce ``raw`` against ``pivots``; store it and return True if independent."""
    r = _integer_row(raw)
    while r:
        c = min(r)
        p = pivots.get(c)
        if p is None:
            pivots[c] = r
            return True
        r = _combine(r, p, c)
    return False


def reduced_echelon(rows: Iterable[SparseRow]) -> dict[int, dict[int, int]]:
    """Fraction-free reduced echelon form (each pivot column is clear elsewhere)."""
    pivots = echelon(rows)
    order = sorted(pivots, reverse=True)
    for c in order:
        p = pivots[c]
        for c2 in order:
            if c2 >= c:
                continue
            q = pivots[c2]
            if c in q:
                pivots[c2] = _combine(q, p, c)
    return pivots


def rank(rows: Iterable[SparseRow] | Sequence[Sequence[Rational]]) -> int:
    return len(echelon(_as_sparse(rows)))


def nullspace(rows: Iterable[SparseRow] | Sequence[Sequence[Rational]], ncols: int) -> list[list[Rational]]:
    """Basis of the right kernel, one dense vector per free column.

    Each vector is scaled to primitive integers.
    """
    piv = reduced_echelon(_as_sparse(rows))
    free = [c for c in range(ncols) if c not in piv]
    # free column -> [(pivot column, coefficient in that pivot row)]
    touches: dict[int, list[tuple[int, int, int]]] = {f: [] for f in free}
    for c, row in piv.items():
        for f, v in row.items():
            if f != c:
                touches[f].append((c, v, row[c]))
    basis = []
    for f in free:
        vec: dict[int, Fraction] = {f: Fraction(1)}
        for c, v, lead in touches[f]:
            vec[c] = Fraction(-v, lead)
        den = 1
        for v in vec.values():
            den = lcm(den, v.denominator)
        dense: list[Rational] = [0] * ncols
        ints = {c: int(v * den) for c, v in vec.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
        for c, v in ints.items():
            dense[c] = v // g
        basis.append(dense)
    return basis


def rank_mod(rows: Iterable[SparseRow] | Sequence[Sequence[Rational]], prime: int = DEFAULT_PRIME) -> int:
    """Rank over GF(prime); rational entries are mapped through modular inverses."""
    pivots: dict[int, dict[int, int]] = {}
    for raw in _as_sparse(rows):
        r = {}
        for c, v in raw.items():
            v = Fraction(v)
            x = v.numerator * pow(v.denominator, -1, prime) % prime
            if x:
                r[c] = x
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                inv = pow(r[c], -1, prime)
                pivots[c] = {k: v * inv % prime for k, v in r.items()}
                break
            f = r[c]
            for k, v in p.items():
                w = (r.get(k, 0) - f * v) % prime
                if w:
                    r[k] = w
                else:
                    r.pop(k, None)
    return len(pivots)


def _as_sparse(rows) -> Iterable[SparseRow]:
    for r in rows:
        if isinstance(r, Mapping):
            yield r
        else:
            yield {i: v for i, v in enumerate(r) if v}


def solve(matrix: Sequence[Sequence[Rational]], rhs: Sequence[Rational]) -> list[Rational]:
    """Solve a square nonsingular system exactly by Gauss-Jordan elimination."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    if any(len(row) != n + 1 for row in a) or len(rhs) != n:
        raise ValueError("solve expects a square system")
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise DegenerateGramError("degenerate Gram matrix: singular at column %d" % col)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        prow = [x * inv for x in a[col]]
        a[col] = prow
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], prow)]
    return [normalize(row[n]) for row in a]


def matmul(a: Sequence[Sequence[Rational]], b: Sequence[Sequence[Rational]]) -> list[list[Rational]]:
    return [[normalize(sum((x * y for x, y in zip(row, col)), 0)) for col in zip(*b)] for row in a]


def inverse(matrix: Sequence[Sequence[Rational]]) -> list[list[Rational]]:
    n = len(matrix)
    cols = [solve(matrix, [1 if i == j else 0 for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]
