"""Metric germs at the origin and the connections built from them.

A germ is a symmetric matrix of :class:`~kahlerweyl.jets.Jet` entries whose
value at 0 is the flat metric of a :class:`PseudoHermitianSpace`; the
(para)complex structure is the constant canonical J of that space, which is
integrable.  Christoffel symbols are stored as ``gamma[k, i, j]`` with
``nabla_{d_i} d_j = gamma[k, i, j] d_k``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import linalg
from .curvature import higa_xi, ricci, ricci_antisym
from .jets import Exps, Jet
from .space import ADMITTED_CONFIGS, PseudoHermitianSpace, StructureKind, build_space, build_space_pairs
from .tensor import Tensor, exact_array
from .twoforms import gray_hervella_split, sigma_array

DEFAULT_ORDER = 4


def jet_array(shape, m: int, order: int) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    for idx in np.ndindex(*shape):
        out[idx] = Jet(m, order)
    return out


def at_origin(arr: np.ndarray) -> Tensor:
    return Tensor(np.vectorize(lambda j: j.constant_term(), otypes=[object])(arr))


def all_zero(arr: np.ndarray) -> bool:
    return all(j.is_zero() for j in arr.reshape(-1))


def _matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n, k = a.shape
    _, p = b.shape
    out = np.empty((n, p), dtype=object)
    for i in range(n):
        for j in range(p):
            acc = None
            for l in range(k):
                x, y = a[i, l], b[l, j]
                if not x or not y:
                    continue
                t = x * y
                acc = t if acc is None else acc + t
            out[i, j] = acc if acc is not None else 0
    return out


class GermError(ValueError):
    pass


@dataclass(eq=False)
class MetricGerm:
    """Metric germ ``g = g0 + h`` with ``h(0) = 0`` and ``g(J., J.) = s_g g``."""

    space: PseudoHermitianSpace
    g: np.ndarray
    order: int
    first_jet_zero: bool = False
    lemma_f: Jet | None = None
    inverse: np.ndarray = field(init=False, repr=False)
    _memo: dict = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self):
        m = self.space.m
        if self.g.shape != (m, m):
            raise GermError("metric germ has the wrong shape")
        for i in range(m):
            for j in range(m):
                e = self.g[i, j]
                if not isinstance(e, Jet) or e.nvars != m:
                    raise GermError("metric entries must be jets in m variables")
                self.g[i, j] = e.with_order(self.order)
                if not e.agrees_with(self.g[j, i]):
                    raise GermError("metric germ is not symmetric")
                if e.constant_term() != self.space.metric[i, j]:
                    raise GermError("g(0) must equal the flat model metric")
                if self.first_jet_zero and any(e.linear_coefficient(k) for k in range(m)):
                    raise GermError("dg(0) = 0 was requested but the germ has linear terms")
        J = self.space.J
        compat = J.T.dot(self.g).dot(J) - self.space.s_g * self.g
        if not all_zero(compat):
            raise GermError("germ is not J-compatible: g(J., J.) != s_g g")
        self.inverse = self._inverse()

    @property
    def m(self) -> int:
        return self.space.m

    def _inverse(self) -> np.ndarray:
        N = self.space.inverse_metric
        h = self.g - self.space.metric
        X = -_matmul(N, h)
        term = N.copy()
        out = _as_jets(N, self.m, self.order)
        for _ in range(self.order):
            term = _matmul(X, term)
            out = out + term
        return _as_jets(out, self.m, self.order)

    def check_inverse(self) -> bool:
        prod = _matmul(self.g, self.inverse) - np.identity(self.m, dtype=object)
        return all_zero(_as_jets(prod, self.m, self.order))

    def truncate(self, order: int) -> "MetricGerm":
        g = np.vectorize(lambda j: j.truncate(order), otypes=[object])(self.g)
        f = self.lemma_f.truncate(order) if self.lemma_f is not None else None
        return MetricGerm(self.space, g, min(order, self.order), self.first_jet_zero, f)

    def with_order(self, order: int) -> "MetricGerm":
        """Same polynomial metric, tracked to a different order."""
        g = np.vectorize(lambda j: j.with_order(order), otypes=[object])(self.g)
        f = self.lemma_f.with_order(order) if self.lemma_f is not None else None
        return MetricGerm(self.space, g, order, self.first_jet_zero, f)

    def dg(self) -> np.ndarray:
        """``dg[k, i, j] = d_k g_ij``."""
        m = self.m
        out = np.empty((m, m, m), dtype=object)
        for k in range(m):
            for i in range(m):
                for j in range(i, m):
                    out[k, i, j] = out[k, j, i] = self.g[i, j].partial(k)
        return out

    def kahler_form(self) -> np.ndarray:
        """Omega_ij = g(e_i, J e_j) as jets."""
        return _matmul(self.g, self.space.J)

    def to_record(self) -> dict:
        sp = self.space
        entries = {}
        for i in range(self.m):
            for j in range(i, self.m):
                terms = self.g[i, j].to_terms()
                if terms:
                    entries[f"{i},{j}"] = terms
        return {"kind": sp.kind.value, "sig": list(sp.pair_signs), "m": self.m, "D": self.order,
                "entries": entries}

    @classmethod
    def from_record(cls, rec: Mapping) -> "MetricGerm":
        try:
            kind = StructureKind.parse(rec["kind"])
            sig = [int(s) for s in rec["sig"]]
            order = int(rec.get("D", DEFAULT_ORDER))
            entries = rec["entries"]
        except (KeyError, TypeError, ValueError) as exc:
            raise GermError(f"malformed germ record: {exc}") from exc
        space = build_space(kind, *sig) if len(sig) == 2 else build_space_pairs(kind, sig)
        m = space.m
        g = np.empty((m, m), dtype=object)
        for i in range(m):
            for j in range(m):
                g[i, j] = Jet(m, order)
        for key, terms in entries.items():
            i, j = (int(s) for s in str(key).strip("()[] ").split(","))
            e = Jet.from_terms(m, order, terms)
            g[i, j] = e
            g[j, i] = e
        return cls(space, g, order)

    def to_json(self) -> str:
        return json.dumps(self.to_record())

    @classmethod
    def from_json(cls, text: str) -> "MetricGerm":
        return cls.from_record(json.loads(text))


def _as_jets(arr: np.ndarray, m: int, order: int) -> np.ndarray:
    return np.vectorize(lambda v: v.with_order(min(order, v.order)) if isinstance(v, Jet)
                        else Jet.constant(m, order, v), otypes=[object])(arr)


# -- germ families ------------------------------------------------------------------


def flat_metric(space: PseudoHermitianSpace, order: int = DEFAULT_ORDER) -> MetricGerm:
    g = _as_jets(space.metric, space.m, order)
    return MetricGerm(space, g, order, first_jet_zero=True)


def lemma41_metric(space: PseudoHermitianSpace, f: Jet, order: int | None = None) -> MetricGerm:
    """eps11 e^{2f} on the (x1, x2) pair and the flat eps22 block on (x3, x4).

    ``f`` must depend on x1 and x3 only and vanish at 0.
    """
    if space.m != 4:
        raise GermError("this conformal family lives on R^4")
    if f.nvars != 4:
        raise GermError("f must be a jet in 4 variables")
    if f.variables_used() - {0, 2}:
        raise GermError("f may depend on x1 and x3 only")
    if f.constant_term():
        raise GermError("f(0) must vanish")
    order = f.order if order is None else order
    f = f.with_order(order)
    e2f = f.exp_double()
    g = _as_jets(space.metric, 4, order)
    g[0, 0] = e2f * space.metric[0, 0]
    g[1, 1] = e2f * space.metric[1, 1]
    return MetricGerm(space, g, order, lemma_f=f)


def compatible_part(space: PseudoHermitianSpace, h) -> np.ndarray:
    """(h + s_g J^T h J) / 2: the J-compatible part of a symmetric matrix."""
    h = exact_array(h)
    J = space.J
    return exact_array((h + space.s_g * J.T.dot(h).dot(J)) * Fraction(1, 2))


def hermitian_germ(space: PseudoHermitianSpace, perturbation: Mapping[Exps, object],
                   order: int = DEFAULT_ORDER, first_jet_zero: bool | None = None) -> MetricGerm:
    """g = g0 + sum_e h_e x^e for symmetric J-compatible coefficient matrices h_e.

    Monomials must have degree >= 1; quadratic-only perturbations give
    ``dg(0) = 0``.
    """
    m = space.m
    J = space.J
    g = _as_jets(space.metric, m, order)
    degrees = set()
    for e, h in perturbation.items():
        e = tuple(e)
        if len(e) != m or sum(e) < 1:
            raise GermError(f"bad monomial {e}")
        degrees.add(sum(e))
        h = exact_array(h)
        if h.shape != (m, m) or np.any(h != h.T):
            raise GermError("perturbation coefficients must be symmetric m x m matrices")
        if np.any(J.T.dot(h).dot(J) != space.s_g * h):
            raise GermError(f"perturbation at monomial {e} is not J-compatible")
        for i in range(m):
            for j in range(m):
                if h[i, j]:
                    g[i, j] = g[i, j] + Jet.monomial(m, order, e, h[i, j])
    if first_jet_zero is None:
        first_jet_zero = 1 not in degrees
    return MetricGerm(space, g, order, first_jet_zero)


def monomials(m: int, degree: int) -> list[Exps]:
    out: list[Exps] = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(tuple(prefix + [left]))
            return
        for k in range(left, -1, -1):
            rec(prefix + [k], left - k, slots - 1)

    rec([], degree, m)
    return out


def compatible_basis(space: PseudoHermitianSpace) -> list[np.ndarray]:
    """Basis of the symmetric J-compatible m x m matrices."""
    m = space.m
    mats = []
    for i in range(m):
        for j in range(i, m):
            e = np.zeros((m, m), dtype=object)
            e[i, j] = e[j, i] = 1
            mats.append(compatible_part(space, e))
    keep, pivots = [], {}
    for a in mats:
        if linalg.insert_row(pivots, {k: v for k, v in enumerate(a.reshape(-1)) if v}):
            keep.append(a)
    return keep


def random_hermitian_germ(space: PseudoHermitianSpace, rng: random.Random,
                          order: int = DEFAULT_ORDER, degrees: Sequence[int] = (1, 2),
                          density: float = 0.5) -> MetricGerm:
    basis = compatible_basis(space)
    pert = {}
    for d in degrees:
        for e in monomials(space.m, d):
            if rng.random() > density:
                continue
            h = sum((b * Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for b in basis),
                    np.zeros((space.m, space.m), dtype=object))
            pert[e] = h
    return hermitian_germ(space, pert, order)


def pullback_germ(germ: MetricGerm, T) -> MetricGerm:
    """g_T(x) = T^T g(T x) T for a structure-group element T."""
    T = exact_array(T)
    m = germ.m
    Tl = T.tolist()
    moved = np.vectorize(lambda j: j.substitute_linear(Tl), otypes=[object])(germ.g)
    g = _matmul(_matmul(T.T, moved), T)
    return MetricGerm(germ.space, _as_jets(g, m, germ.order), germ.order, germ.first_jet_zero)


def conformal_germ(germ: MetricGerm, u: Jet) -> MetricGerm:
    """e^{2u} g for u(0) = 0."""
    factor = u.with_order(germ.order).exp_double()
    g = np.vectorize(lambda j: j * factor, otypes=[object])(germ.g)
    return MetricGerm(germ.space, g, germ.order)


def kahler_quadratic_family(space: PseudoHermitianSpace, order: int = DEFAULT_ORDER) -> list[MetricGerm]:
    """Basis of quadratic J-compatible perturbations with d(Omega) = 0 identically.

    Constant J is integrable, so these germs are genuinely (para/pseudo-)Kahler.
    """
    m = space.m
    basis = compatible_basis(space)
    monos = monomials(m, 2)
    params = [(e, b) for e in monos for b in basis]
    J = space.J
    # d(Omega)_{ijk} is linear in the parameters; collect one row per (i<j<k, linear monomial).
    columns = []
    for e, b in params:
        omega = b.dot(J)
        col = {}
        for i in range(m):
            for j in range(i + 1, m):
                for k in range(j + 1, m):
                    for (a, c, d) in ((i, j, k), (j, k, i), (k, i, j)):
                        # d_a (Omega_cd x^e)
                        if e[a] and omega[c, d]:
                            f = list(e)
                            f[a] -= 1
                            key = (i, j, k, tuple(f))
                            col[key] = col.get(key, 0) + e[a] * omega[c, d]
        columns.append(col)
    keys = sorted({k for col in columns for k in col})
    rows = [{n: col[k] for n, col in enumerate(columns) if col.get(k)} for k in keys]
    null = linalg.nullspace(rows, len(params))
    germs = []
    for v in null:
        pert: dict[Exps, np.ndarray] = {}
        for coeff, (e, b) in zip(v, params):
            if coeff:
                pert[e] = pert.get(e, np.zeros((m, m), dtype=object)) + coeff * b
        germs.append(hermitian_germ(space, pert, order, first_jet_zero=True))
    return germs


# -- connections ----------------------------------------------------------------------


@dataclass(eq=False)
class ConnectionGerm:
    gamma: np.ndarray
    phi: np.ndarray | None = None
    torsion_free: bool = True

    @property
    def m(self) -> int:
        return self.gamma.shape[0]

    def __post_init__(self):
        if self.torsion_free:
            m = self.m
            for k in range(m):
                for i in range(m):
                    for j in range(i + 1, m):
                        if not self.gamma[k, i, j].agrees_with(self.gamma[k, j, i]):
                            raise GermError("connection declared torsion-free is not symmetric")


def levi_civita(germ: MetricGerm) -> ConnectionGerm:
    """Koszul formula: Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)."""
    if "lc" not in germ._memo:
        germ._memo["lc"] = _levi_civita(germ)
    return germ._memo["lc"]


def _levi_civita(germ: MetricGerm) -> ConnectionGerm:
    if germ.order < 2:
        raise GermError("need germ order >= 2 to evaluate curvature")
    m = germ.m
    dg = germ.dg()
    lower = np.empty((m, m, m), dtype=object)
    for l in range(m):
        for i in range(m):
            for j in range(i, m):
                lower[l, i, j] = lower[l, j, i] = (dg[i, j, l] + dg[j, i, l] - dg[l, i, j]) * Fraction(1, 2)
    gamma = np.empty((m, m, m), dtype=object)
    inv = germ.inverse
    for k in range(m):
        for i in range(m):
            for j in range(i, m):
                acc = Jet(m, germ.order - 1)
                for l in range(m):
                    if inv[k, l] and lower[l, i, j]:
                        acc = acc + inv[k, l] * lower[l, i, j]
                gamma[k, i, j] = gamma[k, j, i] = acc
    return ConnectionGerm(gamma)


def dual_vector(germ: MetricGerm, phi: np.ndarray) -> np.ndarray:
    m = germ.m
    return np.array([sum((germ.inverse[k, l] * phi[l] for l in range(m)), Jet(m, germ.order))
                     for k in range(m)], dtype=object)


def weyl_connection(germ: MetricGerm, phi: np.ndarray, base: ConnectionGerm | None = None) -> ConnectionGerm:
    """nabla_x y = nabla^g_x y + phi(x) y + phi(y) x - g(x, y) phi^*."""
    m = germ.m
    phi = np.array([p if isinstance(p, Jet) else Jet.constant(m, germ.order, p) for p in phi],
                   dtype=object)
    base = base or levi_civita(germ)
    phi_up = dual_vector(germ, phi)
    gamma = base.gamma.copy()
    for k in range(m):
        for i in range(m):
            for j in range(m):
                t = gamma[k, i, j] - germ.g[i, j] * phi_up[k]
                if k == j:
                    t = t + phi[i]
                if k == i:
                    t = t + phi[j]
                gamma[k, i, j] = t
    return ConnectionGerm(gamma, phi)


def curvature_at_origin(conn: ConnectionGerm, germ: MetricGerm) -> Tensor:
    """R(x,y,z,w) = g(R(x,y)z, w) at 0, with R(x,y) = [nabla_x, nabla_y] - nabla_[x,y]."""
    m = conn.m
    G = conn.gamma
    if min(j.order for j in G.reshape(-1)) < 1:
        raise GermError("connection must be known to first order")
    G0 = np.vectorize(lambda j: j.constant_term(), otypes=[object])(G)
    dG = np.empty((m, m, m, m), dtype=object)  # dG[i, l, j, k] = d_i Gamma^l_jk (0)
    for i in range(m):
        for l in range(m):
            for j in range(m):
                for k in range(m):
                    dG[i, l, j, k] = G[l, j, k].linear_coefficient(i)
    # Rup[l, i, j, k] = coefficient of d_l in R(d_i, d_j) d_k
    Rup = (np.einsum("iljk->lijk", dG) - np.einsum("jlik->lijk", dG)
           + np.einsum("pjk,lip->lijk", G0, G0) - np.einsum("pik,ljp->lijk", G0, G0))
    g0 = germ.space.metric
    return Tensor(np.einsum("lijk,lw->ijkw", Rup, g0))


# -- covariant derivative of the Kahler form --------------------------------------------


class SignConventionError(RuntimeError):
    """The two independent computations of nabla^g Omega disagree."""


def nabla_g_omega_direct(germ: MetricGerm, conn: ConnectionGerm | None = None) -> np.ndarray:
    """H[i, j, k] = (nabla_{e_k} Omega)(e_i, e_j) from the Levi-Civita connection."""
    m = germ.m
    conn = conn or levi_civita(germ)
    G = conn.gamma
    omega = _as_jets(germ.kahler_form(), m, germ.order)
    H = np.empty((m, m, m), dtype=object)
    for i in range(m):
        for j in range(m):
            for k in range(m):
                t = omega[i, j].partial(k)
                for l in range(m):
                    if omega[l, j]:
                        t = t - G[l, k, i] * omega[l, j]
                    if omega[i, l]:
                        t = t - G[l, k, j] * omega[i, l]
                H[i, j, k] = t
    return H


def nabla_g_omega_formula(germ: MetricGerm) -> np.ndarray:
    """Closed formula in first derivatives of g, valid for integrable constant J.

    H_ijk = 1/2 { (J e_j) g_ik - (J e_i) g_jk + d_j g(J e_i, e_k) - d_i g(J e_j, e_k) }.
    """
    m = germ.m
    J = germ.space.J
    dg = germ.dg()
    H = np.empty((m, m, m), dtype=object)
    for i in range(m):
        for j in range(m):
            for k in range(m):
                t = Jet(m, germ.order - 1)
                for l in range(m):
                    if J[l, j]:
                        t = t + dg[l, i, k] * J[l, j] - dg[i, l, k] * J[l, j]
                    if J[l, i]:
                        t = t - dg[l, j, k] * J[l, i] + dg[j, l, k] * J[l, i]
                H[i, j, k] = t * Fraction(1, 2)
    return H


def nabla_g_omega(germ: MetricGerm) -> np.ndarray:
    """nabla^g Omega as a jet array, computed two ways; disagreement is a hard error."""
    if "nabla_omega" in germ._memo:
        return germ._memo["nabla_omega"]
    direct = nabla_g_omega_direct(germ)
    formula = nabla_g_omega_formula(germ)
    for a, b in zip(direct.reshape(-1), formula.reshape(-1)):
        if not a.agrees_with(b):
            raise SignConventionError("covariant derivative of Omega: direct and closed-form paths disagree")
    germ._memo["nabla_omega"] = direct
    return direct


def codifferential_omega(germ: MetricGerm, H: np.ndarray | None = None) -> np.ndarray:
    """delta Omega = tau1(nabla^g Omega), contracted with the full inverse-metric jet."""
    m = germ.m
    H = nabla_g_omega(germ) if H is None else H
    inv = germ.inverse
    out = np.empty(m, dtype=object)
    for i in range(m):
        t = Jet(m, germ.order - 1)
        for j in range(m):
            for k in range(m):
                if inv[j, k] and H[i, j, k]:
                    t = t + inv[j, k] * H[i, j, k]
        out[i] = t
    return out


def lee_form(germ: MetricGerm, H: np.ndarray | None = None) -> np.ndarray:
    """phi = s_J / (m - 2) J^* delta Omega, as a 1-form jet."""
    m = germ.m
    delta = codifferential_omega(germ, H)
    J = germ.space.J
    c = Fraction(germ.space.s_J, m - 2)
    return np.array([sum((delta[l] * J[l, i] for l in range(m) if J[l, i]), Jet(m, germ.order - 1)) * c
                     for i in range(m)], dtype=object)


class KahlerWeylObstruction(RuntimeError):
    """nabla^g Omega is not in the range of sigma, so no Kahler-Weyl structure exists."""

    def __init__(self, message: str, residual: np.ndarray, u3_at_origin: Tensor | None):
        super().__init__(message)
        self.residual = residual
        self.u3_at_origin = u3_at_origin


def sigma_jets(germ: MetricGerm, phi: np.ndarray) -> np.ndarray:
    return sigma_array(phi, germ.g, germ.space.J)


def kahler_weyl(germ: MetricGerm) -> ConnectionGerm:
    """The Weyl connection with phi the Lee form; requires nabla^g Omega = sigma(phi)."""
    lc = levi_civita(germ)
    H = nabla_g_omega(germ)
    phi = lee_form(germ, H)
    residual = H - sigma_jets(germ, phi)
    if not all_zero(_as_jets(residual, germ.m, germ.order - 1)):
        u3 = None
        H0 = at_origin(H)
        if not H0.is_zero():
            u3, _ = gray_hervella_split(germ.space, H0)
        raise KahlerWeylObstruction("nabla J != 0: nabla^g Omega has a component in ker(tau1)",
                                    residual, u3)
    return weyl_connection(germ, phi, lc)


# -- identity checks ---------------------------------------------------------------------


def nabla_metric(conn: ConnectionGerm, germ: MetricGerm) -> np.ndarray:
    """(nabla_i g)_jk = d_i g_jk - Gamma^l_ij g_lk - Gamma^l_ik g_jl."""
    m = germ.m
    G, g = conn.gamma, germ.g
    out = np.empty((m, m, m), dtype=object)
    for i in range(m):
        for j in range(m):
            for k in range(m):
                t = g[j, k].partial(i)
                for l in range(m):
                    if g[l, k]:
                        t = t - G[l, i, j] * g[l, k]
                    if g[j, l]:
                        t = t - G[l, i, k] * g[j, l]
                out[i, j, k] = t
    return out


def nabla_J(conn: ConnectionGerm, germ: MetricGerm) -> np.ndarray:
    """(nabla_i J)^k_j = Gamma^k_il J^l_j - J^k_l Gamma^l_ij (J is constant)."""
    m = germ.m
    G, J = conn.gamma, germ.space.J
    out = np.empty((m, m, m), dtype=object)
    for i in range(m):
        for k in range(m):
            for j in range(m):
                t = Jet(m, G[0, 0, 0].order)
                for l in range(m):
                    if J[l, j]:
                        t = t + G[k, i, l] * J[l, j]
                    if J[k, l]:
                        t = t - G[l, i, j] * J[k, l]
                out[i, k, j] = t
    return out


def weyl_identity_residuals(conn: ConnectionGerm, germ: MetricGerm) -> dict[str, np.ndarray]:
    """Jet-valued residuals: torsion, nabla g + 2 phi (x) g, nabla J, and the
    relation nabla^g Omega(x,y;z) = sigma(phi)(x,y;z) + g(x, (nabla_z J) y)."""
    m = germ.m
    G = conn.gamma
    phi = conn.phi if conn.phi is not None else np.array([Jet(m, germ.order) for _ in range(m)], dtype=object)
    torsion = np.empty((m, m, m), dtype=object)
    for k in range(m):
        for i in range(m):
            for j in range(m):
                torsion[k, i, j] = G[k, i, j] - G[k, j, i]
    nm = nabla_metric(conn, germ)
    metric_res = np.empty_like(nm)
    for i in range(m):
        for j in range(m):
            for k in range(m):
                metric_res[i, j, k] = nm[i, j, k] + phi[i] * germ.g[j, k] * 2
    nJ = nabla_J(conn, germ)
    H = nabla_g_omega(germ)
    sig = sigma_jets(germ, phi)
    rel = np.empty((m, m, m), dtype=object)
    for x in range(m):
        for y in range(m):
            for z in range(m):
                t = H[x, y, z] - sig[x, y, z]
                for k in range(m):
                    if germ.g[x, k] and nJ[z, k, y]:
                        t = t - germ.g[x, k] * nJ[z, k, y]
                rel[x, y, z] = t
    return {"torsion": torsion, "metric": metric_res, "nabla_J": nJ, "omega_relation": rel}


# -- snapshots -------------------------------------------------------------------------------


class SnapshotCheckError(AssertionError):
    pass


@dataclass
class GeometrySnapshot:
    R: Tensor
    R_g: Tensor
    rho: Tensor
    rho_a: Tensor
    phi: Tensor
    d_phi: Tensor
    nabla_g_omega: Tensor
    delta_omega: Tensor
    checks: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        out = {k: getattr(self, k).to_record() for k in
               ("R", "R_g", "rho", "rho_a", "phi", "d_phi", "nabla_g_omega", "delta_omega")}
        out["checks"] = dict(self.checks)
        return out


def wedge(alpha: Tensor, beta: Tensor) -> Tensor:
    """alpha ^ beta = (alpha (x) beta - beta (x) alpha) / 2, the normalization under
    which d(phi) = -(1/m) rho_a holds together with the Weyl trace identity."""
    a = np.multiply.outer(alpha.data, beta.data)
    return Tensor((a - a.T) * Fraction(1, 2))


def exterior_derivative_at_origin(phi: np.ndarray) -> Tensor:
    """d(phi)(d_i, d_j) = (d_i phi_j - d_j phi_i) / 2 at 0 (same normalization as :func:`wedge`)."""
    m = len(phi)
    d = np.empty((m, m), dtype=object)
    for i in range(m):
        for j in range(m):
            d[i, j] = Fraction(phi[j].linear_coefficient(i) - phi[i].linear_coefficient(j), 2)
    return Tensor(exact_array(d))


def conformal_family_phi(space: PseudoHermitianSpace, f: Jet) -> np.ndarray:
    """Predicted Lee form of the conformal family: -d3 f dx3, for either kind."""
    out = np.array([Jet(4, f.order - 1) for _ in range(4)], dtype=object)
    out[2] = -f.partial(2)
    return out


def conformal_family_rho_a(space: PseudoHermitianSpace, f: Jet) -> Tensor:
    """Predicted rho_a at 0 of the conformal family: 4 d1 d3 f(0) dx1 ^ dx3."""
    return wedge(Tensor.basis_form(4, 0), Tensor.basis_form(4, 2)) * (4 * f.coefficient((1, 0, 1, 0)))


def snapshot(germ: MetricGerm, conn: ConnectionGerm | None = None) -> GeometrySnapshot:
    """Evaluate the curvature package at 0 and run the exact consistency checks."""
    space = germ.space
    m = space.m
    lc = levi_civita(germ)
    conn = conn or kahler_weyl(germ)
    H = nabla_g_omega(germ)
    R = curvature_at_origin(conn, germ)
    Rg = curvature_at_origin(lc, germ)
    phi = conn.phi if conn.phi is not None else np.array([Jet(m, germ.order) for _ in range(m)], dtype=object)
    d_phi = exterior_derivative_at_origin(phi)
    rho_a = ricci_antisym(space, R)
    snap = GeometrySnapshot(
        R=R, R_g=Rg, rho=ricci(space, R), rho_a=rho_a,
        phi=at_origin(phi), d_phi=d_phi, nabla_g_omega=at_origin(H),
        delta_omega=at_origin(codifferential_omega(germ, H)),
    )
    ok = d_phi == rho_a * Fraction(-1, m)
    snap.checks["d phi = -(1/m) rho_a"] = ok
    if not ok:
        raise SnapshotCheckError("violated: d phi = -(1/m) rho_a")
    if germ.lemma_f is not None:
        ok = rho_a == conformal_family_rho_a(space, germ.lemma_f)
        snap.checks["rho_a = 4 d1 d3 f dx1^dx3"] = ok
        if not ok:
            raise SnapshotCheckError("violated: rho_a = 4 d1 d3 f dx1 ^ dx3 for the conformal family")
    return snap


def higa_l_part(space: PseudoHermitianSpace, R: Tensor) -> Tensor:
    return higa_xi(space, ricci_antisym(space, R) * Fraction(-1, space.m))


def admitted_spaces() -> list[PseudoHermitianSpace]:
    return [build_space(*c) for c in ADMITTED_CONFIGS]
