"""Realizing algebraic curvature tensors by metric germs.

Every sweep works with germs whose first jet vanishes at 0, so the curvature
at the origin is a linear function of the quadratic part of the metric.
Spans of swept curvatures are therefore intrinsic, and an explicit germ
realizing a given tensor is a linear solve over the sweep.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .curvature import gray_symmetrizer, higa_xi, kahler_spaces, model_space
from .germs import (
    Jet,
    MetricGerm,
    curvature_at_origin,
    hermitian_germ,
    kahler_quadratic_family,
    kahler_weyl,
    lemma41_metric,
    levi_civita,
    pullback_germ,
    random_hermitian_germ,
    weyl_connection,
)
from .report import VerificationReport
from .space import PseudoHermitianSpace, conjugation, pullback, random_structure_group_element
from .subspace import Subspace, _sparse_of
from .tensor import Tensor
from .twoforms import two_form_blocks

SWEEP_ORDER = 3
QUADRATIC_F = ((2, 0), (1, 1), (0, 2))  # exponents of x1, x3


class NotRealizableError(ValueError):
    pass


@dataclass
class RealizationSweep:
    space: PseudoHermitianSpace
    labels: list[str] = field(default_factory=list)
    germs: list[MetricGerm] = field(default_factory=list)
    curvatures: list[Tensor] = field(default_factory=list)

    def add(self, label: str, germ: MetricGerm, R: Tensor) -> None:
        self.labels.append(label)
        self.germs.append(germ)
        self.curvatures.append(R)

    def span(self, name: str = "") -> Subspace:
        return Subspace.spanned_by(self.space, self.curvatures, 4, name)

    def __add__(self, other: "RealizationSweep") -> "RealizationSweep":
        return RealizationSweep(self.space, self.labels + other.labels, self.germs + other.germs,
                                self.curvatures + other.curvatures)

    def to_record(self) -> dict:
        return {"config": self.space.config(), "labels": list(self.labels),
                "span_dim": self.span().dim}


def _require_m4(space: PseudoHermitianSpace) -> None:
    if space.m != 4:
        raise ValueError("realization sweeps are defined on R^4")


def kahler_sweep(space: PseudoHermitianSpace, order: int = SWEEP_ORDER) -> RealizationSweep:
    """Levi-Civita curvature at 0 over a basis of quadratic Kahler perturbations."""
    _require_m4(space)
    sweep = RealizationSweep(space)
    for n, germ in enumerate(kahler_quadratic_family(space, order)):
        sweep.add(f"kahler[{n}]", germ, curvature_at_origin(levi_civita(germ), germ))
    return sweep


def kahler_span(space: PseudoHermitianSpace, order: int = SWEEP_ORDER) -> Subspace:
    return kahler_sweep(space, order).span("kahler_span")


def _f_monomial(order: int, a: int, b: int) -> Jet:
    return Jet.monomial(4, order, (a, 0, b, 0))


def conformal_sweep(space: PseudoHermitianSpace, order: int = SWEEP_ORDER,
                    seeds=(1, 2, 3)) -> RealizationSweep:
    """Kahler-Weyl curvature at 0 for the conformal family with quadratic f(x1, x3),
    plus copies moved by structure-group elements (both characters)."""
    _require_m4(space)
    elements = [("id", None)]
    for s in seeds:
        elements.append((f"U{s}", random_structure_group_element(space, True, seed=s)))
    elements.append(("conj", conjugation(space)))
    elements.append((f"conjU{seeds[0]}", random_structure_group_element(space, False, seed=seeds[0])))
    sweep = RealizationSweep(space)
    for a, b in QUADRATIC_F:
        base = lemma41_metric(space, _f_monomial(order, a, b), order)
        for name, el in elements:
            germ = base if el is None else pullback_germ(base, el.T)
            R = curvature_at_origin(kahler_weyl(germ), germ)
            sweep.add(f"f=x1^{a}x3^{b}/{name}", germ, R)
    return sweep


def weyl_span(space: PseudoHermitianSpace, order: int = SWEEP_ORDER) -> Subspace:
    """Components of the conformal sweep orthogonal to the Kahler-Riemann tensors."""
    _, _, KR = kahler_spaces(space)
    sweep = conformal_sweep(space, order)
    return Subspace.spanned_by(space, [KR.residual(R) for R in sweep.curvatures], 4, "weyl_span")


def realize(space: PseudoHermitianSpace, A: Tensor, order: int = 4,
            sweep: RealizationSweep | None = None) -> MetricGerm:
    """A germ whose Kahler-Weyl curvature at 0 equals ``A`` (m = 4, A in K_W).

    The result is g0 plus a linear combination of the swept quadratic
    perturbations; its curvature is recomputed and compared exactly.
    """
    _require_m4(space)
    sweep = sweep or (kahler_sweep(space) + conformal_sweep(space))
    kept, idx, pivots = [], [], {}
    for n, R in enumerate(sweep.curvatures):
        if linalg.insert_row(pivots, _sparse_of(R)):
            kept.append(R)
            idx.append(n)
    basis = Subspace(space, kept, 4, check=False)
    if not basis.contains(A):
        raise NotRealizableError("tensor is not in the span of the swept curvatures")
    coeffs = basis.coefficients(A)
    m = space.m
    pert: dict = {}
    for c, n in zip(coeffs, idx):
        if not c:
            continue
        g = sweep.germs[n].g
        for i in range(m):
            for j in range(m):
                for e, v in g[i, j].coeffs.items():
                    if sum(e) == 2:
                        mat = pert.setdefault(e, np.zeros((m, m), dtype=object))
                        mat[i, j] += c * v
    germ = hermitian_germ(space, pert, order, first_jet_zero=True)
    if curvature_at_origin(kahler_weyl(germ), germ) != A:
        raise NotRealizableError("linear realization did not reproduce the target tensor")
    return germ


# -- verification suites -------------------------------------------------------------


def verify_realization(space: PseudoHermitianSpace, order: int = SWEEP_ORDER) -> VerificationReport:
    """Kahler germs realize K_R and the conformal family supplies the rest of K_W."""
    _require_m4(space)
    rep = VerificationReport("thm14", space.config())
    _, KW, KR = kahler_spaces(space)
    ks = kahler_sweep(space, order)
    cs = conformal_sweep(space, order)
    Kspan = ks.span("kahler_span")
    ref = "every Kahler-Weyl tensor is realized by a germ at 0"
    rep.check("Kahler sweep: span dim", Kspan.dim, 9, ref)
    rep.check("Kahler sweep spans K_R", Kspan.same_as(KR), True, ref)
    rep.check("Kahler sweep: every tensor has rho_a = 0 (in R)",
              all(model_space(space, "R").contains(R) for R in ks.curvatures), True, ref)
    outside = [R for R in cs.curvatures if not KW.contains(R)]
    rep.check("conformal sweep: every tensor lies in K_W", len(outside), 0, ref)
    Wspan = Subspace.spanned_by(space, [KR.residual(R) for R in cs.curvatures], 4, "weyl_span")
    rep.check("conformal sweep: span orthogonal to K_R has dim 5", Wspan.dim, 5, ref)
    total = Subspace.spanned_by(space, Kspan.basis + Wspan.basis, 4, "realized")
    rep.check("realized span dim = 9 + 5", total.dim, 14, ref)
    same = total.same_as(KW)
    rep.check("realized span equals K_W", same, True, ref)
    if not same:
        missing = KW.orthogonal_complement_in(total)
        rep.notes.append(f"missing directions: {[b.to_record() for b in missing.basis]}")
    rep.notes.append(f"span table: {Kspan.dim} + {Wspan.dim} = {total.dim}")
    return rep


def random_linear_form(m: int, order: int, rng: random.Random) -> np.ndarray:
    out = []
    for _ in range(m):
        coeffs = {(0,) * m: Fraction(rng.randint(-4, 4), rng.randint(1, 3))}
        for j in range(m):
            e = tuple(1 if k == j else 0 for k in range(m))
            coeffs[e] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        out.append(Jet(m, order, coeffs))
    return np.array(out, dtype=object)


def verify_gray_identity(space: PseudoHermitianSpace, samples: int = 20, seed: int = 0,
                         order: int = 2) -> VerificationReport:
    """Gray symmetrizer of R^nabla at 0 vanishes and equals that of R^g, for random
    Hermitian germs and arbitrary Weyl 1-forms.

    Only the 2-jet of g and the 1-jet of phi reach the curvature at 0, so
    ``order = 2`` loses nothing.
    """
    rep = VerificationReport("thm15", {**space.config(), "samples": samples, "seed": seed})
    m = space.m
    rng = random.Random(seed)
    ref = "G(R^nabla) = G(R^g) = 0 for Weyl connections of Hermitian metrics"
    nonzero, mismatch, failures = 0, 0, []
    for n in range(samples):
        germ = random_hermitian_germ(space, rng, order=order)
        phi = random_linear_form(m, order, rng)
        R = curvature_at_origin(weyl_connection(germ, phi), germ)
        Rg = curvature_at_origin(levi_civita(germ), germ)
        a, b = gray_symmetrizer(space, R), gray_symmetrizer(space, Rg)
        bad_a, bad_b = not a.is_zero(), a != b
        nonzero += bad_a
        mismatch += bad_b
        if bad_a or bad_b:
            failures.append({"sample": n, "germ": germ.to_record(), "phi": [p.to_terms() for p in phi]})
    rep.check("samples with G(R^nabla)(0) != 0", nonzero, 0, ref)
    rep.check("samples with G(R^nabla)(0) != G(R^g)(0)", mismatch, 0, ref)

    flat = hermitian_germ(space, {}, order)
    phi = np.array([Jet(m, order) for _ in range(m)], dtype=object)
    phi[1] = Jet.variable(m, order, 0)
    rep.check("flat metric, phi = x1 dx2: G(R^nabla)(0) = 0",
              gray_symmetrizer(space, curvature_at_origin(weyl_connection(flat, phi), flat)).is_zero(),
              True, ref)
    if failures:
        rep.notes.append("a failure here indicates an implementation bug; offending samples: "
                         + repr(failures))
    return rep


# -- multiplicities ---------------------------------------------------------------------


def _action_matrix(space: PseudoHermitianSpace, sub: Subspace, T) -> list[list[Fraction]]:
    """Columns: coordinates of T^* b_i in the basis of ``sub``."""
    cols = []
    for b in sub.basis:
        img = pullback(space, T, b)
        c = sub.coefficients(img)
        if sub.combine(c) != img:
            raise ValueError(f"{sub.name} is not invariant under the group element")
        cols.append(c)
    n = sub.dim
    return [[cols[i][j] for i in range(n)] for j in range(n)]


def group_generators(space: PseudoHermitianSpace, seeds=(1, 2, 3)) -> list:
    gens = [random_structure_group_element(space, True, seed=s) for s in seeds]
    gens.append(conjugation(space))
    return gens


def action_matrices(space: PseudoHermitianSpace, sub: Subspace, generators) -> list:
    return [_action_matrix(space, sub, el.T) for el in generators]


def intertwiner_dim(space: PseudoHermitianSpace, source: Subspace, target: Subspace,
                    generators=None, cache: dict | None = None) -> int:
    """dim of linear maps F: source -> target with F T^* = T^* F for the generators."""
    generators = generators or group_generators(space)
    cache = {} if cache is None else cache
    for sub in (source, target):
        if id(sub) not in cache:
            cache[id(sub)] = action_matrices(space, sub, generators)
    p, q = source.dim, target.dim
    rows = []
    for C, D in zip(cache[id(source)], cache[id(target)]):
        # X is q x p, unknown (l, i) -> l * p + i; rows of X C - D X
        for l in range(q):
            for i in range(p):
                row: dict[int, Fraction] = {}
                for j in range(p):
                    if C[j][i]:
                        row[l * p + j] = row.get(l * p + j, 0) + C[j][i]
                for k in range(q):
                    if D[l][k]:
                        row[k * p + i] = row.get(k * p + i, 0) - D[l][k]
                row = {k: v for k, v in row.items() if v}
                if row:
                    rows.append(row)
    return p * q - linalg.rank(rows)


def two_form_modules(space: PseudoHermitianSpace) -> dict[str, Subspace]:
    blocks = two_form_blocks(space)
    return {"Lambda2_0": blocks["lambda0"], "Lambda2_J": blocks["lambda_plus"],
            "chi": blocks["omega_part"]}


def evaluate(A: Tensor, *vectors) -> Fraction:
    out = A.data
    for v in vectors:
        out = np.tensordot(out, np.array(v, dtype=object), axes=([0], [0]))
    return out if not isinstance(out, np.ndarray) else out.item()


def xi_omega_values(space: PseudoHermitianSpace) -> tuple[Fraction, Fraction]:
    """Xi(Omega)(e1,e4,e3,e1) and -s_J Xi(Omega)(e1,e4,Je3,Je1)."""
    X = higa_xi(space, space.omega)
    e = [[1 if i == k else 0 for i in range(4)] for k in range(4)]
    J = space.J
    Je = [list(J[:, k]) for k in range(4)]
    a = evaluate(X, e[0], e[3], e[2], e[0])
    b = -space.s_J * evaluate(X, e[0], e[3], Je[2], Je[0])
    return a, b


def verify_multiplicities(space: PseudoHermitianSpace) -> VerificationReport:
    """Multiplicities of the 2-form modules in W and K_W from intertwiner dimensions."""
    _require_m4(space)
    rep = VerificationReport("multiplicity", space.config())
    W = model_space(space, "W")
    _, KW, _ = kahler_spaces(space)
    gens = group_generators(space)
    cache: dict = {}
    expected = {"Lambda2_0": (1, 1), "Lambda2_J": (2, 1), "chi": (1, 0)}
    ref = "multiplicity of 2-form modules in W and K_W"
    for name, M in two_form_modules(space).items():
        end = intertwiner_dim(space, M, M, gens, cache)
        rep.check(f"dim End(M) for M = {name}", end, 1, ref)
        for target, exp in zip((W, KW), expected[name]):
            hom = intertwiner_dim(space, M, target, gens, cache)
            rep.check(f"multiplicity of {name} in {target.name}", Fraction(hom, end), exp, ref)
    g = space.metric
    a, b = xi_omega_values(space)
    rep.check("Xi(Omega)(e1,e4,e3,e1) = -g11 g44", a, -g[0, 0] * g[3, 3], "Xi(Omega) is not Kahler")
    rep.check("-s_J Xi(Omega)(e1,e4,Je3,Je1) = +g11 g44", b, g[0, 0] * g[3, 3], "Xi(Omega) is not Kahler")
    rep.check("Xi(Omega) violates the Kahler identity", a != b, True, "Xi(Omega) is not Kahler")
    return rep
