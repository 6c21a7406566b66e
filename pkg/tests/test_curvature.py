import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SPACES4, SPACES6, random_tensor, small_rationals
from kahlerweyl.curvature import (
    gray_projector,
    gray_symmetrizer,
    higa_space,
    higa_split,
    higa_xi,
    kahler_residual,
    kahler_spaces,
    model_space,
    model_space_dim,
    ricci_antisym,
    verify_higa,
    verify_kahler_weyl_decomposition,
    weyl_residuals,
)
from kahlerweyl.space import pullback, random_structure_group_element, tensor_inner_product
from kahlerweyl.tensor import Tensor
from kahlerweyl.twoforms import lambda2_0


def expected_dims(m):
    n = m // 2
    r = m * m * (m * m - 1) // 12
    kr = (n * (n + 1) // 2) ** 2
    return {"W": r + m * (m - 1) // 2, "R": r, "K": m * m * m * m // 2,
            "K_R": kr, "K_W": kr + (5 if m == 4 else 0)}


def two_forms(m):
    def build(vals):
        t = Tensor.zeros(m, 2)
        it = iter(vals)
        for i in range(m):
            for j in range(i + 1, m):
                v = next(it)
                t.data[i, j], t.data[j, i] = v, -v
        return t
    k = m * (m - 1) // 2
    return st.lists(small_rationals, min_size=k, max_size=k).map(build)


@pytest.mark.parametrize("space", SPACES4, ids=lambda s: s.label())
@pytest.mark.parametrize("mode", ["exact", "modular"])
def test_dimensions_m4(space, mode):
    exp = expected_dims(4)
    for name in ("W", "R", "K", "K_R", "K_W"):
        assert model_space_dim(space, name, mode) == exp[name], name


@pytest.mark.parametrize("space", SPACES6, ids=lambda s: s.label())
def test_dimensions_m6_modular(space):
    exp = expected_dims(6)
    for name in ("W", "R", "K", "K_R", "K_W"):
        assert model_space_dim(space, name, "modular") == exp[name], name


@pytest.mark.parametrize("space", SPACES4 + SPACES6[:1], ids=lambda s: s.label())
@settings(max_examples=30)
@given(data=st.data())
def test_xi_trace_identity(space, data):
    psi = data.draw(two_forms(space.m))
    A = higa_xi(space, psi)
    assert ricci_antisym(space, A) == psi * (-space.m)
    assert all(r.is_zero() for r in weyl_residuals(space, A).values())


def test_xi_rejects_symmetric_input():
    with pytest.raises(ValueError):
        higa_xi(SPACES4[0], SPACES4[0].g)


@pytest.mark.parametrize("space", SPACES4, ids=lambda s: s.label())
def test_higa_split_of_weyl_elements(space):
    W, R, L = model_space(space, "W"), model_space(space, "R"), higa_space(space)
    rng = random.Random(1)
    for _ in range(5):
        A = W.combine([Fraction(rng.randint(-3, 3)) for _ in range(W.dim)])
        r_part, l_part = higa_split(space, A)
        assert R.contains(r_part) and L.contains(l_part)
        assert tensor_inner_product(space, r_part, l_part) == 0


@pytest.mark.parametrize("space", SPACES4, ids=lambda s: s.label())
def test_complement_of_kr_is_modelled_on_lambda2_0(space):
    _, KW, KR = kahler_spaces(space)
    L20, L = lambda2_0(space), higa_space(space)
    comp = KW.orthogonal_complement_in(KR)
    assert comp.dim == L20.dim
    for b in comp.basis:
        psi = ricci_antisym(space, b)
        assert L20.contains(psi) and not psi.is_zero()
        assert kahler_residual(space, b).is_zero()
        r_part, l_part = higa_split(space, b)
        assert l_part == higa_xi(space, psi * Fraction(-1, 4))
        assert L.contains(l_part) and model_space(space, "R").contains(r_part)
    assert not KW.contains(higa_xi(space, space.omega))


@pytest.mark.parametrize("space", SPACES4, ids=lambda s: s.label())
def test_gray_projector_properties(space):
    rng = random.Random(10)
    for _ in range(50):
        A = random_tensor(rng, 4, 4)
        PA = gray_projector(space, A)
        assert gray_projector(space, PA) == PA
        B = random_tensor(rng, 4, 4)
        assert tensor_inner_product(space, PA, B) == tensor_inner_product(space, A, gray_projector(space, B))
    _, KW, _ = kahler_spaces(space)
    for b in KW.basis:
        assert gray_symmetrizer(space, b).is_zero()


@pytest.mark.parametrize("space", SPACES4 + SPACES6[:1], ids=lambda s: s.label())
def test_operator_equivariance(space):
    rng = random.Random(12)
    for seed in (1, 2):
        for commuting in (True, False):
            T = random_structure_group_element(space, commuting, seed=seed).T
            A = random_tensor(rng, space.m, 4)
            assert gray_symmetrizer(space, pullback(space, T, A)) == pullback(space, T, gray_symmetrizer(space, A))
            psi = random_tensor(rng, space.m, 2)
            psi = psi - psi.transpose(1, 0)
            assert higa_xi(space, pullback(space, T, psi)) == pullback(space, T, higa_xi(space, psi))


@pytest.mark.parametrize("space", SPACES4, ids=lambda s: s.label())
def test_reports_pass(space):
    assert verify_kahler_weyl_decomposition(space).passed
    assert verify_higa(space, samples=3).passed
