from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from kahlerweyl.space import all_configurations
from kahlerweyl.tensor import Tensor

settings.register_profile(
    "exact",
    max_examples=100,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("exact")

SPACES4 = all_configurations(4)
SPACES6 = all_configurations(6)


def space_id(sp):
    return sp.label()


@pytest.fixture(params=SPACES4, ids=space_id)
def space4(request):
    return request.param


@pytest.fixture(params=SPACES6, ids=space_id)
def space6(request):
    return request.param


small_rationals = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


def tensors(m: int, rank: int, elements=small_rationals):
    return st.lists(elements, min_size=m**rank, max_size=m**rank).map(
        lambda xs: Tensor(np.array(xs, dtype=object).reshape((m,) * rank)))


def random_tensor(rng, m: int, rank: int) -> Tensor:
    vals = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(m**rank)]
    return Tensor(np.array(vals, dtype=object).reshape((m,) * rank))
