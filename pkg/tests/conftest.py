import pytest

from orthoieq import PrecisionContext, preset_weight


@pytest.fixture(scope="session")
def ctx50():
    return PrecisionContext(50)


# presets with the parameter choices used throughout the checks
ADDITIVE_PRESETS = [
    ("laguerre", {"gamma": 1}),
    ("laguerre", {"gamma": 2}),
    ("laguerre", {"gamma": "5/2"}),
    ("jacobi-add", {"p": 3, "q": 2}),
    ("chebyshev-u2-add", {}),
]

ALL_PRESETS = ADDITIVE_PRESETS + [
    ("jacobi-mult", {"p": 3, "q": 2}),
    ("chebyshev-u2-mult", {}),
    ("uniform-symmetric", {}),
]


def make_weight(name, params):
    return preset_weight(name, **params)
