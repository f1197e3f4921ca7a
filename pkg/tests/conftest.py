import numpy as np
import pytest

from pofbounds import validate_instance


def random_limits(rng: np.random.Generator, n: int, draw: int = 0) -> np.ndarray:
    """Alternate between uniform (0, 1] limits and widely spread log-normal ones."""
    if draw % 2 == 0:
        return 1.0 - rng.random(n)
    return np.exp(rng.normal(0.0, 1.5, n))


def random_instance(rng: np.random.Generator, n: int, closed_form: bool = False, zero_costs: bool = False):
    """Random valid budget set; ``closed_form`` keeps every c_i L_i in [1/n, 1]."""
    L = random_limits(rng, n, int(rng.integers(2)))
    lo = 1.0 / n if closed_form else 0.0
    a = lo + (1.0 - lo) * rng.random(n)
    if zero_costs:
        a[rng.random(n) < 0.3] = 0.0
    c = np.minimum(a / L, 1.0 / L)
    c = np.array([ci if ci * li <= 1.0 else np.nextafter(ci, 0.0) for ci, li in zip(c, L)])
    return validate_instance(tuple(L), tuple(c))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
