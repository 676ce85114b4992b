import pytest

from entdim import (
    LineSpace,
    Partition,
    interval,
    linear_density,
    mix,
    uniform,
)


class ExampleMixture:
    """The two-source line scenario used across the suite.

    Source 1: uniform on [0, 1], weight 2/5, alphabet of four cells.
    Source 2: density 2(x - 1/10) on [1/10, 11/10], weight 3/5, four cells.
    Both live on the ground space [0, 2].
    """

    def __init__(self):
        self.space = LineSpace(0.0, 2.0)
        self.mu1 = uniform(0.0, 1.0, space=self.space)
        self.mu2 = linear_density(0.1, 1.1, 0.0, 2.0, space=self.space)
        self.weights = (0.4, 0.6)
        self.mixture = mix([(0.4, self.mu1), (0.6, self.mu2)])
        self.p1 = Partition((
            interval(0.0, 0.4, "[)"),
            interval(0.4, 0.6, "[)"),
            interval(0.6, 0.8, "[)"),
            interval(0.8, 1.0, "[]"),
        ))
        self.p2 = Partition((
            interval(0.1, 0.5, "[)"),
            interval(0.5, 0.7, "[)"),
            interval(0.7, 0.9, "[)"),
            interval(0.9, 1.1, "[]"),
        ))


@pytest.fixture(scope="session")
def example():
    return ExampleMixture()
