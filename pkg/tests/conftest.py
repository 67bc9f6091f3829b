from fractions import Fraction

import pytest

from odolab import gallery
from odolab.space import AlphabetRule, MeasureFamily, SystemSpec


class ListedMeasure(MeasureFamily):
    """Test-only family: one explicit weight vector per coordinate.

    Coordinates past the list repeat the last vector.
    """

    name = "listed-test"

    def __init__(self, vectors):
        super().__init__({})
        self.vectors = [tuple(Fraction(x) for x in v) for v in vectors]

    def weights(self, i, m):
        v = self.vectors[min(i - 1, len(self.vectors) - 1)]
        assert len(v) == m
        return v


def listed_spec(kind, vectors) -> SystemSpec:
    sizes = [len(v) for v in vectors]
    return SystemSpec(kind=kind,
                      alphabet=AlphabetRule("list", {"list": sizes,
                                                     "repeat": "last"}),
                      measure=ListedMeasure(vectors))


def uniform_binary() -> SystemSpec:
    return gallery.get_spec("same-measure(1/2,1/2)")


@pytest.fixture
def binary_uniform():
    return uniform_binary()


@pytest.fixture
def ornstein():
    return gallery.get_spec("ornstein")


@pytest.fixture
def fhc_binary():
    return gallery.get_spec("fhc-binary")


@pytest.fixture
def hc_not_mixing():
    return gallery.get_spec("hc-not-mixing")


def random_rational_vector(rng, m, q=720720):
    """Random strictly positive probability vector with denominator q."""
    cuts = sorted(rng.choice(range(1, q), size=m - 1, replace=False).tolist())
    parts = [b - a for a, b in zip([0] + cuts, cuts + [q])]
    return [Fraction(int(p), q) for p in parts]
