from fractions import Fraction

import pytest

from octaslope.fields import QuadraticField
from octaslope.slopes import Slope, load_slope

Q2 = QuadraticField((2,))
Q23 = QuadraticField((2, 3))


@pytest.fixture(scope="session")
def ab_slope() -> Slope:
    return load_slope("ab")


@pytest.fixture(scope="session")
def fig4_slope() -> Slope:
    return load_slope("fig4")


@pytest.fixture(scope="session")
def rational_slope() -> Slope:
    return load_slope("rational")


def make_ab(offset=("1/8", "1/16", "5/32", "1/64")) -> Slope:
    r2 = Q2.sqrt_of(2)
    one = Q2.one
    zero = Q2.zero
    return Slope.from_entries(Q2, (r2, one, zero, -one), (zero, one, r2, one), offset)


@pytest.fixture(scope="session")
def no_subperiod_slope() -> Slope:
    """An irrational nondegenerate biquadratic slope with no subperiod.

    Grassmann triples in a degree-2 field are always Q-dependent, so only
    degree-4 coordinates can avoid subperiods entirely.
    """
    r2 = Q23.sqrt_of(2)
    r3 = Q23.sqrt_of(3)
    u = (Q23.one, r2, r3, Q23.zero)
    v = (Q23.zero, Q23.one, r2, r3)
    return Slope(Q23, u, v, (Fraction(1, 8), Fraction(1, 16), Fraction(5, 32), Fraction(1, 64)))
