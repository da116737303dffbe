import math
import random
from fractions import Fraction

import pytest

from octaslope.fields import (
    RATIONALS,
    FieldElement,
    QuadraticField,
    primitive_integer_vector,
    rational_kernel,
    sign,
    squarefree_core,
)

Q2 = QuadraticField((2,))
Q23 = QuadraticField((2, 3))


def el(field, *coeffs):
    return field.element(coeffs)


def random_element(rng, field, span=6):
    return field.element(
        [Fraction(rng.randint(-span, span), rng.randint(1, 4)) for _ in range(field.degree)]
    )


def test_squarefree_core():
    assert squarefree_core(1) == (1, 1)
    assert squarefree_core(8) == (2, 2)
    assert squarefree_core(12) == (2, 3)
    assert squarefree_core(49) == (7, 1)
    assert squarefree_core(30) == (1, 30)


def test_descriptor_validation():
    with pytest.raises(ValueError):
        QuadraticField((4,))
    with pytest.raises(ValueError):
        QuadraticField((3, 2))
    with pytest.raises(ValueError):
        QuadraticField((2, 3, 5))
    assert QuadraticField.of(8, 3).radicands == (2, 3)
    assert QuadraticField.of(9).radicands == ()


def test_conjugate_product_is_rational():
    a = el(Q2, 1, 1)   # 1 + sqrt(2)
    b = el(Q2, 1, -1)  # 1 - sqrt(2)
    assert a * b == -1


def test_inverse_rationalizes():
    r2 = el(Q2, 0, 1)
    assert r2.inverse() == el(Q2, 0, Fraction(1, 2))
    with pytest.raises(ZeroDivisionError):
        Q2.zero.inverse()


def test_basis_closure_sqrt2_times_sqrt3():
    r2 = Q23.sqrt_of(2)
    r3 = Q23.sqrt_of(3)
    assert r2 * r3 == Q23.sqrt_of(6)


def test_descriptor_mismatch_raises():
    with pytest.raises(ValueError):
        el(Q2, 1, 0) + el(Q23, 1, 0, 0, 0)


def test_sign_examples():
    assert (Q2.rational(3) - 2 * Q2.sqrt_of(2)).sign() == 1
    assert (Q23.sqrt_of(2) * Q23.sqrt_of(3) - Q23.sqrt_of(6)).sign() == 0
    assert (Q23.rational(5) - 2 * Q23.sqrt_of(6)).sign() == 1
    assert (Q2.rational(1) - Q2.sqrt_of(2)).sign() == -1


def test_field_axioms_random():
    rng = random.Random(7)
    for field in (RATIONALS, Q2, QuadraticField((5,)), Q23):
        for _ in range(60):
            a, b, c = (random_element(rng, field) for _ in range(3))
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            if not a.is_zero:
                assert a * a.inverse() == field.one


def test_sign_multiplicative_and_float_consistent():
    rng = random.Random(11)
    checked = 0
    for _ in range(10_000):
        field = rng.choice((Q2, QuadraticField((3,)), Q23))
        a = random_element(rng, field, span=4)
        b = random_element(rng, field, span=4)
        assert sign(a) * sign(b) == sign(a * b)
        s = a + b
        fs = float(s)
        if abs(fs) > 1e-9:
            assert sign(s) == (1 if fs > 0 else -1)
            checked += 1
    assert checked > 9000


def test_conjugations_examples_and_homomorphism():
    a = el(Q2, 1, 1)
    assert a.conjugations() == (el(Q2, 1, 1), el(Q2, 1, -1))
    q = Q2.rational(Fraction(3, 7))
    assert q.conjugations() == (q, q)
    r6 = Q23.sqrt_of(6)
    assert r6.conjugations() == (r6, -r6, -r6, r6)
    rng = random.Random(3)
    for _ in range(50):
        a = random_element(rng, Q23)
        b = random_element(rng, Q23)
        prods = (a * b).conjugations()
        for pa, pb, pab in zip(a.conjugations(), b.conjugations(), prods):
            assert pa * pb == pab


def test_cross_field_equality_and_hash():
    r2_small = Q2.sqrt_of(2)
    r2_big = Q23.sqrt_of(2)
    assert r2_small == r2_big
    assert hash(r2_small) == hash(r2_big)
    assert Q23.rational(5) == 5
    assert Q2.sqrt_of(8) == 2 * Q23.sqrt_of(2)


def test_promote():
    a = Q2.sqrt_of(2) + 3
    b = a.promote(Q23)
    assert b.field == Q23 and b == a
    with pytest.raises(ValueError):
        QuadraticField((5,)).sqrt_of(5).promote(Q23)


def test_ordering():
    assert Q2.sqrt_of(2) < Fraction(3, 2)
    assert Q2.sqrt_of(2) > 1
    assert max(Q2.rational(1), Q2.sqrt_of(2)) == Q2.sqrt_of(2)


def test_json_round_trip():
    a = el(Q23, Fraction(1, 3), -2, 0, Fraction(5, 7))
    data = a.to_json()
    assert data["radicands"] == [2, 3]
    assert all("/" in s for s in data["coeffs"])
    assert FieldElement.from_json(data) == a


def test_rational_kernel_examples():
    row = [Q2.one, Q2.sqrt_of(2), Q2.one]
    assert rational_kernel([row]) == [(1, 0, -1)]

    identity = [
        [Q2.one, Q2.zero, Q2.zero],
        [Q2.zero, Q2.one, Q2.zero],
        [Q2.zero, Q2.zero, Q2.one],
    ]
    assert rational_kernel(identity) == []

    zero_row = [[Q2.zero, Q2.zero, Q2.zero]]
    basis = rational_kernel(zero_row)
    assert basis == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_rational_kernel_exactness_and_rank():
    import numpy as np

    rng = random.Random(17)
    for _ in range(40):
        m, n = rng.randint(1, 3), rng.randint(2, 5)
        rows = [[random_element(rng, Q2, span=3) for _ in range(n)] for _ in range(m)]
        basis = rational_kernel(rows)
        for vec in basis:
            for row in rows:
                total = Q2.zero
                for entry, x in zip(row, vec):
                    total = total + entry * x
                assert total.is_zero
        stacked = []
        for row in rows:
            for t in range(Q2.degree):
                stacked.append([float(entry.coeffs[t]) for entry in row])
        est_rank = np.linalg.matrix_rank(np.array(stacked), tol=1e-9)
        assert len(basis) == n - est_rank


def test_primitive_integer_vector():
    v = [Fraction(0), Fraction(-2, 3), Fraction(4, 3)]
    assert primitive_integer_vector(v) == (0, 1, -2)


def test_float_embedding():
    a = el(Q23, 1, 1, 1, 1)
    expected = 1 + math.sqrt(2) + math.sqrt(3) + math.sqrt(6)
    assert abs(float(a) - expected) < 1e-12
