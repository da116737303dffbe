"""Rational quadratic forms on the six Grassmann coordinates and their restrictions.

Forms are dicts {(p, q): coeff} with p <= q indexing PAIRS; restricting to the
span of rational kernel vectors produces small homogeneous polynomials stored
as exponent->coefficient dicts.  Resultants of two ternary quadratics in one
variable decide finiteness of conic intersections exactly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .fields import FieldElement

QuadForm = Mapping[tuple[int, int], Fraction]
Poly = dict[tuple[int, ...], Fraction]

# G12*G34 - G13*G24 + G14*G23 on pair indexes (0..5) = (12,13,14,23,24,34).
PLUCKER_FORM: QuadForm = {
    (0, 5): Fraction(1),
    (1, 4): Fraction(-1),
    (2, 3): Fraction(1),
}


def evaluate_form(form: QuadForm, vec: Sequence[FieldElement]) -> FieldElement:
    field = vec[0].field
    total = field.zero
    for (p, q), c in form.items():
        total = total + vec[p] * vec[q] * c
    return total


def evaluate_form_rational(form: QuadForm, vec: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for (p, q), c in form.items():
        total += c * Fraction(vec[p]) * Fraction(vec[q])
    return total


def restrict_form(form: QuadForm, basis: Sequence[Sequence[int]]) -> Poly:
    """The form composed with x -> sum_t x_t * basis[t], as a homogeneous quadratic."""
    m = len(basis)
    out: Poly = {}
    for (p, q), c in form.items():
        for s in range(m):
            bs = basis[s][p]
            if not bs:
                continue
            for t in range(m):
                bt = basis[t][q]
                if not bt:
                    continue
                e = [0] * m
                e[s] += 1
                e[t] += 1
                key = tuple(e)
                out[key] = out.get(key, Fraction(0)) + c * bs * bt
    return {k: v for k, v in out.items() if v}


def binary_coefficients(poly: Poly) -> tuple[Fraction, Fraction, Fraction]:
    """(A, B, C) of A*x^2 + B*x*y + C*y^2 for a restricted binary form."""
    return (
        poly.get((2, 0), Fraction(0)),
        poly.get((1, 1), Fraction(0)),
        poly.get((0, 2), Fraction(0)),
    )


def poly_is_zero(p: Poly) -> bool:
    return not any(p.values())


def poly_sub(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) - v
    return {k: v for k, v in out.items() if v}


def poly_add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) + v
    return {k: v for k, v in out.items() if v}


def poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            key = tuple(x + y for x, y in zip(ka, kb))
            out[key] = out.get(key, Fraction(0)) + va * vb
    return {k: v for k, v in out.items() if v}


def poly_scale(a: Poly, c: Fraction) -> Poly:
    return {k: v * c for k, v in a.items() if v * c}


def poly_eval(p: Poly, point: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for exps, c in p.items():
        term = c
        for x, e in zip(point, exps):
            term *= Fraction(x) ** e
        total += term
    return total


def _coefficients_in(poly: Poly, var: int) -> list[Poly]:
    """Coefficient polys of x_var^0, x_var^1, x_var^2 with the variable removed."""
    coeffs: list[Poly] = [{}, {}, {}]
    for exps, c in poly.items():
        e = exps[var]
        rest = exps[:var] + (0,) + exps[var + 1 :]
        coeffs[e][rest] = coeffs[e].get(rest, Fraction(0)) + c
    return [{k: v for k, v in layer.items() if v} for layer in coeffs]


def resultant_in_var(p: Poly, q: Poly, var: int) -> Poly:
    """Resultant of two (at most quadratic) polys in variable `var`.

    Degrees are the actual degrees; the resultant vanishes identically iff the
    two have a common factor of positive degree in that variable.
    """
    pc = _coefficients_in(p, var)
    qc = _coefficients_in(q, var)
    while pc and poly_is_zero(pc[-1]):
        pc.pop()
    while qc and poly_is_zero(qc[-1]):
        qc.pop()
    if not pc or not qc:
        return {}
    m, n = len(pc) - 1, len(qc) - 1
    if m == 0 and n == 0:
        return {tuple([0] * _arity(p, q)): Fraction(1)}
    if m == 0:
        out = pc[0]
        for _ in range(n - 1):
            out = poly_mul(out, pc[0])
        return out
    if n == 0:
        out = qc[0]
        for _ in range(m - 1):
            out = poly_mul(out, qc[0])
        return out
    if m == 1 and n == 1:
        return poly_sub(poly_mul(pc[1], qc[0]), poly_mul(pc[0], qc[1]))
    if m == 1 and n == 2:
        p0, p1 = pc
        q0, q1, q2 = qc
        return poly_add(
            poly_sub(poly_mul(q2, poly_mul(p0, p0)), poly_mul(q1, poly_mul(p0, p1))),
            poly_mul(q0, poly_mul(p1, p1)),
        )
    if m == 2 and n == 1:
        return resultant_in_var(q, p, var)
    # m == n == 2: classical closed form
    p0, p1, p2 = pc
    q0, q1, q2 = qc
    t1 = poly_sub(poly_mul(p2, q0), poly_mul(p0, q2))
    t2 = poly_sub(poly_mul(p1, q0), poly_mul(p0, q1))
    t3 = poly_sub(poly_mul(p2, q1), poly_mul(p1, q2))
    return poly_sub(poly_mul(t1, t1), poly_mul(t2, t3))


def _arity(*polys: Poly) -> int:
    for p in polys:
        for k in p:
            return len(k)
    return 0


def conics_intersect_finitely(t1: Poly, t2: Poly, arity: int = 3) -> bool:
    """Whether two nonzero ternary quadratics meet in finitely many projective points.

    Finite iff they share no factor, iff no variable elimination collapses:
    a nonconstant common factor involves some variable, whose resultant then
    vanishes identically.
    """
    if poly_is_zero(t1) or poly_is_zero(t2):
        return False
    for var in range(arity):
        if poly_is_zero(resultant_in_var(t1, t2, var)):
            return False
    return True
