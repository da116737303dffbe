"""Exact arithmetic over Q and real multi-quadratic extensions Q(sqrt(d1), sqrt(d2)).

Elements live on the fixed monomial basis {prod_{i in S} sqrt(d_i) : S subset of
radicands}, indexed by bitmask, with reduced Fraction coefficients.  Equality is
componentwise, signs are decided by exact recursion, and linear algebra over Q
is plain Fraction elimination.  No floating point ever enters a predicate;
floats are only exported for rendering and prefilters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[int, Fraction, str]


def squarefree_core(n: int) -> tuple[int, int]:
    """Decompose n = s*s*m with m squarefree; returns (s, m).  Requires n >= 1."""
    if n < 1:
        raise ValueError("squarefree_core requires a positive integer")
    s, m = 1, 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                m *= p
        p += 1 if p == 2 else 2
    return s, m * n


def is_squarefree(n: int) -> bool:
    return n >= 1 and squarefree_core(n)[1] == n


def to_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def fraction_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _sign_fraction(q: Fraction) -> int:
    return (q > 0) - (q < 0)


@dataclass(frozen=True)
class QuadraticField:
    """A real field Q(sqrt(d1), ..., sqrt(dk)) with k in {0, 1, 2}.

    Radicands are squarefree, >= 2, strictly increasing; with two radicands the
    product is automatically not a perfect square, so the basis has 2^k distinct
    monomials and the multiplication table is closed.
    """

    radicands: tuple[int, ...]

    def __post_init__(self) -> None:
        rads = self.radicands
        if not isinstance(rads, tuple):
            raise TypeError("radicands must be a tuple")
        if len(rads) > 2:
            raise ValueError("at most two radicands are supported")
        for d in rads:
            if not isinstance(d, int) or d < 2:
                raise ValueError(f"radicand {d!r} must be an integer >= 2")
            if not is_squarefree(d):
                raise ValueError(f"radicand {d} is not squarefree")
        if len(rads) == 2 and rads[0] >= rads[1]:
            raise ValueError("radicands must be strictly increasing")

    @classmethod
    def of(cls, *radicands: int) -> "QuadraticField":
        """Build a field from radicands in any order, reducing each to its core."""
        cores = sorted({squarefree_core(d)[1] for d in radicands if squarefree_core(d)[1] != 1})
        return cls(tuple(cores))

    @property
    def degree(self) -> int:
        return 1 << len(self.radicands)

    @property
    def monomial_squares(self) -> tuple[int, ...]:
        squares = []
        for mask in range(self.degree):
            m = 1
            for i, d in enumerate(self.radicands):
                if mask >> i & 1:
                    m *= d
            squares.append(m)
        return tuple(squares)

    def element(self, coeffs: Iterable[RationalLike]) -> "FieldElement":
        cs = tuple(to_fraction(c) for c in coeffs)
        if len(cs) != self.degree:
            raise ValueError(f"expected {self.degree} coefficients, got {len(cs)}")
        return FieldElement(self, cs)

    def rational(self, q: RationalLike) -> "FieldElement":
        cs = [to_fraction(q)] + [Fraction(0)] * (self.degree - 1)
        return FieldElement(self, tuple(cs))

    @property
    def zero(self) -> "FieldElement":
        return self.rational(0)

    @property
    def one(self) -> "FieldElement":
        return self.rational(1)

    def sqrt_of(self, n: int) -> "FieldElement":
        """The element sqrt(n) for n >= 1, when it lies in this field."""
        s, m = squarefree_core(n)
        if m == 1:
            return self.rational(s)
        for mask, sq in enumerate(self.monomial_squares):
            ms, mm = squarefree_core(sq)
            if mm == m:
                cs = [Fraction(0)] * self.degree
                cs[mask] = Fraction(s, ms)
                return FieldElement(self, tuple(cs))
        raise ValueError(f"sqrt({n}) does not lie in {self}")

    def __str__(self) -> str:
        if not self.radicands:
            return "Q"
        inner = ",".join(f"sqrt({d})" for d in self.radicands)
        return f"Q({inner})"


RATIONALS = QuadraticField(())


def join_fields(a: QuadraticField, b: QuadraticField) -> QuadraticField:
    return QuadraticField.of(*(a.radicands + b.radicands))


def _mul_coeffs(
    a: Sequence[Fraction], b: Sequence[Fraction], rads: tuple[int, ...]
) -> list[Fraction]:
    out = [Fraction(0)] * len(a)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if not bj:
                continue
            f = ai * bj
            common = i & j
            if common:
                for t, d in enumerate(rads):
                    if common >> t & 1:
                        f *= d
            out[i ^ j] += f
    return out


def _sign_coeffs(coeffs: Sequence[Fraction], rads: tuple[int, ...]) -> int:
    # a = A + B*sqrt(d_last) with A, B in the subfield; recurse on A, B.
    if not rads:
        return _sign_fraction(coeffs[0])
    half = len(coeffs) // 2
    lower = rads[:-1]
    a, b = coeffs[:half], coeffs[half:]
    sa = _sign_coeffs(a, lower)
    sb = _sign_coeffs(b, lower)
    if sb == 0:
        return sa
    if sa == 0:
        return sb
    if sa == sb:
        return sa
    d = rads[-1]
    bb = _mul_coeffs(b, b, lower)
    t = [x - d * y for x, y in zip(_mul_coeffs(a, a, lower), bb)]
    return sa * _sign_coeffs(t, lower)


@dataclass(frozen=True)
class FieldElement:
    """An exact element of a QuadraticField on the monomial basis."""

    field: QuadraticField
    coeffs: tuple[Fraction, ...]

    def _check(self, other: "FieldElement") -> None:
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def _coerce(self, other: object) -> "FieldElement | None":
        if isinstance(other, FieldElement):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other)
        return None

    def __add__(self, other: object) -> "FieldElement":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other: object) -> "FieldElement":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other: object) -> "FieldElement":
        return (-self) + other

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, tuple(-a for a in self.coeffs))

    def __mul__(self, other: object) -> "FieldElement":
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return FieldElement(self.field, tuple(a * q for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(
            self.field, tuple(_mul_coeffs(self.coeffs, o.coeffs, self.field.radicands))
        )

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "FieldElement":
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                raise ZeroDivisionError("division of field element by zero")
            return FieldElement(self.field, tuple(a / q for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> "FieldElement":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> "FieldElement":
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = self.field.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __bool__(self) -> bool:
        return any(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def inverse(self) -> "FieldElement":
        """Exact inverse via the product of the nontrivial conjugates."""
        if self.is_zero:
            raise ZeroDivisionError("inversion of the zero field element")
        conjs = self.conjugations()
        prod = self.field.one
        for c in conjs[1:]:
            prod = prod * c
        norm = self * prod
        value = norm.rational_value()
        if value is None:  # degree-1 fields: prod is empty product = 1
            raise AssertionError("field norm is not rational")
        return prod * Fraction(1, 1) / value

    def conjugations(self) -> tuple["FieldElement", ...]:
        """Images under all sign flips of the radicals; the first entry is self."""
        k = len(self.field.radicands)
        out = []
        for flip in range(1 << k):
            cs = tuple(
                -c if (mask & flip).bit_count() & 1 else c
                for mask, c in enumerate(self.coeffs)
            )
            out.append(FieldElement(self.field, cs))
        return tuple(out)

    def sign(self) -> int:
        """Exact sign under the positive-root embedding: -1, 0 or +1."""
        return _sign_coeffs(self.coeffs, self.field.radicands)

    def canonical_terms(self) -> tuple[tuple[int, Fraction], ...]:
        """Field-independent form: sorted (m, c) with value sum(c * sqrt(m)), m squarefree."""
        terms: dict[int, Fraction] = {}
        for mask, c in enumerate(self.coeffs):
            if not c:
                continue
            s, m = squarefree_core(self.field.monomial_squares[mask])
            terms[m] = terms.get(m, Fraction(0)) + c * s
        return tuple(sorted((m, c) for m, c in terms.items() if c))

    def rational_value(self) -> Fraction | None:
        """The element as a Fraction when it is rational, else None."""
        terms = self.canonical_terms()
        if not terms:
            return Fraction(0)
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return None

    def promote(self, field: QuadraticField) -> "FieldElement":
        """Re-express this element in a (super)field containing all its terms."""
        if field == self.field:
            return self
        cores = {}
        for mask, sq in enumerate(field.monomial_squares):
            s, m = squarefree_core(sq)
            cores[m] = (mask, s)
        cs = [Fraction(0)] * field.degree
        for m, c in self.canonical_terms():
            if m not in cores:
                raise ValueError(f"{self} does not lie in {field}")
            mask, s = cores[m]
            cs[mask] += c / s
        return FieldElement(field, tuple(cs))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElement):
            if other.field == self.field:
                return self.coeffs == other.coeffs
            return self.canonical_terms() == other.canonical_terms()
        if isinstance(other, (int, Fraction)):
            return self.rational_value() == Fraction(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.canonical_terms())

    def _cmp(self, other: object) -> int:
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot compare {self!r} with {other!r}")
        return (self - o).sign()

    def __lt__(self, other: object) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: object) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: object) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: object) -> bool:
        return self._cmp(other) >= 0

    def __float__(self) -> float:
        total = 0.0
        for mask, c in enumerate(self.coeffs):
            if c:
                total += float(c) * math.sqrt(self.field.monomial_squares[mask])
        return total

    def __str__(self) -> str:
        parts = []
        for mask, c in enumerate(self.coeffs):
            if not c:
                continue
            sq = self.field.monomial_squares[mask]
            if sq == 1:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"sqrt({sq})")
            else:
                parts.append(f"{c}*sqrt({sq})")
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"<{self} in {self.field}>"

    def to_json(self) -> dict:
        return {
            "coeffs": [fraction_str(c) for c in self.coeffs],
            "radicands": list(self.field.radicands),
        }

    @classmethod
    def from_json(cls, data: dict) -> "FieldElement":
        field = QuadraticField(tuple(data["radicands"]))
        return field.element(data["coeffs"])


def sign(a: "FieldElement | Fraction | int") -> int:
    if isinstance(a, FieldElement):
        return a.sign()
    return _sign_fraction(Fraction(a))


def conjugations(a: FieldElement) -> tuple[FieldElement, ...]:
    return a.conjugations()


def same_value(a: FieldElement, b: FieldElement) -> bool:
    return a.canonical_terms() == b.canonical_terms()


# ---------------------------------------------------------------------------
# Exact linear algebra over Q
# ---------------------------------------------------------------------------


def rref_fractions(
    rows: Sequence[Sequence[Fraction]],
) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    mat = [list(r) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        pv = mat[r][c]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank_fractions(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref_fractions(rows)[1])


def kernel_fractions(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {v : Mv = 0} from the RREF, one vector per free column."""
    red, pivots = rref_fractions(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def primitive_integer_vector(vec: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers with positive leading entry."""
    denom = math.lcm(*(f.denominator for f in vec)) if vec else 1
    ints = [int(f * denom) for f in vec]
    g = math.gcd(*ints) if any(ints) else 1
    if g == 0:
        g = 1
    ints = [x // g for x in ints]
    lead = next((x for x in ints if x), 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def rational_kernel(
    rows: Sequence[Sequence[FieldElement]], ncols: int | None = None
) -> list[tuple[int, ...]]:
    """Basis over Q of {v in Q^n : Mv = 0} for a matrix of field elements.

    Each field entry is split into its rational components, the stacked rational
    system is solved exactly, and basis vectors come back in echelon form as
    primitive integer vectors (gcd 1, first nonzero positive).
    """
    rows = [list(r) for r in rows]
    if ncols is None:
        if not rows:
            raise ValueError("empty matrix needs an explicit column count")
        ncols = len(rows[0])
    stacked: list[list[Fraction]] = []
    for row in rows:
        if len(row) != ncols:
            raise ValueError("ragged matrix")
        degree = row[0].field.degree if row else 1
        for t in range(degree):
            stacked.append([entry.coeffs[t] for entry in row])
    basis = kernel_fractions(stacked, ncols)
    if not basis:
        return []
    echelon, _ = rref_fractions(basis)
    return [primitive_integer_vector(v) for v in echelon]
