"""Totally real number fields with exact integral-basis arithmetic.

A field is described by a monic integer minimal polynomial for a generator
theta and an integral basis given as rational polynomials in theta. Ring
elements carry exact integer coordinates over that basis; embeddings into
R^n use the real roots of the minimal polynomial in ascending order.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exact


class NotTotallyRealError(ValueError):
    """Raised when a minimal polynomial has non-real roots."""


class FieldMismatchError(ValueError):
    """Raised when combining elements of different fields."""


def real_roots(min_poly, tol=1e-10):
    """All real roots of a monic squarefree integer polynomial, ascending.

    Roots come from the companion matrix and are polished with Newton steps.
    Raises NotTotallyRealError unless every root is real and simple.
    """
    coeffs = [int(c) for c in min_poly]
    if coeffs[-1] != 1:
        raise ValueError("minimal polynomial must be monic")
    deg = len(coeffs) - 1
    if deg == 1:
        return np.array([-float(coeffs[0])])
    raw = np.roots(coeffs[::-1])
    scale = max(1.0, float(np.max(np.abs(raw))))
    if np.max(np.abs(raw.imag)) > tol * scale:
        raise NotTotallyRealError("minimal polynomial has complex roots")
    roots = np.sort(raw.real)
    if deg > 1 and np.min(np.diff(roots)) < 1e-8 * scale:
        raise NotTotallyRealError("minimal polynomial has repeated roots")
    dp = [i * coeffs[i] for i in range(1, deg + 1)]
    for _ in range(4):
        num = np.array([exact.poly_eval(coeffs, float(x)) for x in roots])
        den = np.array([exact.poly_eval(dp, float(x)) for x in roots])
        roots = roots - num / den
    if deg > 1 and np.min(np.diff(roots)) < 1e-8 * scale:
        raise NotTotallyRealError("minimal polynomial has repeated roots")
    return roots


@dataclass(frozen=True)
class AlgebraicInt:
    """Ring-of-integers element with exact integer coordinates."""

    field: "NumberField"
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
        if len(self.coords) != self.field.degree:
            raise ValueError("coordinate length does not match field degree")

    def _check(self, other):
        if self.field is not other.field and self.field.name != other.field.name:
            raise FieldMismatchError("elements belong to different fields")

    def __add__(self, other):
        self._check(other)
        return AlgebraicInt(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return AlgebraicInt(self.field, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return AlgebraicInt(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, int):
            return AlgebraicInt(self.field, tuple(other * a for a in self.coords))
        self._check(other)
        n = self.field.degree
        table = self.field.mult_table
        out = [0] * n
        for i, a in enumerate(self.coords):
            if a == 0:
                continue
            for j, b in enumerate(other.coords):
                if b == 0:
                    continue
                tij = table[i][j]
                for k in range(n):
                    out[k] += a * b * tij[k]
        return AlgebraicInt(self.field, tuple(out))

    __rmul__ = __mul__

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def embed(self):
        """Vector of real embeddings, ascending root order."""
        return self.field.embeddings @ np.array(self.coords, dtype=float)

    def mul_matrix(self):
        """Integer matrix of multiplication by self on basis coordinates."""
        n = self.field.degree
        table = self.field.mult_table
        cols = []
        for j in range(n):
            col = [0] * n
            for i, a in enumerate(self.coords):
                if a == 0:
                    continue
                tij = table[i][j]
                for k in range(n):
                    col[k] += a * tij[k]
            cols.append(col)
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def trace(self):
        return sum(self.mul_matrix()[i][i] for i in range(self.field.degree))

    def norm(self):
        return exact.int_mat_det(self.mul_matrix())

    def as_field_element(self):
        return FieldElement(self.field, tuple(Fraction(c) for c in self.coords))


@dataclass(frozen=True)
class FieldElement:
    """Field element with exact rational coordinates over the integral basis."""

    field: "NumberField"
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    def _check(self, other):
        if self.field is not other.field and self.field.name != other.field.name:
            raise FieldMismatchError("elements belong to different fields")

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(other * a for a in self.coords))
        self._check(other)
        n = self.field.degree
        table = self.field.mult_table
        out = [Fraction(0)] * n
        for i, a in enumerate(self.coords):
            if a == 0:
                continue
            for j, b in enumerate(other.coords):
                if b == 0:
                    continue
                tij = table[i][j]
                for k in range(n):
                    out[k] += a * b * tij[k]
        return FieldElement(self.field, tuple(out))

    __rmul__ = __mul__

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def inverse(self):
        """Multiplicative inverse via extended gcd against the minimal polynomial."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        poly = self.field.to_power_basis(self.coords)
        g, s, _ = exact.poly_ext_gcd(poly, [Fraction(c) for c in self.field.min_poly])
        if len(g) != 1:
            raise ZeroDivisionError("element is a zero divisor (reducible modulus?)")
        inv_poly = exact.poly_scale(s, 1 / g[0])
        inv_poly = exact.poly_mod(inv_poly, [Fraction(c) for c in self.field.min_poly])
        return FieldElement(self.field, self.field.from_power_basis(inv_poly))


class NumberField:
    """Totally real number field with a fixed integral basis.

    Attributes:
        name: catalog identifier.
        min_poly: monic integer coefficients, low degree first.
        degree: field degree n.
        basis_polys: integral basis as rational polynomials in theta.
        roots: real roots of min_poly, ascending.
        embeddings: n x n matrix, entry (i, j) = sigma_i(basis_j).
        discriminant: exact integer discriminant of the basis.
        mult_table: exact integer coordinates of basis_i * basis_j.
    """

    def __init__(self, name, min_poly, basis_polys):
        self.name = name
        self.min_poly = tuple(int(c) for c in min_poly)
        n = len(self.min_poly) - 1
        self.degree = n
        if self.min_poly[-1] != 1:
            raise ValueError("minimal polynomial must be monic")
        if len(basis_polys) != n:
            raise ValueError("integral basis must have %d elements" % n)
        mp = [Fraction(c) for c in self.min_poly]
        polys = []
        for bp in basis_polys:
            q = exact.poly_mod([Fraction(c) for c in bp], mp)
            polys.append(tuple(q + [Fraction(0)] * (n - len(q))))
        self.basis_polys = tuple(polys)
        if self.basis_polys[0] != tuple([Fraction(1)] + [Fraction(0)] * (n - 1)):
            raise ValueError("first integral basis element must be 1")

        # basis matrix: column j holds power-basis coefficients of basis_j
        self._basis_mat = [[polys[j][i] for j in range(n)] for i in range(n)]
        if exact.mat_det(self._basis_mat) == 0:
            raise ValueError("integral basis is linearly dependent")

        # multiplication table, exact
        table = []
        for i in range(n):
            row = []
            for j in range(n):
                prod = exact.poly_mul(list(polys[i]), list(polys[j]))
                prod = exact.poly_mod(prod, mp)
                coords = self.from_power_basis(prod)
                for c in coords:
                    if c.denominator != 1:
                        raise ValueError("basis is not multiplicatively closed over Z")
                row.append(tuple(int(c) for c in coords))
            table.append(tuple(row))
        self.mult_table = tuple(table)

        # exact discriminant via the trace form
        trace_mat = [[self.element(self.mult_table[i][j]).trace() for j in range(n)]
                     for i in range(n)]
        disc = exact.int_mat_det(trace_mat)
        if disc <= 0:
            raise NotTotallyRealError("trace form is not positive definite")
        self.discriminant = disc

        self.roots = real_roots(self.min_poly)
        emb = np.empty((n, n))
        for i, r in enumerate(self.roots):
            for j in range(n):
                emb[i, j] = exact.poly_eval([float(c) for c in polys[j]], float(r))
        self.embeddings = emb

        det2 = np.linalg.det(emb) ** 2
        if abs(det2 - disc) > 1e-9 * disc:
            raise ValueError("embedding matrix disagrees with exact discriminant")

    # -- coordinate conversions -------------------------------------------

    def to_power_basis(self, coords):
        """Rational polynomial in theta for basis coordinates."""
        n = self.degree
        out = [Fraction(0)] * n
        for j, c in enumerate(coords):
            for i in range(n):
                out[i] += Fraction(c) * self.basis_polys[j][i]
        return exact.poly_trim(out)

    def from_power_basis(self, poly):
        """Basis coordinates of a rational polynomial in theta."""
        n = self.degree
        rhs = [Fraction(poly[i]) if i < len(poly) else Fraction(0) for i in range(n)]
        sol = exact.mat_solve(self._basis_mat, [rhs])
        return list(sol[0])

    # -- element constructors ----------------------------------------------

    def element(self, coords):
        return AlgebraicInt(self, tuple(coords))

    def zero(self):
        return self.element([0] * self.degree)

    def one(self):
        return self.element([1] + [0] * (self.degree - 1))

    def theta(self):
        coords = self.from_power_basis([Fraction(0), Fraction(1)] if self.degree > 1
                                       else [Fraction(0)])
        assert all(c.denominator == 1 for c in coords)
        return self.element([int(c) for c in coords])

    def field_element(self, coords):
        return FieldElement(self, tuple(coords))

    def __repr__(self):
        return "NumberField(%r, degree=%d, disc=%d)" % (self.name, self.degree,
                                                        self.discriminant)


def rank_over_K(field, rows):
    """Rank of a matrix with entries in the field, by exact elimination.

    `rows` is a sequence of sequences of AlgebraicInt or FieldElement.
    """
    work = []
    for row in rows:
        conv = []
        for x in row:
            if isinstance(x, AlgebraicInt):
                conv.append(x.as_field_element())
            else:
                conv.append(x)
        work.append(conv)
    rank = 0
    ncols = len(work[0]) if work else 0
    col = 0
    while work and col < ncols:
        piv_idx = next((i for i, r in enumerate(work) if not r[col].is_zero()), None)
        if piv_idx is None:
            col += 1
            continue
        piv = work.pop(piv_idx)
        inv = piv[col].inverse()
        piv = [x * inv for x in piv]
        nxt = []
        for r in work:
            if not r[col].is_zero():
                f = r[col]
                r = [x - f * y for x, y in zip(r, piv)]
            nxt.append(r)
        work = nxt
        rank += 1
        col += 1
    return rank


# ---------------------------------------------------------------------------
# Field catalog.
# ---------------------------------------------------------------------------

def _power_basis(n):
    return [[0] * k + [1] for k in range(n)]


_CATALOG_SPECS = {
    "rational": ([0, 1], [[1]]),
    # real quadratic fields, named by discriminant
    "quad-5": ([-1, -1, 1], _power_basis(2)),
    "quad-8": ([-2, 0, 1], _power_basis(2)),
    "quad-12": ([-3, 0, 1], _power_basis(2)),
    "quad-13": ([-3, -1, 1], _power_basis(2)),
    "quad-17": ([-4, -1, 1], _power_basis(2)),
    # totally real cubic fields
    "cubic-49": ([-1, -2, 1, 1], _power_basis(3)),
    "cubic-81": ([-1, -3, 0, 1], _power_basis(3)),
    "cubic-148": ([-1, -3, 1, 1], _power_basis(3)),
    "cubic-169": ([-1, -4, -1, 1], _power_basis(3)),
    # totally real quartic fields
    "quartic-725": ([1, -1, -3, 1, 1],
                    [[1], [0, 1], [-1, 1, 1], [-1, -2, 1, 1]]),
    "quartic-1125": ([1, -4, -4, 1, 1],
                     [[1], [0, 1], [-2, 0, 1], [-1, -3, 0, 1]]),
    "quartic-1600": ([-1, 8, 0, -4, 1],
                     [[1], [0, 1],
                      [Fraction(-1, 2), Fraction(-1), Fraction(1, 2)],
                      [Fraction(3, 2), Fraction(-1, 2), Fraction(-3, 2), Fraction(1, 2)]]),
    "quartic-1957": ([1, 1, -4, 0, 1],
                     [[1], [0, 1], [-2, 0, 1], [1, -3, 0, 1]]),
    # totally real quintic fields
    "quintic-14641": ([1, 3, -3, -4, 1, 1],
                      [[1], [0, 1], [-2, 0, 1], [0, -3, 0, 1], [1, -2, -3, 1, 1]]),
    "quintic-24217": ([1, 3, -1, -5, 0, 1],
                      [[1], [0, 1], [-2, 0, 1], [-1, -4, 0, 1], [2, 0, -5, 0, 1]]),
    "quintic-36497": ([1, 2, -3, -5, 1, 1],
                      [[1], [0, 1], [-2, 0, 1], [-2, -4, 1, 1], [1, 2, -5, 0, 1]]),
    "quintic-38569": ([-1, 4, -1, -5, 1, 1],
                      [[1], [0, 1], [-2, 1, 1], [0, -3, 1, 1], [3, -2, -5, 1, 1]]),
    # maximal real subfields of cyclotomic fields, degree 11 and 14
    "cyclotomic-23": ([-1, -6, 15, 35, -35, -56, 28, 36, -9, -10, 1, 1],
                      _power_basis(11)),
    "cyclotomic-29": ([-1, 7, 28, -56, -126, 126, 210, -120, -165, 55, 66, -12, -13, 1, 1],
                      _power_basis(14)),
}

_CACHE = {}


def catalog_names():
    return list(_CATALOG_SPECS)


def catalog_field(name):
    """Construct (and cache) a catalog field by name."""
    if name not in _CATALOG_SPECS:
        raise KeyError("unknown field %r; known: %s" % (name, ", ".join(_CATALOG_SPECS)))
    if name not in _CACHE:
        min_poly, basis = _CATALOG_SPECS[name]
        _CACHE[name] = NumberField(name, min_poly, basis)
    return _CACHE[name]


def _parse_rational(x):
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        f = Fraction(x).limit_denominator(10**6)
        if abs(float(f) - x) > 1e-12 * max(1.0, abs(x)):
            raise ValueError("basis coefficient %r is not exactly rational" % x)
        return f
    return Fraction(x)


def field_from_json(doc):
    """Build a field from a JSON document {name, min_poly, basis}.

    min_poly lists monic integer coefficients low degree first; basis lists
    each integral basis element as rational coefficients in theta (numbers
    or strings like "1/2").
    """
    if isinstance(doc, str):
        doc = json.loads(doc)
    name = doc["name"]
    min_poly = [int(c) for c in doc["min_poly"]]
    basis = [[_parse_rational(c) for c in row] for row in doc["basis"]]
    return NumberField(name, min_poly, basis)


def field_to_json(field):
    return {
        "name": field.name,
        "min_poly": list(field.min_poly),
        "basis": [[str(c) for c in bp] for bp in field.basis_polys],
    }
