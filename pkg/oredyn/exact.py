import logging
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import sympy
from sympy import Poly

from oredyn.exceptions import ValidationError

logger = logging.getLogger(__name__)

LAMBDA = sympy.Symbol("lambda")
_X = sympy.Symbol("x")
_Y = sympy.Symbol("y")

Exponent = Tuple[int, ...]
IntegerMatrix = Tuple[Tuple[int, ...], ...]
Point2 = Tuple[int, int]
RationalLike = Union[int, str, Fraction]

VARIABLE_NAMES = ("u", "v", "x", "y", "s", "r")


def to_fraction(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValidationError("Malformed rational number %r" % value)
    if isinstance(value, bool):
        raise ValidationError("Expected a rational number, got %r" % value)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    raise ValidationError("Expected a rational number, got %r" % (value,))


def to_sympy_rational(value: Fraction) -> sympy.Rational:
    return sympy.Rational(value.numerator, value.denominator)


def format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return "%d/%d" % (value.numerator, value.denominator)


# Integer matrices


def as_matrix(rows: Iterable[Iterable[int]]) -> IntegerMatrix:
    """
    Normalize nested sequences into an immutable square integer matrix.
    """
    matrix = tuple(tuple(int(entry) for entry in row) for row in rows)
    if not matrix or any(len(row) != len(matrix) for row in matrix):
        raise ValidationError("Matrix must be square and non-empty")
    return matrix


def identity_matrix(n: int) -> IntegerMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def matrix_mul(a: IntegerMatrix, b: IntegerMatrix) -> IntegerMatrix:
    size = len(b[0])
    return tuple(tuple(sum(row[k] * b[k][j] for k in range(len(b))) for j in range(size)) for row in a)


def matrix_vector(a: IntegerMatrix, vector: Sequence[int]) -> Exponent:
    return tuple(sum(row[k] * vector[k] for k in range(len(vector))) for row in a)


def transpose(a: IntegerMatrix) -> IntegerMatrix:
    return tuple(zip(*a))


def determinant(a: IntegerMatrix) -> int:
    return int(sympy.Matrix(a).det())


def matrix_inverse(a: IntegerMatrix) -> IntegerMatrix:
    """
    Inverse of a unimodular integer matrix.
    """
    if abs(determinant(a)) != 1:
        raise ValidationError("Matrix %r is not invertible over the integers" % (a,))
    inverse = sympy.Matrix(a).inv()
    return tuple(tuple(int(inverse[i, j]) for j in range(len(a))) for i in range(len(a)))


def matrix_power(a: IntegerMatrix, n: int) -> IntegerMatrix:
    if n < 0:
        return matrix_power(matrix_inverse(a), -n)
    result = identity_matrix(len(a))
    base = a
    while n:
        if n & 1:
            result = matrix_mul(result, base)
        base = matrix_mul(base, base)
        n >>= 1
    return result


def matrix_sub(a: IntegerMatrix, b: IntegerMatrix) -> IntegerMatrix:
    return tuple(tuple(x - y for x, y in zip(row_a, row_b)) for row_a, row_b in zip(a, b))


def is_zero_matrix(a: IntegerMatrix) -> bool:
    return all(entry == 0 for row in a for entry in row)


def max_norm(a: IntegerMatrix) -> int:
    """
    The induced infinity norm (maximum absolute row sum).
    """
    return max(sum(abs(entry) for entry in row) for row in a)


def char_poly(matrix: IntegerMatrix) -> Poly:
    """
    det(lambda*I - M) as a monic integer polynomial in ``LAMBDA``.
    """
    expr = sympy.Matrix(matrix).charpoly(LAMBDA).as_expr()
    return Poly(expr, LAMBDA, domain="ZZ")


def evaluate_matrix_poly(poly: Poly, matrix: IntegerMatrix) -> IntegerMatrix:
    """
    Horner evaluation of an integer polynomial at an integer matrix.
    """
    n = len(matrix)
    result = tuple(tuple(0 for _ in range(n)) for _ in range(n))
    for coeff in poly.all_coeffs():
        result = matrix_mul(result, matrix)
        result = tuple(
            tuple(entry + (int(coeff) if i == j else 0) for j, entry in enumerate(row)) for i, row in enumerate(result)
        )
    return result


# Algebraic reals


def _in_x(poly: Poly) -> Poly:
    if not isinstance(poly, Poly):
        return Poly(poly, _X, domain="ZZ")
    return Poly(poly.as_expr().subs(poly.gen, _X), _X, domain="ZZ")


def count_roots(poly: Poly, lo: Fraction, hi: Fraction) -> int:
    """
    Number of distinct real roots in the closed interval [lo, hi].
    """
    if lo == hi:
        return 1 if poly.eval(to_sympy_rational(lo)) == 0 else 0
    return poly.count_roots(to_sympy_rational(lo), to_sympy_rational(hi))


class AlgebraicReal:
    """
    A real algebraic number given by a squarefree integer polynomial and a
    rational interval containing exactly one of its real roots.
    """

    def __init__(self, defining_poly: Poly, lo: Fraction, hi: Fraction):
        poly = Poly(sympy.sqf_part(_in_x(defining_poly).as_expr()), _X, domain="ZZ")
        if poly.LC() < 0:
            poly = -poly
        if lo > hi:
            raise ValueError("Empty isolating interval [%s, %s]" % (lo, hi))
        if count_roots(poly, lo, hi) != 1:
            raise ValueError("Interval [%s, %s] does not isolate a single root of %s" % (lo, hi, poly.as_expr()))
        self.defining_poly = poly
        self.lo = lo
        self.hi = hi

    @classmethod
    def from_rational(cls, value: Fraction) -> "AlgebraicReal":
        poly = Poly(value.denominator * _X - value.numerator, _X, domain="ZZ")
        return cls(poly, value, value)

    @classmethod
    def largest_root(cls, poly: Poly) -> "AlgebraicReal":
        """
        The largest real root of ``poly``.
        """
        poly = _in_x(poly)
        intervals = poly.intervals()
        if not intervals:
            raise ValueError("%s has no real roots" % poly.as_expr())
        (lo, hi), _ = max(intervals, key=lambda item: item[0][1])
        return cls(poly, to_fraction(lo), to_fraction(hi))

    def _count(self, lo: Fraction, hi: Fraction) -> int:
        return count_roots(self.defining_poly, lo, hi)

    def refine(self, width: Fraction) -> "AlgebraicReal":
        lo, hi = self.lo, self.hi
        while hi - lo > width:
            mid = (lo + hi) / 2
            if self._count(lo, mid) == 1:
                hi = mid
            else:
                lo = mid
        result = AlgebraicReal.__new__(AlgebraicReal)
        result.defining_poly, result.lo, result.hi = self.defining_poly, lo, hi
        return result

    @property
    def is_rational(self) -> bool:
        return self.rational_value() is not None

    def rational_value(self) -> Optional[Fraction]:
        if self.defining_poly.degree() == 1:
            b, a = self.defining_poly.all_coeffs()
            return Fraction(-int(a), int(b))
        return None

    def compare(self, other: Union["AlgebraicReal", Fraction, int]) -> int:
        """
        Exact three-way comparison: -1, 0 or 1.
        """
        if not isinstance(other, AlgebraicReal):
            other = AlgebraicReal.from_rational(to_fraction(other))
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo <= hi:
            common = Poly(sympy.gcd(self.defining_poly.as_expr(), other.defining_poly.as_expr()), _X, domain="ZZ")
            if common.degree() > 0 and count_roots(common, lo, hi) > 0:
                return 0
        a, b = self, other
        while not (a.hi < b.lo or b.hi < a.lo):
            a = a.refine((a.hi - a.lo) / 2)
            b = b.refine((b.hi - b.lo) / 2)
        return -1 if a.hi < b.lo else 1

    def __eq__(self, other):
        if not isinstance(other, (AlgebraicReal, Fraction, int)):
            return NotImplemented
        return self.compare(other) == 0

    def __hash__(self):
        return hash(str(self.defining_poly.as_expr()))

    def __lt__(self, other):
        return self.compare(other) < 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def is_one(self) -> bool:
        return self.compare(1) == 0

    def __float__(self):
        approx = self.refine(Fraction(1, 10**12))
        return float((approx.lo + approx.hi) / 2)

    def __str__(self):
        value = self.rational_value()
        if value is not None:
            return format_fraction(value)
        return "root of %s in [%s, %s]" % (
            str(self.defining_poly.as_expr()).replace("x", "lambda"),
            format_fraction(self.lo),
            format_fraction(self.hi),
        )

    __repr__ = __str__

    def to_dict(self) -> dict:
        approx = self.refine(Fraction(1, 10**6))
        return {
            "value": str(self),
            "poly": str(self.defining_poly.as_expr()).replace("x", "lambda"),
            "interval": [format_fraction(approx.lo), format_fraction(approx.hi)],
            "approx": "%.6f" % float(self),
        }


def _abs_real_root_candidates(poly: Poly) -> List[AlgebraicReal]:
    """
    |mu| for every real root mu, represented by a factor of poly(x) or poly(-x).
    """
    candidates = []
    for signed in (poly.as_expr().subs(LAMBDA, _X), poly.as_expr().subs(LAMBDA, -_X)):
        _, factors = sympy.factor_list(signed, _X)
        for factor, _ in factors:
            factor_poly = Poly(factor, _X, domain="ZZ")
            if factor_poly.degree() < 1:
                continue
            for (lo, hi), _ in factor_poly.intervals():
                if hi >= 0:
                    candidates.append(AlgebraicReal(factor_poly, to_fraction(lo), to_fraction(hi)))
    return candidates


def spectral_radius(matrix: IntegerMatrix) -> AlgebraicReal:
    """
    max |mu| over the complex roots mu of the characteristic polynomial.

    rho^2 is the largest real root of Res_y(p(y), y^n p(x/y)), whose roots are
    the pairwise products of eigenvalues; when the maximum is attained by a
    real eigenvalue the returned defining polynomial is a factor of p(+-x).
    """
    poly = char_poly(matrix)
    n = poly.degree()
    p_y = poly.as_expr().subs(LAMBDA, _Y)
    homogenized = sympy.expand(_Y**n * poly.as_expr().subs(LAMBDA, _X / _Y))
    products = sympy.resultant(p_y, homogenized, _Y)
    squared = Poly(sympy.expand(products.subs(_X, _X**2)), _X, domain="ZZ")
    rho = AlgebraicReal.largest_root(Poly(sympy.sqf_part(squared.as_expr()), _X, domain="ZZ"))
    for candidate in _abs_real_root_candidates(poly):
        if candidate.compare(rho) == 0:
            return candidate
    _, factors = sympy.factor_list(rho.defining_poly.as_expr(), _X)
    for factor, _ in factors:
        factor_poly = Poly(factor, _X, domain="ZZ")
        if count_roots(factor_poly, rho.lo, rho.hi) == 1:
            return AlgebraicReal(factor_poly, rho.lo, rho.hi)
    return rho


# Lattices


class LatticeBasis(tuple):
    """
    A basis of a saturated sublattice of Z^n, stored as a tuple of vectors.
    """

    @property
    def rank(self) -> int:
        return len(self)

    def to_list(self) -> List[List[int]]:
        return [list(vector) for vector in self]


def normalize_sign(vector: Sequence[int]) -> Exponent:
    for entry in vector:
        if entry:
            return tuple(vector) if entry > 0 else tuple(-x for x in vector)
    return tuple(vector)


def primitive_vector(vector: Sequence[int]) -> Exponent:
    divisor = 0
    for entry in vector:
        divisor = gcd(divisor, entry)
    if divisor == 0:
        return tuple(vector)
    return normalize_sign([entry // divisor for entry in vector])


def integer_kernel(matrix: Sequence[Sequence[int]]) -> LatticeBasis:
    """
    A basis of {a in Z^n : M a = 0}.

    Unimodular column operations bring M into column echelon form while the
    same operations are applied to the identity; the transformed columns that
    sit over zero columns span the integer kernel, which is always saturated.
    """
    rows = [list(row) for row in matrix]
    n = len(rows[0]) if rows else 0
    work = [row[:] for row in rows]
    transform = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap(i, j):
        for row in work:
            row[i], row[j] = row[j], row[i]
        for row in transform:
            row[i], row[j] = row[j], row[i]

    def add_multiple(target, source, factor):
        for row in work:
            row[target] += factor * row[source]
        for row in transform:
            row[target] += factor * row[source]

    pivot_col = 0
    for r in range(len(work)):
        if pivot_col >= n:
            break
        while True:
            nonzero = [c for c in range(pivot_col, n) if work[r][c] != 0]
            if not nonzero:
                break
            smallest = min(nonzero, key=lambda c: abs(work[r][c]))
            swap(pivot_col, smallest)
            done = True
            for c in range(pivot_col + 1, n):
                if work[r][c]:
                    add_multiple(c, pivot_col, -(work[r][c] // work[r][pivot_col]))
                    if work[r][c]:
                        done = False
            if done:
                pivot_col += 1
                break

    kernel = []
    for c in range(pivot_col, n):
        kernel.append(normalize_sign([transform[i][c] for i in range(n)]))
    return LatticeBasis(sorted(kernel, reverse=True))


# Laurent polynomials


class LaurentPoly:
    """
    A Laurent polynomial over Q in ``arity`` variables.
    """

    __slots__ = ("terms", "arity")

    def __init__(self, terms: Optional[Dict[Exponent, RationalLike]] = None, arity: int = 2):
        if arity < 1:
            raise ValueError("arity must be positive")
        cleaned = {}
        for exponent, coeff in (terms or {}).items():
            exponent = tuple(int(e) for e in exponent)
            if len(exponent) != arity:
                raise ValueError("Exponent %r does not have length %d" % (exponent, arity))
            coeff = to_fraction(coeff)
            if coeff:
                cleaned[exponent] = cleaned.get(exponent, Fraction(0)) + coeff
                if not cleaned[exponent]:
                    del cleaned[exponent]
        self.terms = cleaned
        self.arity = arity

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff: RationalLike = 1) -> "LaurentPoly":
        return cls({tuple(exponent): coeff}, len(exponent))

    @classmethod
    def constant(cls, value: RationalLike, arity: int) -> "LaurentPoly":
        return cls({(0,) * arity: value}, arity)

    @classmethod
    def variable(cls, index: int, arity: int) -> "LaurentPoly":
        return cls.monomial(tuple(1 if i == index else 0 for i in range(arity)))

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(exponent) for exponent in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def support(self) -> List[Exponent]:
        return sorted(self.terms)

    def _check(self, other: "LaurentPoly"):
        if self.arity != other.arity:
            raise ValidationError("Arity mismatch: %d != %d" % (self.arity, other.arity))

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        return LaurentPoly.constant(to_fraction(other), self.arity)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for exponent, coeff in other.terms.items():
            terms[exponent] = terms.get(exponent, Fraction(0)) + coeff
        return LaurentPoly(terms, self.arity)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.terms.items()}, self.arity)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        terms: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exponent = tuple(a + b for a, b in zip(e1, e2))
                terms[exponent] = terms.get(exponent, Fraction(0)) + c1 * c2
        return LaurentPoly(terms, self.arity)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise ValueError("Only monomials are units in a Laurent polynomial ring")
            ((exponent, coeff),) = self.terms.items()
            return LaurentPoly.monomial(tuple(-e * -n for e in exponent), (1 / coeff) ** -n)
        result = LaurentPoly.constant(1, self.arity)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.arity == other.arity and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.constant(other, self.arity)
        return NotImplemented

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    def evaluate(self, point: Sequence[RationalLike]) -> Fraction:
        point = [to_fraction(value) for value in point]
        total = Fraction(0)
        for exponent, coeff in self.terms.items():
            term = coeff
            for value, e in zip(point, exponent):
                if value == 0 and e < 0:
                    raise ValidationError("Laurent polynomial is not defined at a point with zero coordinates")
                term *= value**e
            total += term
        return total

    def content_divides(self, other: "LaurentPoly") -> bool:
        """
        Whether ``other`` is a Laurent-multiple of ``self`` (exact division test).
        """
        return self.divide(other) is not None

    def divide(self, other: "LaurentPoly") -> Optional["LaurentPoly"]:
        """
        other / self when it is a Laurent polynomial, otherwise None.
        """
        self._check(other)
        if other.is_zero():
            return LaurentPoly({}, self.arity)
        if self.is_zero():
            return None
        gens = sympy.symbols("g0:%d" % self.arity)
        num, num_shift = self.to_sympy(gens)
        den, den_shift = other.to_sympy(gens)
        quotient, remainder = sympy.div(Poly(den, *gens, domain="QQ"), Poly(num, *gens, domain="QQ"))
        if not remainder.is_zero:
            return None
        shift = tuple(a - b for a, b in zip(den_shift, num_shift))
        return LaurentPoly.from_sympy(quotient, gens, shift)

    def to_sympy(self, gens) -> Tuple[sympy.Expr, Exponent]:
        """
        Clear negative exponents; returns (polynomial expr, shift) with self = expr * u^shift.
        """
        shift = tuple(min((e[i] for e in self.terms), default=0) for i in range(self.arity))
        expr = sympy.Integer(0)
        for exponent, coeff in self.terms.items():
            term = to_sympy_rational(coeff)
            for g, e, s in zip(gens, exponent, shift):
                term *= g ** (e - s)
            expr += term
        return expr, shift

    @classmethod
    def from_sympy(cls, poly: Poly, gens, shift: Optional[Exponent] = None) -> "LaurentPoly":
        poly = Poly(poly, *gens, domain="QQ") if not isinstance(poly, Poly) else poly
        shift = shift or (0,) * len(gens)
        terms = {}
        for monom, coeff in poly.terms():
            terms[tuple(m + s for m, s in zip(monom, shift))] = to_fraction(sympy.Rational(coeff))
        return cls(terms, len(gens))

    def __str__(self):
        if not self.terms:
            return "0"
        names = VARIABLE_NAMES if self.arity <= len(VARIABLE_NAMES) else ["u%d" % i for i in range(self.arity)]
        pieces = []
        for exponent in sorted(self.terms, reverse=True):
            coeff = self.terms[exponent]
            factors = []
            for name, e in zip(names, exponent):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append("%s^%d" % (name, e) if e > 0 else "%s^(%d)" % (name, e))
            monomial = "*".join(factors)
            if not monomial:
                pieces.append(format_fraction(coeff))
            elif coeff == 1:
                pieces.append(monomial)
            elif coeff == -1:
                pieces.append("-" + monomial)
            else:
                pieces.append("%s*%s" % (format_fraction(coeff), monomial))
        return " + ".join(pieces).replace("+ -", "- ")

    __repr__ = __str__


# Lattice polygons


def _cross(o: Point2, a: Point2, b: Point2) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[Sequence[int]]) -> List[Point2]:
    """
    Strict vertices of the convex hull in counter-clockwise order (monotone chain).
    """
    pts = sorted(set((int(p[0]), int(p[1])) for p in points))
    if len(pts) <= 2:
        return pts
    lower: List[Point2] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Point2] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull if len(hull) > 1 else hull[:1]


def minkowski_sum(first: Sequence[Point2], second: Sequence[Point2]) -> List[Point2]:
    return convex_hull((a[0] + b[0], a[1] + b[1]) for a in first for b in second)


def transform_polygon(matrix: IntegerMatrix, polygon: Sequence[Point2]) -> List[Point2]:
    return convex_hull(matrix_vector(matrix, p) for p in polygon)


def _on_segment(p: Point2, a: Point2, b: Point2) -> bool:
    return (
        _cross(a, b, p) == 0
        and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def check_convex(vertices: Sequence[Sequence[int]]) -> List[Point2]:
    """
    Validate that the vertex list, in the given cyclic order, describes a convex
    polygon; returns its hull.
    """
    pts: List[Point2] = []
    for p in vertices:
        p = (int(p[0]), int(p[1]))
        if not pts or pts[-1] != p:
            pts.append(p)
    while len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    hull = convex_hull(pts)
    if len(hull) <= 2:
        if len(hull) == 2 and not all(_on_segment(p, hull[0], hull[1]) for p in pts):
            raise ValidationError("Polygon vertices are not convex")
        return hull
    ring = hull + hull[:1]
    for p in pts:
        if not any(_on_segment(p, a, b) for a, b in zip(ring, ring[1:])):
            raise ValidationError("Polygon vertex %r lies inside the hull; input is not convex" % (p,))
    positions = [pts.index(h) for h in hull]
    for order in (positions, positions[::-1]):
        start = order.index(min(order))
        rotated = order[start:] + order[:start]
        if rotated == sorted(rotated):
            return hull
    raise ValidationError("Polygon vertices are not listed in convex cyclic order")


def lattice_point_count(vertices: Sequence[Sequence[int]]) -> int:
    """
    Number of integer points in a convex lattice polygon, by a row scan with
    exact rational edge intersections.
    """
    hull = check_convex(vertices)
    if len(hull) == 1:
        return 1
    edges = list(zip(hull, hull[1:] + hull[:1])) if len(hull) > 2 else [(hull[0], hull[1])]
    ys = [p[1] for p in hull]
    count = 0
    for y in range(min(ys), max(ys) + 1):
        xs: List[Fraction] = []
        for (x1, y1), (x2, y2) in edges:
            if min(y1, y2) <= y <= max(y1, y2):
                if y1 == y2:
                    xs.extend([Fraction(x1), Fraction(x2)])
                else:
                    xs.append(Fraction(x1) + Fraction((y - y1) * (x2 - x1), y2 - y1))
        if xs:
            left, right = min(xs), max(xs)
            first = -((-left.numerator) // left.denominator)
            last = right.numerator // right.denominator
            if last >= first:
                count += last - first + 1
    return count


def polygon_area2(vertices: Sequence[Point2]) -> int:
    """
    Twice the signed area (shoelace).
    """
    hull = convex_hull(vertices)
    if len(hull) < 3:
        return 0
    return sum(a[0] * b[1] - b[0] * a[1] for a, b in zip(hull, hull[1:] + hull[:1]))


def boundary_point_count(vertices: Sequence[Point2]) -> int:
    hull = convex_hull(vertices)
    if len(hull) == 1:
        return 1
    if len(hull) == 2:
        return gcd(abs(hull[1][0] - hull[0][0]), abs(hull[1][1] - hull[0][1])) + 1
    edges = zip(hull, hull[1:] + hull[:1])
    return sum(gcd(abs(b[0] - a[0]), abs(b[1] - a[1])) for a, b in edges)


def polygon_contains(vertices: Sequence[Sequence[int]], point: Sequence[int]) -> bool:
    hull = convex_hull(vertices)
    p = (int(point[0]), int(point[1]))
    if len(hull) == 1:
        return hull[0] == p
    if len(hull) == 2:
        return _on_segment(p, hull[0], hull[1])
    return all(_cross(a, b, p) >= 0 for a, b in zip(hull, hull[1:] + hull[:1]))
