"""
Monomial automorphisms of algebraic tori and polynomial automorphisms of the
affine plane.

Conventions:

- A monomial automorphism acts on the Laurent ring by
  ``sigma(u_i) = coeffs[i] * u^(M e_i)`` (columns of ``M``), so
  ``sigma(u^a) = coeffs^a * u^(M a)``.
- ``compose(sigma, tau)`` is the ring map ``f -> sigma(tau(f))`` for the
  monomial family. On torus points this gives
  ``apply_to_point(compose(sigma, tau), p) == apply_to_point(tau, apply_to_point(sigma, p))``.
- A plane automorphism is the point map ``(z, w) -> (f(z, w), g(z, w))`` and
  ``compose(sigma, tau)`` is the point map ``sigma o tau``. A word
  ``[X1, ..., Xk]`` denotes ``X1 o ... o Xk``.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import sympy
from sympy import Poly

from oredyn.exact import (
    IntegerMatrix,
    LaurentPoly,
    as_matrix,
    determinant,
    format_fraction,
    identity_matrix,
    matrix_inverse,
    matrix_mul,
    matrix_vector,
    to_fraction,
    to_sympy_rational,
)
from oredyn.exceptions import InversionUnavailable, UnsupportedFamily, ValidationError
from oredyn.points import Point, TorsionPoint, lcm

logger = logging.getLogger(__name__)

Z, W = sympy.symbols("z w")


def plane_poly(expr) -> Poly:
    return Poly(expr, Z, W, domain="QQ")


def format_plane_poly(poly: Poly) -> str:
    return str(poly.as_expr()).replace("**", "^")


def substitute(h: Poly, first: Poly, second: Poly) -> Poly:
    """
    h(first, second) for plane polynomials.
    """
    result = plane_poly(0)
    first_powers = {0: plane_poly(1)}
    second_powers = {0: plane_poly(1)}
    for (i, j), coeff in h.terms():
        if i not in first_powers:
            first_powers[i] = first**i
        if j not in second_powers:
            second_powers[j] = second**j
        result += first_powers[i] * second_powers[j] * coeff
    return result


# Monomial family


@dataclass(frozen=True)
class MonomialAutomorphism:
    matrix: IntegerMatrix
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        matrix = as_matrix(self.matrix)
        coeffs = tuple(to_fraction(c) for c in self.coeffs)
        if len(coeffs) != len(matrix):
            raise ValidationError("Expected %d coefficients, got %d" % (len(matrix), len(coeffs)))
        det = determinant(matrix)
        if abs(det) != 1:
            raise ValidationError("Matrix determinant is %d; a monomial automorphism needs |det| = 1" % det)
        if any(c == 0 for c in coeffs):
            raise ValidationError("Monomial coefficients must be nonzero")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_matrix(cls, matrix, coeffs: Optional[Sequence] = None) -> "MonomialAutomorphism":
        matrix = as_matrix(matrix)
        return cls(matrix, tuple(coeffs) if coeffs is not None else (Fraction(1),) * len(matrix))

    @property
    def arity(self) -> int:
        return len(self.matrix)

    @property
    def family(self) -> str:
        return "monomial"

    @property
    def has_trivial_coeffs(self) -> bool:
        return all(c == 1 for c in self.coeffs)

    def scalar(self, exponent: Sequence[int]) -> Fraction:
        """
        The coefficient lambda^a picked up by u^a.
        """
        result = Fraction(1)
        for c, a in zip(self.coeffs, exponent):
            result *= c**a
        return result

    def pullback(self, f: LaurentPoly) -> LaurentPoly:
        """
        sigma(f), the ring automorphism applied to a Laurent polynomial.
        """
        terms = {}
        for exponent, coeff in f.terms.items():
            image = matrix_vector(self.matrix, exponent)
            terms[image] = terms.get(image, Fraction(0)) + coeff * self.scalar(exponent)
        return LaurentPoly(terms, f.arity)

    def to_json(self) -> dict:
        return {
            "family": "monomial",
            "matrix": [list(row) for row in self.matrix],
            "coeffs": [format_fraction(c) for c in self.coeffs],
        }

    def __str__(self):
        images = []
        for i in range(self.arity):
            images.append(str(self.pullback(LaurentPoly.variable(i, self.arity))))
        return "sigma = (%s)" % ", ".join(images)


def monomial_identity(n: int) -> MonomialAutomorphism:
    return MonomialAutomorphism.from_matrix(identity_matrix(n))


def _compose_monomial(sigma: MonomialAutomorphism, tau: MonomialAutomorphism) -> MonomialAutomorphism:
    matrix = matrix_mul(sigma.matrix, tau.matrix)
    coeffs = []
    for i in range(tau.arity):
        column = [tau.matrix[j][i] for j in range(tau.arity)]
        coeffs.append(tau.coeffs[i] * sigma.scalar(column))
    return MonomialAutomorphism(matrix, tuple(coeffs))


def _inverse_monomial(sigma: MonomialAutomorphism) -> MonomialAutomorphism:
    inverse = matrix_inverse(sigma.matrix)
    coeffs = []
    for i in range(sigma.arity):
        column = [inverse[j][i] for j in range(sigma.arity)]
        coeffs.append(1 / sigma.scalar(column))
    return MonomialAutomorphism(inverse, tuple(coeffs))


def _coefficient_residue(coeff: Fraction, order: int) -> Optional[int]:
    if coeff == 1:
        return 0
    if coeff == -1 and order % 2 == 0:
        return order // 2
    return None


def apply_to_point(sigma: MonomialAutomorphism, point: Point) -> Point:
    """
    The point q with u_i(q) = sigma(u_i)(p).
    """
    if isinstance(point, TorsionPoint):
        if point.arity != sigma.arity:
            raise ValidationError("Point arity %d does not match automorphism arity %d" % (point.arity, sigma.arity))
        order = point.order
        if any(c == -1 for c in sigma.coeffs):
            order = lcm(order, 2)
        residues = point.lift(order)
        image = []
        for i in range(sigma.arity):
            shift = _coefficient_residue(sigma.coeffs[i], order)
            if shift is None:
                raise ValidationError(
                    "Coefficient %s is not an exactly representable root of unity" % format_fraction(sigma.coeffs[i])
                )
            image.append(sum(sigma.matrix[j][i] * residues[j] for j in range(sigma.arity)) + shift)
        return TorsionPoint(order, tuple(image))

    coords = tuple(to_fraction(c) for c in point)
    if len(coords) != sigma.arity:
        raise ValidationError("Point arity %d does not match automorphism arity %d" % (len(coords), sigma.arity))
    if any(c == 0 for c in coords):
        raise ValidationError("Torus points must have nonzero coordinates")
    image = []
    for i in range(sigma.arity):
        value = sigma.coeffs[i]
        for j in range(sigma.arity):
            value *= coords[j] ** sigma.matrix[j][i]
        image.append(value)
    return tuple(image)


# Plane family


@dataclass(frozen=True)
class ElementaryFactor:
    """
    (z, w) -> (alpha*z + p(w), beta*w + gamma); ``p`` lists coefficients by ascending degree.
    """

    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    p: Tuple[Fraction, ...]

    def __post_init__(self):
        alpha, beta = to_fraction(self.alpha), to_fraction(self.beta)
        if alpha == 0 or beta == 0:
            raise ValidationError("Elementary factor needs nonzero alpha and beta")
        p = [to_fraction(c) for c in self.p]
        while p and p[-1] == 0:
            p.pop()
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "gamma", to_fraction(self.gamma))
        object.__setattr__(self, "p", tuple(p))

    @property
    def degree(self) -> int:
        return max(len(self.p) - 1, 1)

    def pair(self) -> Tuple[Poly, Poly]:
        p_expr = sum(to_sympy_rational(c) * W**i for i, c in enumerate(self.p))
        return (
            plane_poly(to_sympy_rational(self.alpha) * Z + p_expr),
            plane_poly(to_sympy_rational(self.beta) * W + to_sympy_rational(self.gamma)),
        )

    def inverse(self) -> "ElementaryFactor":
        # w = (w' - gamma)/beta, z = (z' - p(w))/alpha
        base = (W - to_sympy_rational(self.gamma)) / to_sympy_rational(self.beta)
        shifted = Poly(sum(to_sympy_rational(c) * base**i for i, c in enumerate(self.p)), W, domain="QQ")
        coeffs = [-to_fraction(sympy.Rational(c)) / self.alpha for c in reversed(shifted.all_coeffs())]
        return ElementaryFactor(1 / self.alpha, 1 / self.beta, -self.gamma / self.beta, tuple(coeffs))

    def to_json(self) -> dict:
        return {
            "type": "elementary",
            "alpha": format_fraction(self.alpha),
            "beta": format_fraction(self.beta),
            "gamma": format_fraction(self.gamma),
            "p": [format_fraction(c) for c in self.p],
        }


@dataclass(frozen=True)
class AffineFactor:
    """
    (z, w) -> linear * (z, w) + translation.
    """

    linear: Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]
    translation: Tuple[Fraction, Fraction]

    def __post_init__(self):
        linear = tuple(tuple(to_fraction(x) for x in row) for row in self.linear)
        if len(linear) != 2 or any(len(row) != 2 for row in linear):
            raise ValidationError("Affine factor needs a 2x2 linear part")
        if linear[0][0] * linear[1][1] - linear[0][1] * linear[1][0] == 0:
            raise ValidationError("Affine factor linear part is singular")
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "translation", tuple(to_fraction(x) for x in self.translation))

    @property
    def degree(self) -> int:
        return 1

    @property
    def is_identity(self) -> bool:
        return self.linear == ((1, 0), (0, 1)) and self.translation == (0, 0)

    @property
    def is_triangular(self) -> bool:
        return self.linear[1][0] == 0

    def pair(self) -> Tuple[Poly, Poly]:
        (a, b), (c, d) = [[to_sympy_rational(x) for x in row] for row in self.linear]
        e, f = [to_sympy_rational(x) for x in self.translation]
        return plane_poly(a * Z + b * W + e), plane_poly(c * Z + d * W + f)

    def inverse(self) -> "AffineFactor":
        (a, b), (c, d) = self.linear
        det = a * d - b * c
        inv = ((d / det, -b / det), (-c / det, a / det))
        e, f = self.translation
        return AffineFactor(inv, (-(inv[0][0] * e + inv[0][1] * f), -(inv[1][0] * e + inv[1][1] * f)))

    def to_json(self) -> dict:
        return {
            "type": "affine",
            "linear": [[format_fraction(x) for x in row] for row in self.linear],
            "translation": [format_fraction(x) for x in self.translation],
        }


Factor = Union[ElementaryFactor, AffineFactor]

SWAP = AffineFactor(((0, 1), (1, 0)), (0, 0))


def compose_pairs(outer: Tuple[Poly, Poly], inner: Tuple[Poly, Poly]) -> Tuple[Poly, Poly]:
    return substitute(outer[0], *inner), substitute(outer[1], *inner)


def pair_degree(pair: Tuple[Poly, Poly]) -> int:
    return max(pair[0].total_degree(), pair[1].total_degree())


def _compose_word(word: Sequence[Factor]) -> Tuple[Poly, Poly]:
    pair = (plane_poly(Z), plane_poly(W))
    for factor in reversed(word):
        pair = compose_pairs(factor.pair(), pair)
    return pair


def _affine_from_pair(pair: Tuple[Poly, Poly]) -> AffineFactor:
    f, g = pair
    linear = (
        (f.coeff_monomial(Z), f.coeff_monomial(W)),
        (g.coeff_monomial(Z), g.coeff_monomial(W)),
    )
    return AffineFactor(
        tuple(tuple(to_fraction(sympy.Rational(x)) for x in row) for row in linear),
        (to_fraction(sympy.Rational(f.coeff_monomial(1))), to_fraction(sympy.Rational(g.coeff_monomial(1)))),
    )


def as_single_factor(pair: Tuple[Poly, Poly]) -> Optional[Factor]:
    """
    Recognize a pair as one affine or one elementary factor.
    """
    f, g = pair
    if pair_degree(pair) <= 1:
        try:
            return _affine_from_pair(pair)
        except ValidationError:
            return None
    if g.total_degree() != 1 or g.degree(Z) > 0:
        return None
    if f.degree(Z) != 1 or any(i == 1 and j > 0 for (i, j), _ in f.terms()):
        return None
    alpha = f.coeff_monomial(Z)
    rest = Poly((f - plane_poly(alpha * Z)).as_expr(), W, domain="QQ")
    p = [to_fraction(sympy.Rational(c)) for c in reversed(rest.all_coeffs())]
    return ElementaryFactor(
        to_fraction(sympy.Rational(alpha)),
        to_fraction(sympy.Rational(g.coeff_monomial(W))),
        to_fraction(sympy.Rational(g.coeff_monomial(1))),
        tuple(p),
    )


def reduce_word(word: Sequence[Factor]) -> List[Factor]:
    """
    Merge adjacent factors whose composite is again a single factor and drop
    identities, until the word alternates genuinely affine and non-affine
    elementary factors.
    """
    word = [_normalize_factor(f) for f in word]
    changed = True
    while changed:
        changed = False
        out: List[Factor] = []
        for factor in word:
            if isinstance(factor, AffineFactor) and factor.is_identity:
                changed = True
                continue
            if out:
                merged = as_single_factor(compose_pairs(out[-1].pair(), factor.pair()))
                if merged is not None:
                    out[-1] = _normalize_factor(merged)
                    changed = True
                    continue
            out.append(factor)
        word = out
    return word


def _normalize_factor(factor: Factor) -> Factor:
    if isinstance(factor, ElementaryFactor) and len(factor.p) <= 2:
        return _affine_from_pair(factor.pair())
    return factor


@dataclass(frozen=True)
class PlaneAutomorphism:
    word: Tuple[Factor, ...]
    pair: Tuple[Poly, Poly] = field(compare=False)

    @classmethod
    def from_word(cls, word: Sequence[Factor]) -> "PlaneAutomorphism":
        reduced = tuple(reduce_word(word))
        return cls(reduced, _compose_word(reduced))

    @classmethod
    def from_pair(cls, f, g) -> "PlaneAutomorphism":
        return jung_van_der_kulk((plane_poly(f), plane_poly(g)))

    @property
    def family(self) -> str:
        return "plane"

    @property
    def arity(self) -> int:
        return 2

    @property
    def degree(self) -> int:
        return pair_degree(self.pair)

    def pullback(self, h: Poly) -> Poly:
        """
        h o sigma.
        """
        return substitute(h, *self.pair)

    def __call__(self, point: Sequence) -> Tuple[Fraction, Fraction]:
        z, w = (to_sympy_rational(to_fraction(c)) for c in point)
        return tuple(to_fraction(sympy.Rational(p.eval({Z: z, W: w}))) for p in self.pair)

    def __eq__(self, other):
        if not isinstance(other, PlaneAutomorphism):
            return NotImplemented
        return self.pair[0] == other.pair[0] and self.pair[1] == other.pair[1]

    def __hash__(self):
        return hash((str(self.pair[0].as_expr()), str(self.pair[1].as_expr())))

    def to_json(self) -> dict:
        return {
            "family": "plane",
            "pair": [format_plane_poly(p) for p in self.pair],
            "word": [factor.to_json() for factor in self.word],
        }

    def __str__(self):
        return "sigma(z, w) = (%s, %s)" % tuple(format_plane_poly(p) for p in self.pair)


def plane_identity() -> PlaneAutomorphism:
    return PlaneAutomorphism.from_word([])


def henon(p_coeffs: Sequence, a=1) -> PlaneAutomorphism:
    """
    The Henon automorphism (z, w) -> (p(z) - a*w, z).
    """
    p_expr = sum(to_sympy_rational(to_fraction(c)) * Z**i for i, c in enumerate(p_coeffs))
    return PlaneAutomorphism.from_pair(p_expr - to_sympy_rational(to_fraction(a)) * W, Z)


def jacobian(pair: Tuple[Poly, Poly]) -> Poly:
    f, g = pair
    return f.diff(Z) * g.diff(W) - f.diff(W) * g.diff(Z)


def _top_form(poly: Poly) -> Poly:
    degree = poly.total_degree()
    return plane_poly(sum(coeff * Z**i * W**j for (i, j), coeff in poly.terms() if i + j == degree))


def jung_van_der_kulk(pair: Tuple[Poly, Poly]) -> PlaneAutomorphism:
    """
    Decompose a plane automorphism into affine and elementary factors by
    repeatedly cancelling the top-degree form of the higher-degree coordinate.
    """
    f, g = plane_poly(pair[0].as_expr()), plane_poly(pair[1].as_expr())
    jac = jacobian((f, g))
    if jac.total_degree() > 0 or jac.is_zero:
        raise ValidationError(
            "Not a polynomial automorphism: Jacobian determinant %s is not a nonzero constant" % jac.as_expr()
        )

    word: List[Factor] = []
    while max(f.total_degree(), g.total_degree()) > 1:
        if f.total_degree() < g.total_degree():
            word.append(SWAP)
            f, g = g, f
        df, dg = f.total_degree(), g.total_degree()
        if dg < 1 or df % dg:
            raise ValidationError(
                "Not a polynomial automorphism: degree reduction stalls at degrees (%d, %d)" % (df, dg)
            )
        k = df // dg
        top_f, top_g = _top_form(f), _top_form(g)
        power = top_g**k
        ratio = top_f.LC() / power.LC()
        if top_f != power * ratio:
            raise ValidationError(
                "Not a polynomial automorphism: leading forms %s and (%s)^%d are not proportional"
                % (top_f.as_expr(), top_g.as_expr(), k)
            )
        coeff = to_fraction(sympy.Rational(ratio))
        word.append(ElementaryFactor(1, 1, 0, (0,) * k + (coeff,)))
        f = f - g**k * ratio
        logger.debug("Jung-van der Kulk step: removed %s * g^%d", coeff, k)

    word.append(_affine_from_pair((f, g)))
    result = PlaneAutomorphism.from_word(word)
    if result.pair[0] != plane_poly(pair[0].as_expr()) or result.pair[1] != plane_poly(pair[1].as_expr()):
        raise ValidationError("Decomposition does not recompose to the input pair")
    return result


# Shared operations


Automorphism = Union[MonomialAutomorphism, PlaneAutomorphism]


def compose(sigma: Automorphism, tau: Automorphism) -> Automorphism:
    if isinstance(sigma, MonomialAutomorphism) and isinstance(tau, MonomialAutomorphism):
        if sigma.arity != tau.arity:
            raise ValidationError("Arity mismatch: %d != %d" % (sigma.arity, tau.arity))
        return _compose_monomial(sigma, tau)
    if isinstance(sigma, PlaneAutomorphism) and isinstance(tau, PlaneAutomorphism):
        return PlaneAutomorphism.from_word(list(sigma.word) + list(tau.word))
    raise ValidationError("Cannot compose automorphisms of different families")


def inverse(sigma: Automorphism) -> Automorphism:
    if isinstance(sigma, MonomialAutomorphism):
        return _inverse_monomial(sigma)
    if isinstance(sigma, PlaneAutomorphism):
        if not sigma.word and sigma.pair != (plane_poly(Z), plane_poly(W)):
            raise InversionUnavailable("No word form stored for %s" % sigma)
        return PlaneAutomorphism.from_word([factor.inverse() for factor in reversed(sigma.word)])
    raise UnsupportedFamily("Unsupported automorphism %r" % (sigma,))


def identity_like(sigma: Automorphism) -> Automorphism:
    if isinstance(sigma, MonomialAutomorphism):
        return monomial_identity(sigma.arity)
    return plane_identity()


def iterate(sigma: Automorphism, n: int) -> Automorphism:
    if n < 0:
        return iterate(inverse(sigma), -n)
    result = identity_like(sigma)
    base = sigma
    while n:
        if n & 1:
            result = compose(result, base)
        base = compose(base, base)
        n >>= 1
    return result


def conjugate(sigma: Automorphism, theta: Automorphism) -> Automorphism:
    """
    theta o sigma o theta^-1.
    """
    return compose(compose(theta, sigma), inverse(theta))


# Classification of plane automorphisms

ELEMENTARY_TYPE = "elementary"
HENON_TYPE = "henon"


@dataclass(frozen=True)
class PlaneClassification:
    """
    ``sigma == conjugator o core o conjugator^-1`` with ``core`` cyclically reduced.

    ``elementary`` is the core written as (alpha*z + p(w), beta*w + gamma)
    when such a rational form exists.
    """

    kind: str
    core: Tuple[Factor, ...]
    conjugator: PlaneAutomorphism
    elementary: Optional[ElementaryFactor] = None
    degrees: Tuple[int, ...] = ()

    @property
    def is_henon(self) -> bool:
        return self.kind == HENON_TYPE

    def core_automorphism(self) -> PlaneAutomorphism:
        return PlaneAutomorphism.from_word(self.core)

    def to_json(self) -> dict:
        return {
            "type": self.kind,
            "core": [factor.to_json() for factor in self.core],
            "conjugator": self.conjugator.to_json(),
            "elementary_form": self.elementary.to_json() if self.elementary else None,
            "degrees": list(self.degrees),
        }


def _as_elementary(factor: Factor) -> Optional[ElementaryFactor]:
    if isinstance(factor, ElementaryFactor):
        return factor
    if factor.is_triangular:
        (a, b), (_, d) = factor.linear
        e, f = factor.translation
        return ElementaryFactor(a, d, f, (e, b))
    return None


def _rational_left_eigenvector(linear) -> Optional[Tuple[Fraction, Fraction]]:
    matrix = sympy.Matrix([[to_sympy_rational(x) for x in row] for row in linear]).T
    for eigenvalue, _, vectors in matrix.eigenvects():
        if eigenvalue.is_rational:
            vector = vectors[0]
            return to_fraction(sympy.Rational(vector[0])), to_fraction(sympy.Rational(vector[1]))
    return None


def _triangularize(factor: AffineFactor) -> Optional[Tuple[AffineFactor, ElementaryFactor]]:
    """
    A linear change of coordinates P with P o factor o P^-1 triangular; returns (P^-1, elementary core).
    """
    eigenvector = _rational_left_eigenvector(factor.linear)
    if eigenvector is None:
        return None
    l1, l2 = eigenvector
    first = (Fraction(1), Fraction(0)) if l2 != 0 else (Fraction(0), Fraction(1))
    change = AffineFactor((first, (l1, l2)), (0, 0))
    core = as_single_factor(compose_pairs(compose_pairs(change.pair(), factor.pair()), change.inverse().pair()))
    elementary = _as_elementary(core) if core is not None else None
    if elementary is None:
        return None
    return change.inverse(), elementary


def classify_plane(sigma: PlaneAutomorphism) -> PlaneClassification:
    """
    Cyclically reduce the word; a reduced word of length at least two is of
    Henon type, anything else is conjugate to a single factor.
    """
    word = list(sigma.word)
    conjugator: List[Factor] = []
    while len(word) >= 2:
        merged = as_single_factor(compose_pairs(word[-1].pair(), word[0].pair()))
        if merged is None:
            break
        conjugator.append(word[0])
        word = reduce_word(word[1:-1] + [merged])

    theta = PlaneAutomorphism.from_word(conjugator)
    if len(word) >= 2:
        degrees = tuple(f.degree for f in word if isinstance(f, ElementaryFactor))
        return PlaneClassification(HENON_TYPE, tuple(word), theta, None, degrees)

    if not word:
        identity = ElementaryFactor(1, 1, 0, ())
        return PlaneClassification(ELEMENTARY_TYPE, (), theta, identity, (1,))

    (factor,) = word
    elementary = _as_elementary(factor)
    if elementary is None and isinstance(factor, AffineFactor):
        triangular = _triangularize(factor)
        if triangular is not None:
            change, elementary = triangular
            theta = PlaneAutomorphism.from_word(conjugator + [change])
            factor = _normalize_factor(elementary)
    return PlaneClassification(ELEMENTARY_TYPE, (factor,), theta, elementary, (factor.degree,))


def fibre_correction(elementary: ElementaryFactor, from_degree: int = 0) -> Optional[Poly]:
    """
    h(w) of degree at most deg p + 1 such that ``h(beta*w + gamma) - alpha*h(w) - p(w)``
    has no terms of degree ``from_degree`` or more, or None when there is none.

    With ``from_degree == 0`` the function z - h(w) is multiplied by alpha under
    the elementary map; with ``from_degree == 2`` the change z -> z - h(w)
    conjugates it to an affine map.
    """
    unknowns = sympy.symbols("h0:%d" % (len(elementary.p) + 2))
    h = sum(c * W**i for i, c in enumerate(unknowns))
    alpha, beta, gamma = (to_sympy_rational(x) for x in (elementary.alpha, elementary.beta, elementary.gamma))
    p = sum(to_sympy_rational(c) * W**i for i, c in enumerate(elementary.p))
    residual = Poly(sympy.expand(h.subs(W, beta * W + gamma) - alpha * h - p), W)
    equations = [c for k, c in enumerate(reversed(residual.all_coeffs())) if k >= from_degree and c != 0]
    if not equations:
        return plane_poly(0)
    solutions = sympy.linsolve(equations, *unknowns)
    if solutions.is_empty:
        return None
    (solution,) = solutions
    free = {symbol: 0 for symbol in unknowns}
    return plane_poly(sum(value.subs(free) * W**i for i, value in enumerate(solution)))


def is_affine_conjugate(elementary: ElementaryFactor) -> bool:
    """
    Whether a triangular change z -> z - h(w) turns the elementary map into an affine one.
    """
    return len(elementary.p) <= 2 or fibre_correction(elementary, 2) is not None
