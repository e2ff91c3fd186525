"""
Skew-Laurent and skew-polynomial rings over a Laurent polynomial ring S.

``T = S[t, t^-1; sigma]`` and ``U = S[t; sigma]`` with ``t s = sigma(s) t``.
Elements are written with coefficients on the left.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from oredyn.automorphisms import MonomialAutomorphism, apply_to_point, inverse, iterate
from oredyn.conf import CEILINGS, app_settings
from oredyn.exact import (
    Exponent,
    LaurentPoly,
    Point2,
    check_convex,
    format_fraction,
    lattice_point_count,
    matrix_power,
    matrix_vector,
    minkowski_sum,
    normalize_sign,
    polygon_contains,
    primitive_vector,
    to_fraction,
    transform_polygon,
)
from oredyn.exceptions import NotInvariant, ResourceCapExceeded, UnsupportedShape, ValidationError

logger = logging.getLogger(__name__)

T_RING = "T"
U_RING = "U"
RINGS = (T_RING, U_RING)


class OreElement:
    """
    A finite sum ``sum_n s_n t^n`` with Laurent polynomial coefficients.
    """

    __slots__ = ("graded_terms", "arity")

    def __init__(self, graded_terms: Optional[Dict[int, LaurentPoly]] = None, arity: int = 2):
        cleaned = {}
        for degree, coeff in (graded_terms or {}).items():
            if not isinstance(coeff, LaurentPoly):
                coeff = LaurentPoly.constant(coeff, arity)
            if coeff.arity != arity:
                raise ValidationError("Arity mismatch: %d != %d" % (coeff.arity, arity))
            if not coeff.is_zero():
                cleaned[int(degree)] = coeff
        self.graded_terms = cleaned
        self.arity = arity

    @classmethod
    def from_coefficient(cls, coeff: LaurentPoly, degree: int = 0) -> "OreElement":
        return cls({degree: coeff}, coeff.arity)

    def is_zero(self) -> bool:
        return not self.graded_terms

    def degrees(self) -> List[int]:
        return sorted(self.graded_terms)

    def coefficient(self, degree: int) -> LaurentPoly:
        return self.graded_terms.get(degree, LaurentPoly({}, self.arity))

    def in_ring(self, ring: str) -> bool:
        return ring == T_RING or all(degree >= 0 for degree in self.graded_terms)

    def __add__(self, other):
        return ore_add(self, other)

    def __neg__(self):
        return ore_neg(self)

    def __sub__(self, other):
        return ore_add(self, ore_neg(other))

    def __eq__(self, other):
        if not isinstance(other, OreElement):
            return NotImplemented
        return self.arity == other.arity and self.graded_terms == other.graded_terms

    def __hash__(self):
        return hash((self.arity, frozenset(self.graded_terms.items())))

    def __str__(self):
        if not self.graded_terms:
            return "0"
        pieces = []
        for degree in sorted(self.graded_terms, reverse=True):
            coeff = str(self.graded_terms[degree])
            if degree == 0:
                pieces.append(coeff)
                continue
            power = "t" if degree == 1 else "t^%d" % degree if degree > 0 else "t^(%d)" % degree
            pieces.append(power if coeff == "1" else "(%s)*%s" % (coeff, power))
        return " + ".join(pieces)

    __repr__ = __str__


def _check_arity(a: OreElement, b: OreElement):
    if a.arity != b.arity:
        raise ValidationError("Arity mismatch: %d != %d" % (a.arity, b.arity))


def ore_add(a: OreElement, b: OreElement) -> OreElement:
    _check_arity(a, b)
    terms = dict(a.graded_terms)
    for degree, coeff in b.graded_terms.items():
        terms[degree] = terms[degree] + coeff if degree in terms else coeff
    return OreElement(terms, a.arity)


def ore_neg(a: OreElement) -> OreElement:
    return OreElement({degree: -coeff for degree, coeff in a.graded_terms.items()}, a.arity)


def t_power(n: int, arity: int = 2) -> OreElement:
    return OreElement({n: LaurentPoly.constant(1, arity)}, arity)


def ore_inverse_of_t(arity: int = 2) -> OreElement:
    return t_power(-1, arity)


def ore_mul(a: OreElement, b: OreElement, sigma: MonomialAutomorphism) -> OreElement:
    """
    ``(s t^m)(r t^n) = s sigma^m(r) t^(m+n)``, extended bilinearly.
    """
    _check_arity(a, b)
    if sigma.arity != a.arity:
        raise ValidationError("Arity mismatch: %d != %d" % (sigma.arity, a.arity))
    powers: Dict[int, MonomialAutomorphism] = {}
    terms: Dict[int, LaurentPoly] = {}
    for m, s in a.graded_terms.items():
        if m not in powers:
            powers[m] = iterate(sigma, m)
        for n, r in b.graded_terms.items():
            product = s * powers[m].pullback(r)
            terms[m + n] = terms[m + n] + product if m + n in terms else product
    return OreElement(terms, a.arity)


# Homogeneous ideals


@dataclass(frozen=True)
class SubtorusComponent:
    """
    The codimension-one subtorus ``{u^a = c}`` with ``a`` primitive.
    """

    exponent: Exponent
    value: Fraction

    shape = "subtorus"

    def __post_init__(self):
        exponent = tuple(int(e) for e in self.exponent)
        value = to_fraction(self.value)
        if not any(exponent):
            raise UnsupportedShape("A subtorus component needs a nonzero exponent")
        if value == 0:
            raise ValidationError("Subtorus value must be nonzero")
        if primitive_vector(exponent) != normalize_sign(exponent):
            raise UnsupportedShape(
                "u^%s = %s is reducible; list its components separately" % (list(exponent), format_fraction(value))
            )
        if normalize_sign(exponent) != exponent:
            exponent, value = tuple(-e for e in exponent), 1 / value
        object.__setattr__(self, "exponent", exponent)
        object.__setattr__(self, "value", value)

    @property
    def arity(self) -> int:
        return len(self.exponent)

    @property
    def generators(self) -> List[LaurentPoly]:
        return [LaurentPoly.monomial(self.exponent) - self.value]

    def contains(self, f: LaurentPoly) -> bool:
        return self.generators[0].divide(f) is not None

    def image(self, sigma: MonomialAutomorphism) -> "SubtorusComponent":
        # sigma(u^a - c) = s u^(Ma) - c, a unit multiple of u^(Ma) - c/s
        return SubtorusComponent(matrix_vector(sigma.matrix, self.exponent), self.value / sigma.scalar(self.exponent))

    def to_json(self) -> dict:
        return {"shape": self.shape, "exponent": list(self.exponent), "value": format_fraction(self.value)}

    def __str__(self):
        return "%s = %s" % (LaurentPoly.monomial(self.exponent), format_fraction(self.value))


@dataclass(frozen=True)
class PointComponent:
    coords: Tuple[Fraction, ...]

    shape = "point"

    def __post_init__(self):
        coords = tuple(to_fraction(c) for c in self.coords)
        if any(c == 0 for c in coords):
            raise ValidationError("Torus points must have nonzero coordinates")
        object.__setattr__(self, "coords", coords)

    @property
    def arity(self) -> int:
        return len(self.coords)

    @property
    def generators(self) -> List[LaurentPoly]:
        n = self.arity
        return [LaurentPoly.variable(i, n) - c for i, c in enumerate(self.coords)]

    def contains(self, f: LaurentPoly) -> bool:
        return f.evaluate(self.coords) == 0

    def image(self, sigma: MonomialAutomorphism) -> "PointComponent":
        # sigma(I_p) is the ideal of the preimage of p under the point map
        return PointComponent(apply_to_point(inverse(sigma), self.coords))

    def to_json(self) -> dict:
        return {"shape": self.shape, "coords": [format_fraction(c) for c in self.coords]}

    def __str__(self):
        return "(%s)" % ", ".join(format_fraction(c) for c in self.coords)


Component = Union[SubtorusComponent, PointComponent]


def component_from_json(data: dict) -> Component:
    shape = data.get("shape")
    if shape == SubtorusComponent.shape:
        return SubtorusComponent(tuple(data["exponent"]), data.get("value", 1))
    if shape == PointComponent.shape:
        return PointComponent(tuple(data["coords"]))
    raise UnsupportedShape("Unsupported component shape %r" % (shape,))


@dataclass
class InvariantIdealSpec:
    """
    The radical ideal of a finite union of components, together with the
    permutation of the components induced by sigma.
    """

    sigma: MonomialAutomorphism
    components: List[Component]
    sigma_action: Optional[Dict[int, int]] = field(default=None)

    def __post_init__(self):
        if not self.components:
            raise ValidationError("An ideal spec needs at least one component")
        self.components = list(self.components)
        if len(set(self.components)) != len(self.components):
            raise ValidationError("Components must be distinct")
        for component in self.components:
            if component.arity != self.sigma.arity:
                raise ValidationError("Arity mismatch: %d != %d" % (component.arity, self.sigma.arity))

    @property
    def generators(self) -> List[LaurentPoly]:
        if len(self.components) == 1:
            return self.components[0].generators
        if all(c.shape == SubtorusComponent.shape for c in self.components):
            product = LaurentPoly.constant(1, self.sigma.arity)
            for component in self.components:
                product = product * component.generators[0]
            return [product]
        # intersections of point ideals are described by their components
        return [g for component in self.components for g in component.generators]

    def contains(self, f: LaurentPoly) -> bool:
        return all(component.contains(f) for component in self.components)

    def permutation(self) -> Dict[int, int]:
        if self.sigma_action is None:
            index = {component: i for i, component in enumerate(self.components)}
            action = {}
            for i, component in enumerate(self.components):
                image = component.image(self.sigma)
                if image not in index:
                    raise NotInvariant("sigma maps component %s to %s, which is not listed" % (component, image))
                action[i] = index[image]
            self.sigma_action = action
        return self.sigma_action

    def is_invariant(self) -> bool:
        try:
            self.permutation()
        except NotInvariant:
            return False
        return True

    def cycles(self) -> List[List[int]]:
        action = self.permutation()
        seen = set()
        cycles = []
        for start in range(len(self.components)):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            current = action[start]
            while current != start:
                cycle.append(current)
                seen.add(current)
                current = action[current]
            cycles.append(cycle)
        return cycles

    def to_json(self) -> dict:
        return {
            "components": [component.to_json() for component in self.components],
            "generators": [str(g) for g in self.generators],
        }


class GradedIdeal:
    """
    Membership handle for a graded ideal of T or U.

    With ``augmented`` set the ideal is ``J + St + St^2 + ...`` in U, otherwise
    ``sum_n I t^n`` over the degrees of the ring.
    """

    def __init__(self, spec: InvariantIdealSpec, ring: str, augmented: bool = False):
        self.spec = spec
        self.ring = ring
        self.augmented = augmented

    def contains(self, element: OreElement) -> bool:
        if not element.in_ring(self.ring):
            raise ValidationError("%s is not an element of %s" % (element, self.ring))
        for degree, coeff in element.graded_terms.items():
            if self.augmented and degree > 0:
                continue
            if not self.spec.contains(coeff):
                return False
        return True

    __contains__ = contains

    def to_json(self) -> dict:
        return {"ring": self.ring, "augmented": self.augmented, "ideal": self.spec.to_json()}


def homogeneous_ideal(spec: InvariantIdealSpec, ring: str = T_RING, augmented: bool = False) -> GradedIdeal:
    if ring not in RINGS:
        raise ValidationError("Unknown ring %r" % (ring,))
    if augmented:
        if ring != U_RING:
            raise ValidationError("The augmented family lives in U only")
        if len(spec.components) != 1:
            raise UnsupportedShape("The augmented family needs a prime J, given by a single component")
        return GradedIdeal(spec, ring, augmented=True)
    spec.permutation()
    return GradedIdeal(spec, ring)


@dataclass(frozen=True)
class PrimeCertificate:
    is_prime: bool
    cycles: List[List[int]]

    @property
    def cycle(self) -> Optional[List[int]]:
        return self.cycles[0] if self.is_prime else None

    def __bool__(self):
        return self.is_prime

    def to_json(self) -> dict:
        return {"prime": self.is_prime, "cycles": self.cycles}


def is_homogeneous_prime(spec: InvariantIdealSpec) -> PrimeCertificate:
    for component in spec.components:
        if component.shape not in (SubtorusComponent.shape, PointComponent.shape):
            raise UnsupportedShape("Unsupported component shape %r" % (component.shape,))
    cycles = spec.cycles()
    logger.debug("Component cycles under sigma: %s", cycles)
    return PrimeCertificate(len(cycles) == 1, cycles)


# Growth profiles

POLYNOMIAL = "polynomial"
EXPONENTIAL = "exponential"

# Thresholds of the fit, recorded in every profile
EXPONENTIAL_RATIO = Fraction(5, 4)
DOUBLING_SLACK = Fraction(5, 4)
MAX_POLYNOMIAL_DEGREE = 3
DIFFERENCE_BAND = 2


@dataclass(frozen=True)
class GKProfile:
    dims: List[int]
    classification: str
    fitted: Fraction
    generator_polytope: List[Point2]
    residuals: Dict[str, list]

    @property
    def fitted_degree(self) -> Optional[int]:
        return int(self.fitted) if self.classification == POLYNOMIAL else None

    @property
    def fitted_base(self) -> Optional[Fraction]:
        return self.fitted if self.classification == EXPONENTIAL else None

    def to_json(self) -> dict:
        fit = {"kind": self.classification}
        if self.classification == POLYNOMIAL:
            fit["degree"] = self.fitted_degree
        else:
            fit["base_lower_bound"] = format_fraction(self.fitted)
        return {
            "dims": list(self.dims),
            "classification": fit,
            "generator_polytope": [list(p) for p in self.generator_polytope],
            "residuals": self.residuals,
            "thresholds": {
                "exponential_ratio": format_fraction(EXPONENTIAL_RATIO),
                "doubling_slack": format_fraction(DOUBLING_SLACK),
                "max_polynomial_degree": MAX_POLYNOMIAL_DEGREE,
                "difference_band": DIFFERENCE_BAND,
            },
        }


def _differences(values: Sequence[int], order: int) -> List[int]:
    values = list(values)
    for _ in range(order):
        values = [b - a for a, b in zip(values, values[1:])]
    return values


def third_difference_band(dims: Sequence[int], tail_length: int) -> Tuple[bool, int, int]:
    """
    Whether the third differences of the last ``tail_length`` samples stay
    within DIFFERENCE_BAND times the largest earlier third difference.

    Quasi-polynomial dims of degree at most 3 have bounded third differences.
    """
    differences = [abs(d) for d in _differences(dims, 3)]
    head, tail = differences[:-tail_length], differences[-tail_length:]
    head_max = max(head, default=0)
    tail_max = max(tail, default=0)
    return tail_max <= DIFFERENCE_BAND * max(1, head_max), head_max, tail_max


def filtration_dims(sigma: MonomialAutomorphism, polygon: Sequence[Point2], depth: int) -> List[int]:
    hull = check_convex(polygon)
    current = hull
    dims = [lattice_point_count(current)]
    for k in range(1, depth):
        current = minkowski_sum(current, transform_polygon(matrix_power(sigma.matrix, k), hull))
        dims.append(lattice_point_count(current))
    return dims


def gk_profile(sigma: MonomialAutomorphism, polygon: Sequence[Sequence[int]], depth: Optional[int] = None) -> GKProfile:
    """
    Lattice point counts of ``P + MP + ... + M^(n-1)P`` for ``n <= depth``.

    Exponential growth needs third differences that leave their band over the
    last ``ceil(N/3)`` samples, consecutive ratios of at least 5/4 over the same
    samples, and a doubling ratio ``dim_N / dim_ceil(N/2)`` beyond every
    polynomial allowance. Otherwise the growth is polynomial and the fitted
    degree is the least ``d`` with ``dim_N <= 5/4 * 2^d * dim_ceil(N/2)``.
    """
    if sigma.arity != 2:
        raise ValidationError("The Newton polygon profile needs n = 2, got n = %d" % sigma.arity)
    depth = app_settings.DEPTH if depth is None else int(depth)
    if depth < 1:
        raise ValidationError("Depth must be positive")
    if depth > CEILINGS["DEPTH"]:
        raise ResourceCapExceeded("DEPTH", depth, CEILINGS["DEPTH"])
    hull = check_convex(polygon)
    if not polygon_contains(hull, (0, 0)):
        raise ValidationError("The generator polygon must contain 0")

    dims = filtration_dims(sigma, hull, depth)
    logger.debug("Filtration dims for %s: %s", sigma, dims)

    tail_length = max(1, -(-depth // 3))
    ratios = [Fraction(b, a) for a, b in zip(dims, dims[1:])]
    tail = ratios[-tail_length:]
    doubling = Fraction(dims[-1], dims[-(-depth // 2) - 1]) if depth > 1 else Fraction(1)
    banded, head_max, tail_max = third_difference_band(dims, tail_length)
    residuals = {
        "tail_ratios": [format_fraction(r) for r in tail],
        "third_differences": _differences(dims, 3)[-tail_length:],
        "third_difference_band": [banded, head_max, tail_max],
        "doubling_ratio": [format_fraction(doubling)],
    }

    allowance = DOUBLING_SLACK * 2**MAX_POLYNOMIAL_DEGREE
    sustained = bool(tail) and min(tail) >= EXPONENTIAL_RATIO
    if sustained and doubling > allowance and not banded:
        return GKProfile(dims, EXPONENTIAL, min(tail), hull, residuals)
    degree = 0
    while degree < MAX_POLYNOMIAL_DEGREE and doubling > DOUBLING_SLACK * 2**degree:
        degree += 1
    return GKProfile(dims, POLYNOMIAL, Fraction(degree), hull, residuals)
