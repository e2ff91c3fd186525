import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import sympy
from sympy import Poly

from oredyn.automorphisms import (
    W,
    Z,
    Automorphism,
    MonomialAutomorphism,
    PlaneAutomorphism,
    apply_to_point,
    classify_plane,
    inverse,
    iterate,
    plane_poly,
)
from oredyn.conf import app_settings
from oredyn.exact import format_fraction, identity_matrix, integer_kernel, matrix_power, matrix_sub, to_fraction
from oredyn.exceptions import ResourceCapExceeded, UnsupportedFamily, ValidationError
from oredyn.growth import candidate_orders, growth_data
from oredyn.invariants import (
    InvariantWitness,
    bounded_invariant_search,
    invariant_fibration,
    invariant_monomials,
)
from oredyn.points import Point, TorsionPoint, format_point, point_to_json, rational_point

__all__ = [
    "TorsionPoint",
    "OrbitResult",
    "FixedPointResult",
    "PeriodicPoint",
    "OrbitClassification",
    "orbit",
    "fixed_points",
    "periodic_points",
    "periodic_orbits",
    "torsion_points",
    "classify_orbits",
]

logger = logging.getLogger(__name__)

DENSE_ORBIT = "dense_orbit_exists"
NO_DENSE_ORBIT = "no_dense_orbit"
UNDECIDED = "undecided"

FINITE = "finite"
COUNTABLY_INFINITE = "countably_infinite"
UNCOUNTABLE = "uncountable"


def _point_map(sigma: Automorphism) -> Callable[[Point], Point]:
    if isinstance(sigma, MonomialAutomorphism):
        return lambda point: apply_to_point(sigma, point)
    if isinstance(sigma, PlaneAutomorphism):
        return sigma
    raise UnsupportedFamily(f"No point map for {sigma!r}")


def _normalize_point(sigma: Automorphism, point) -> Point:
    if isinstance(point, TorsionPoint):
        if not isinstance(sigma, MonomialAutomorphism):
            raise ValidationError("Torsion points only live on tori")
        return point
    return rational_point(point)


# Orbits


@dataclass(frozen=True)
class OrbitResult:
    """
    ``points[k]`` is sigma^(k - steps)(start).
    """

    start: Point
    steps: int
    points: Tuple[Point, ...]
    period: Optional[int]

    def to_json(self) -> dict:
        return {
            "start": point_to_json(self.start),
            "steps": self.steps,
            "points": [point_to_json(p) for p in self.points],
            "period": self.period,
        }


def orbit(sigma: Automorphism, point, steps: int) -> OrbitResult:
    if steps < 1:
        raise ValidationError(f"Orbit length must be at least 1, got {steps}")
    start = _normalize_point(sigma, point)
    forward_map = _point_map(sigma)
    backward_map = _point_map(inverse(sigma))

    forward = [start]
    period = None
    for k in range(1, steps + 1):
        forward.append(forward_map(forward[-1]))
        if period is None and forward[-1] == start:
            period = k
    backward = [start]
    for _ in range(steps):
        backward.append(backward_map(backward[-1]))
    points = tuple(reversed(backward[1:])) + tuple(forward)
    return OrbitResult(start, steps, points, period)


# Fixed points of plane maps


def _leading_monomials(basis: Sequence[sympy.Expr]) -> List[Tuple[int, int]]:
    return [Poly(g, Z, W).monoms()[0] for g in basis]


def _quotient_dimension(basis: Sequence[sympy.Expr]) -> int:
    """
    Dimension of Q[z, w]/I for a zero-dimensional ideal given by a lex
    Groebner basis: the number of monomials under the staircase.
    """
    leading = _leading_monomials(basis)
    if (0, 0) in leading:
        return 0
    z_bound = min(a for a, b in leading if b == 0)
    count = 0
    for a in range(z_bound):
        count += min(b for la, b in leading if la <= a)
    return count


def _univariate_member(polys: Sequence[sympy.Expr], gens: Tuple[sympy.Symbol, sympy.Symbol]) -> sympy.Expr:
    """
    The generator of I intersected with Q[gens[1]].
    """
    basis = sympy.groebner(polys, *gens, order="lex")
    return basis.exprs[-1]


def _rational_roots(expr, gen) -> List[Fraction]:
    poly = Poly(expr, gen, domain="QQ")
    if poly.degree() < 1:
        return []
    return sorted(to_fraction(sympy.Rational(root)) for root in sympy.roots(poly, filter="Q"))


@dataclass(frozen=True)
class FixedPointResult:
    """
    Solutions of sigma(p) == p over the algebraic closure.
    """

    positive_dimensional: bool
    eliminant: Optional[Poly]
    with_multiplicity: int = 0
    distinct: int = 0
    rational: Tuple[Tuple[Fraction, Fraction], ...] = ()
    locus: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "positive_dimensional": self.positive_dimensional,
            "locus": self.locus,
            "eliminant": str(self.eliminant.as_expr()).replace("**", "^") if self.eliminant is not None else None,
            "count_with_multiplicity": self.with_multiplicity,
            "distinct": self.distinct,
            "rational": [[format_fraction(x) for x in p] for p in self.rational],
        }


def _eliminant(f: Poly, g: Poly) -> Optional[Poly]:
    for eliminated, kept in ((W, Z), (Z, W)):
        resultant = sympy.resultant(f.as_expr(), g.as_expr(), eliminated)
        if resultant != 0:
            return Poly(sympy.expand(resultant), kept, domain="QQ")
    return None


def fixed_points(sigma: PlaneAutomorphism) -> FixedPointResult:
    """
    Solve f(z, w) = z, g(z, w) = w by resultant elimination (w first) and count
    solutions with multiplicity from a lex Groebner basis.
    """
    if not isinstance(sigma, PlaneAutomorphism):
        raise UnsupportedFamily("Fixed points are solved for plane automorphisms")
    f = sigma.pair[0] - plane_poly(Z)
    g = sigma.pair[1] - plane_poly(W)
    if f.is_zero and g.is_zero:
        return FixedPointResult(True, None, locus="plane")

    equations = [p.as_expr() for p in (f, g) if not p.is_zero]
    basis = sympy.groebner(equations, Z, W, order="lex")
    if basis.exprs == [1]:
        return FixedPointResult(False, None)
    if not basis.is_zero_dimensional:
        common = sympy.gcd(f.as_expr(), g.as_expr()) if not (f.is_zero or g.is_zero) else equations[0]
        return FixedPointResult(True, None, locus=str(common).replace("**", "^"))

    with_multiplicity = _quotient_dimension(basis.exprs)
    in_w = sympy.sqf_part(_univariate_member(equations, (Z, W)))
    in_z = sympy.sqf_part(_univariate_member(equations, (W, Z)))
    radical = sympy.groebner(list(equations) + [in_w, in_z], Z, W, order="lex")
    distinct = _quotient_dimension(radical.exprs)

    rational = []
    for w0 in _rational_roots(in_w, W):
        restricted = [sympy.expand(e.subs(W, sympy.Rational(w0.numerator, w0.denominator))) for e in radical.exprs]
        common = 0
        for e in restricted:
            common = sympy.gcd(common, e)
        for z0 in _rational_roots(common, Z):
            rational.append((z0, w0))
    logger.debug("Fixed points: %d with multiplicity, %d distinct", with_multiplicity, distinct)
    return FixedPointResult(False, _eliminant(f, g), with_multiplicity, distinct, tuple(sorted(rational)))


# Periodic points


def torsion_points(arity: int, order: int) -> List[TorsionPoint]:
    """
    All points whose coordinates are order-th roots of unity.
    """
    return sorted(
        {TorsionPoint(order, exponents) for exponents in itertools.product(range(order), repeat=arity)},
        key=lambda p: (p.order, p.exponents),
    )


def exact_period(sigma: Automorphism, point: Point, n: int) -> Optional[int]:
    """
    Least p dividing n with sigma^p(point) == point.
    """
    step = _point_map(sigma)
    current = point
    for p in range(1, n + 1):
        current = step(current)
        if current == point:
            return p if n % p == 0 else None
    return None


@dataclass(frozen=True)
class PeriodicPoint:
    point: Point
    period: int

    def to_json(self) -> dict:
        return {"point": point_to_json(self.point), "period": self.period, "label": format_point(self.point)}


@dataclass(frozen=True)
class MonomialPeriodicPoints:
    n: int
    torsion_bound: int
    points: Tuple[PeriodicPoint, ...]

    def to_json(self) -> dict:
        return {
            "family": "monomial",
            "n": self.n,
            "torsion_bound": self.torsion_bound,
            "count": len(self.points),
            "points": [p.to_json() for p in self.points],
        }


@dataclass(frozen=True)
class PlanePeriodicPoints:
    """
    Solutions of sigma^n(p) == p; ``lower_period`` counts the distinct ones of
    smaller period.
    """

    n: int
    solutions: FixedPointResult
    lower_period: int
    points: Tuple[PeriodicPoint, ...]

    @property
    def genuine(self) -> int:
        return self.solutions.distinct - self.lower_period

    def to_json(self) -> dict:
        return {
            "family": "plane",
            "n": self.n,
            "count_with_multiplicity": self.solutions.with_multiplicity,
            "distinct": self.solutions.distinct,
            "lower_period": self.lower_period,
            "genuine": self.genuine,
            "solutions": self.solutions.to_json(),
            "points": [p.to_json() for p in self.points],
        }


def _monomial_periodic_points(sigma: MonomialAutomorphism, n: int, torsion_bound: int) -> MonomialPeriodicPoints:
    if torsion_bound > app_settings.TORSION_BOUND:
        raise ResourceCapExceeded("TORSION_BOUND", torsion_bound, app_settings.TORSION_BOUND)
    if any(abs(c) != 1 for c in sigma.coeffs):
        raise UnsupportedFamily("Torsion points are only permuted when every coefficient is +-1")
    power = iterate(sigma, n)
    found = []
    for point in torsion_points(sigma.arity, torsion_bound):
        if apply_to_point(power, point) == point:
            found.append(PeriodicPoint(point, exact_period(sigma, point, n)))
    return MonomialPeriodicPoints(n, torsion_bound, tuple(found))


def _plane_periodic_points(sigma: PlaneAutomorphism, n: int) -> PlanePeriodicPoints:
    if n > app_settings.PLANE_PERIOD_CAP:
        raise ResourceCapExceeded("PLANE_PERIOD_CAP", n, app_settings.PLANE_PERIOD_CAP)
    solutions = fixed_points(iterate(sigma, n))
    if solutions.positive_dimensional:
        return PlanePeriodicPoints(n, solutions, 0, ())
    lower = 0
    for q in range(1, n):
        if n % q == 0:
            lower = max(lower, fixed_points(iterate(sigma, q)).distinct)
    points = tuple(PeriodicPoint(p, exact_period(sigma, p, n)) for p in solutions.rational)
    return PlanePeriodicPoints(n, solutions, lower, points)


def periodic_points(sigma: Automorphism, n: int, torsion_bound: int = None):
    """
    Points with sigma^n(p) == p: torsion points whose order divides
    ``torsion_bound`` for monomial maps, all solutions for plane maps.
    """
    if n < 1:
        raise ValidationError(f"Period must be at least 1, got {n}")
    if isinstance(sigma, MonomialAutomorphism):
        return _monomial_periodic_points(sigma, n, torsion_bound or app_settings.TORSION_BOUND)
    if isinstance(sigma, PlaneAutomorphism):
        return _plane_periodic_points(sigma, n)
    raise UnsupportedFamily(f"No periodic points for {sigma!r}")


def _orbit_of(sigma: Automorphism, point: Point) -> Tuple[Point, ...]:
    step = _point_map(sigma)
    cycle = [point]
    current = step(point)
    while current != point:
        cycle.append(current)
        current = step(current)
    return tuple(cycle)


def iter_periodic_orbits(sigma: MonomialAutomorphism) -> Iterator[Tuple[Point, ...]]:
    """
    Every torsion orbit, by increasing order. Never terminates.
    """
    if any(abs(c) != 1 for c in sigma.coeffs):
        raise UnsupportedFamily("Torsion points are only permuted when every coefficient is +-1")
    seen = set()
    for order in itertools.count(1):
        for point in torsion_points(sigma.arity, order):
            if point.order != order or point in seen:
                continue
            cycle = _orbit_of(sigma, point)
            seen.update(cycle)
            yield cycle


def periodic_orbits(sigma: Automorphism, bound: int = None) -> List[Tuple[Point, ...]]:
    """
    Periodic orbits of torsion points of order at most ``bound`` for monomial
    maps, and of rational periodic points of period at most ``bound`` for
    plane maps.
    """
    if isinstance(sigma, MonomialAutomorphism):
        bound = bound or app_settings.TORSION_BOUND
        if bound > app_settings.TORSION_BOUND:
            raise ResourceCapExceeded("TORSION_BOUND", bound, app_settings.TORSION_BOUND)
        orbits = []
        for cycle in iter_periodic_orbits(sigma):
            if cycle[0].order > bound:
                break
            orbits.append(cycle)
        return orbits
    if isinstance(sigma, PlaneAutomorphism):
        bound = bound or app_settings.PLANE_PERIOD_CAP
        orbits, seen = [], set()
        for n in range(1, bound + 1):
            for periodic in _plane_periodic_points(sigma, n).points:
                if periodic.point not in seen:
                    cycle = _orbit_of(sigma, periodic.point)
                    seen.update(cycle)
                    orbits.append(cycle)
        return orbits
    raise UnsupportedFamily(f"No periodic orbits for {sigma!r}")


def iter_plane_periodic_points(sigma: PlaneAutomorphism) -> Iterator[PlanePeriodicPoints]:
    """
    Periodic point data for n = 1, 2, ... up to the plane period cap.
    """
    for n in range(1, app_settings.PLANE_PERIOD_CAP + 1):
        yield _plane_periodic_points(sigma, n)


# Dense orbits and maximal sigma-irreducible subsets


@dataclass(frozen=True)
class OrbitClassification:
    """
    Dense-orbit status with its witness or certificate, and the cardinality
    class of the maximal sigma-irreducible closed subsets.

    For countably many, ``stream`` produces the witnesses lazily.
    """

    status: str
    max_irreducibles: str
    witness: Optional[InvariantWitness] = None
    certificate: dict = field(default_factory=dict)
    components: Tuple[str, ...] = ()
    sample: Tuple = ()
    reason: str = ""
    stream: Optional[Callable[[], Iterator]] = field(default=None, compare=False, repr=False)

    @property
    def has_dense_orbit(self) -> Optional[bool]:
        if self.status == UNDECIDED:
            return None
        return self.status == DENSE_ORBIT

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "witness": self.witness.to_json() if self.witness else None,
            "certificate": self.certificate,
            "max_irreducibles": self.max_irreducibles,
            "components": list(self.components),
            "sample": list(self.sample),
            "reason": self.reason,
        }


def _monomial_invariant_witness(sigma: MonomialAutomorphism) -> Tuple[Optional[InvariantWitness], List[int]]:
    """
    An invariant monomial of some power of sigma, searching the periods that
    root-of-unity eigenvalues allow.
    """
    checked = []
    identity = identity_matrix(sigma.arity)
    for k in candidate_orders(sigma.arity):
        if not integer_kernel(matrix_sub(matrix_power(sigma.matrix, k), identity)):
            continue
        checked.append(k)
        for m in (k, 2 * k):
            found = invariant_monomials(sigma, m)
            if found.has_invariant:
                return found.witnesses()[0], checked
    return None, checked


def _classify_monomial(sigma: MonomialAutomorphism) -> OrbitClassification:
    witness, periods = _monomial_invariant_witness(sigma)
    if witness is not None:
        return OrbitClassification(
            NO_DENSE_ORBIT,
            UNCOUNTABLE,
            witness=witness,
            components=(f"fibres of {witness}",),
            reason="nonconstant invariant of a power of sigma",
        )

    certificate = {
        "kind": "eigenvalue",
        "orders_checked": list(candidate_orders(sigma.arity)),
        "root_of_unity_eigenvalue": bool(periods),
        "coefficient_condition": "fails" if periods else "not needed",
    }
    growth = growth_data(sigma)
    if growth.rho.is_one():
        return OrbitClassification(
            DENSE_ORBIT,
            FINITE,
            certificate=certificate,
            reason="finite growth type: finitely many maximal sigma-irreducible subsets",
        )
    if any(abs(c) != 1 for c in sigma.coeffs):
        return OrbitClassification(
            DENSE_ORBIT,
            UNDECIDED,
            certificate=certificate,
            reason="periodic points are not torsion points for these coefficients",
        )
    sample = tuple(
        [format_point(p) for p in cycle] for cycle in itertools.islice(iter_periodic_orbits(sigma), 5)
    )
    return OrbitClassification(
        DENSE_ORBIT,
        COUNTABLY_INFINITE,
        certificate=certificate,
        sample=sample,
        reason="every torsion point is periodic",
        stream=lambda: iter_periodic_orbits(sigma),
    )


def _classify_plane(sigma: PlaneAutomorphism) -> OrbitClassification:
    classification = classify_plane(sigma)
    if classification.is_henon:
        fixed = fixed_points(sigma)
        return OrbitClassification(
            DENSE_ORBIT,
            COUNTABLY_INFINITE,
            certificate={"kind": "henon", "degrees": list(classification.degrees)},
            sample=({"n": 1, "distinct": fixed.distinct, "with_multiplicity": fixed.with_multiplicity},),
            reason="Henon maps have a dense orbit, countably many periodic points and no periodic curves",
            stream=lambda: iter_plane_periodic_points(sigma),
        )

    fibration = invariant_fibration(sigma)
    witnesses = list(fibration.witnesses)
    if not witnesses:
        for m in (1, 2):
            witnesses = bounded_invariant_search(sigma, app_settings.DEGREE_BOUND, m)
            if witnesses:
                break
    if witnesses:
        witness = witnesses[0]
        return OrbitClassification(
            NO_DENSE_ORBIT,
            UNCOUNTABLE,
            witness=witness,
            components=(f"fibres of {witness}",),
            reason="nonconstant invariant of a power of sigma",
        )
    return OrbitClassification(
        UNDECIDED,
        UNDECIDED,
        certificate={"kind": "fibration", **fibration.to_json()},
        reason="elementary map with infinite-order base action and no bounded-degree invariant",
    )


def classify_orbits(sigma: Automorphism) -> OrbitClassification:
    if isinstance(sigma, MonomialAutomorphism):
        result = _classify_monomial(sigma)
    elif isinstance(sigma, PlaneAutomorphism):
        result = _classify_plane(sigma)
    else:
        raise UnsupportedFamily(f"No orbit classification for {sigma!r}")
    logger.debug("Orbit classification of %s: %s / %s", sigma, result.status, result.max_irreducibles)
    return result
