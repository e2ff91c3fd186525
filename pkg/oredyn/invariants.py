"""
Invariant and semi-invariant rational functions.

Monomial maps are handled exactly on the exponent lattice, elementary-type
plane maps through the fibration given by their conjugating witness, and both
families through a degree-bounded search for pairs of eigenvectors of the
substitution action that share an eigenvalue.
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy
from sympy import Poly

from oredyn.automorphisms import (
    W,
    Z,
    Automorphism,
    MonomialAutomorphism,
    PlaneAutomorphism,
    classify_plane,
    fibre_correction,
    format_plane_poly,
    inverse,
    iterate,
    plane_poly,
)
from oredyn.conf import app_settings
from oredyn.exact import (
    Exponent,
    LatticeBasis,
    LaurentPoly,
    format_fraction,
    identity_matrix,
    integer_kernel,
    matrix_power,
    matrix_sub,
    matrix_vector,
    normalize_sign,
    primitive_vector,
    to_fraction,
    to_sympy_rational,
)
from oredyn.exceptions import ResourceCapExceeded, UnsupportedFamily, ValidationError

logger = logging.getLogger(__name__)

MONOMIAL_KIND = "monomial"
FIBRATION_KIND = "fibration"
BRUTE_FORCE_KIND = "brute_force"

INVARIANT = "invariant"
SEMI_INVARIANT = "semi-invariant"

Function = Union[LaurentPoly, Poly]


def format_function(function: Function) -> str:
    if isinstance(function, LaurentPoly):
        return str(function)
    return format_plane_poly(function)


def _leading_coefficient(function: Function):
    if isinstance(function, LaurentPoly):
        return function.terms[max(function.terms)]
    return function.LC()


def _is_zero(function: Function) -> bool:
    return function.is_zero() if isinstance(function, LaurentPoly) else function.is_zero


def _one_like(function: Function) -> Function:
    if isinstance(function, LaurentPoly):
        return LaurentPoly.constant(1, function.arity)
    return plane_poly(1)


def is_proportional(p: Function, q: Function) -> bool:
    if _is_zero(p) or _is_zero(q):
        return True
    return p * _leading_coefficient(q) == q * _leading_coefficient(p)


@dataclass(frozen=True)
class InvariantWitness:
    """
    numerator / denominator, fixed by sigma^period.
    """

    numerator: Function
    denominator: Function
    period: int
    kind: str

    def __str__(self):
        if self.denominator == _one_like(self.denominator):
            return format_function(self.numerator)
        return f"({format_function(self.numerator)}) / ({format_function(self.denominator)})"

    def to_json(self) -> dict:
        return {
            "function": str(self),
            "numerator": format_function(self.numerator),
            "denominator": format_function(self.denominator),
            "period": self.period,
            "kind": self.kind,
        }


@dataclass(frozen=True)
class SemiInvariant:
    """
    sigma^period(function) == eigenvalue * function.
    """

    function: Function
    eigenvalue: Fraction
    period: int

    def to_json(self) -> dict:
        return {
            "function": format_function(self.function),
            "eigenvalue": format_fraction(self.eigenvalue),
            "period": self.period,
        }


def verify_witness(sigma: Automorphism, witness: InvariantWitness) -> bool:
    """
    Exact check that the witness is nonconstant and fixed by sigma^period.
    """
    if witness.period < 1 or is_proportional(witness.numerator, witness.denominator):
        return False
    power = iterate(sigma, witness.period)
    p, q = witness.numerator, witness.denominator
    return power.pullback(p) * q == p * power.pullback(q)


def _checked(sigma: Automorphism, witnesses: Sequence[InvariantWitness]) -> List[InvariantWitness]:
    for witness in witnesses:
        if not verify_witness(sigma, witness):
            raise AssertionError(f"Witness {witness} failed verification for {sigma}")
    return list(witnesses)


def transport_witness(witness: InvariantWitness, theta: Automorphism) -> InvariantWitness:
    """
    The witness for theta o sigma o theta^-1 obtained from a witness for sigma.
    """
    if isinstance(theta, MonomialAutomorphism):
        carry = theta.pullback
    else:
        carry = inverse(theta).pullback
    return InvariantWitness(carry(witness.numerator), carry(witness.denominator), witness.period, witness.kind)


# Monomial invariants


def _valuation(value: Fraction, prime: int) -> int:
    return sympy.multiplicity(prime, abs(value.numerator)) - sympy.multiplicity(prime, value.denominator)


def _character_kernel(scalars: Sequence[Fraction]) -> List[Tuple[int, ...]]:
    """
    A basis of {c in Z^r : prod scalars[i]^c[i] == 1}.

    Nonzero rationals are +-1 times a product of primes, so the condition is a
    linear system on prime valuations plus a parity condition on the sign.
    """
    rank = len(scalars)
    primes = set()
    for s in scalars:
        primes.update(sympy.factorint(abs(s.numerator)))
        primes.update(sympy.factorint(s.denominator))
    if primes:
        rows = [[_valuation(s, p) for s in scalars] for p in sorted(primes)]
        kernel = [tuple(v) for v in integer_kernel(rows)]
    else:
        kernel = [tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank)]

    signs = [1 if s < 0 else 0 for s in scalars]
    even, odd = [], []
    for vector in kernel:
        parity = sum(c * e for c, e in zip(vector, signs)) % 2
        (odd if parity else even).append(vector)
    if odd:
        first = odd[0]
        even.extend(tuple(a - b for a, b in zip(vector, first)) for vector in odd[1:])
        even.append(tuple(2 * a for a in first))
    return even


@dataclass(frozen=True)
class BasisEntry:
    vector: Exponent
    scalar: Fraction

    @property
    def status(self) -> str:
        return INVARIANT if self.scalar == 1 else SEMI_INVARIANT

    def to_json(self) -> dict:
        return {"vector": list(self.vector), "scalar": format_fraction(self.scalar), "status": self.status}


@dataclass(frozen=True)
class MonomialInvariants:
    """
    Exponents a with M^m a = a, together with the scalar sigma^m picks up on
    u^a, and a basis of the exponents whose monomials are genuinely invariant.
    """

    period: int
    basis: LatticeBasis
    entries: Tuple[BasisEntry, ...]
    invariant_basis: Tuple[Exponent, ...]

    @property
    def has_invariant(self) -> bool:
        return bool(self.invariant_basis)

    @property
    def coefficient_condition(self) -> str:
        if not self.basis:
            return "no invariant exponents"
        if all(entry.scalar == 1 for entry in self.entries):
            return "trivial"
        if self.has_invariant:
            return "satisfied on a sublattice"
        return "fails"

    def witnesses(self) -> List[InvariantWitness]:
        arity = len(self.basis[0]) if self.basis else 0
        return [
            InvariantWitness(
                LaurentPoly.monomial(vector), LaurentPoly.constant(1, arity), self.period, MONOMIAL_KIND
            )
            for vector in self.invariant_basis
        ]

    def semi_invariants(self) -> List[SemiInvariant]:
        return [
            SemiInvariant(LaurentPoly.monomial(entry.vector), entry.scalar, self.period)
            for entry in self.entries
            if entry.scalar != 1
        ]

    def to_json(self) -> dict:
        return {
            "period": self.period,
            "basis": self.basis.to_list(),
            "entries": [entry.to_json() for entry in self.entries],
            "invariant_basis": [list(vector) for vector in self.invariant_basis],
            "coefficient_condition": self.coefficient_condition,
            "witnesses": [witness.to_json() for witness in self.witnesses()],
        }


def invariant_monomials(sigma: MonomialAutomorphism, m: int = 1) -> MonomialInvariants:
    if not isinstance(sigma, MonomialAutomorphism):
        raise UnsupportedFamily("Invariant monomials are only defined for monomial automorphisms")
    if m < 1:
        raise ValidationError(f"Period must be at least 1, got {m}")
    power = iterate(sigma, m)
    basis = integer_kernel(matrix_sub(power.matrix, identity_matrix(sigma.arity)))
    entries = tuple(BasisEntry(vector, power.scalar(vector)) for vector in basis)

    invariant_basis = []
    for combination in _character_kernel([entry.scalar for entry in entries]):
        vector = [0] * sigma.arity
        for c, entry in zip(combination, entries):
            for i, a in enumerate(entry.vector):
                vector[i] += c * a
        if any(vector):
            invariant_basis.append(normalize_sign(vector))
    logger.debug(
        "sigma^%d fixes a rank %d exponent lattice, %d invariant directions", m, len(basis), len(invariant_basis)
    )
    return MonomialInvariants(m, basis, entries, tuple(sorted(invariant_basis, reverse=True)))


# Degree-bounded search


def _rational_roots(value: Fraction, degree: int) -> List[Fraction]:
    """
    Rational solutions of x^degree == value.
    """
    if value < 0 and degree % 2 == 0:
        return []
    num, exact_num = sympy.integer_nthroot(abs(value.numerator), degree)
    den, exact_den = sympy.integer_nthroot(value.denominator, degree)
    if not (exact_num and exact_den):
        return []
    root = Fraction(int(num), int(den)) * (1 if value > 0 else -1)
    return [-root, root] if degree % 2 == 0 else [root]


def _monomial_eigenvectors(power: MonomialAutomorphism, bound: int) -> Dict[Fraction, List[LaurentPoly]]:
    """
    Eigenvectors of f -> sigma^m(f) supported on the exponent box [-bound, bound]^n.

    The action permutes monomials up to scalars, so every eigenvector is
    spanned by sums over the cycles of M^m that stay inside the box.
    """
    arity = power.arity
    box = sorted(itertools.product(range(-bound, bound + 1), repeat=arity))
    inside = set(box)
    image_space = inside | {matrix_vector(power.matrix, a) for a in box}
    if len(image_space) > app_settings.COEFFICIENT_SPACE_CAP:
        raise ResourceCapExceeded("COEFFICIENT_SPACE_CAP", len(image_space), app_settings.COEFFICIENT_SPACE_CAP)

    eigenvectors: Dict[Fraction, List[LaurentPoly]] = {}
    seen = set()
    for start in box:
        if start in seen:
            continue
        cycle = [start]
        current = matrix_vector(power.matrix, start)
        while current != start and current in inside:
            cycle.append(current)
            current = matrix_vector(power.matrix, current)
        seen.update(cycle)
        if current != start:
            continue
        scalars = [power.scalar(a) for a in cycle]
        accumulated = Fraction(1)
        for s in scalars:
            accumulated *= s
        for eigenvalue in _rational_roots(accumulated, len(cycle)):
            terms = {}
            running = Fraction(1)
            for k, a in enumerate(cycle):
                terms[a] = running / eigenvalue**k
                running *= scalars[k]
            eigenvectors.setdefault(eigenvalue, []).append(LaurentPoly(terms, arity))
    return eigenvectors


def _plane_monomials(degree: int) -> List[Tuple[int, int]]:
    return [(i, total - i) for total in range(degree + 1) for i in range(total, -1, -1)]


def _stable_subspace(action: sympy.Matrix, size: int) -> sympy.Matrix:
    """
    The largest subspace U of the first ``size`` coordinates with action(U) inside U.

    Every eigenvector lies in U.
    """
    basis = sympy.eye(size)
    while basis.cols:
        padded = basis.col_join(sympy.zeros(action.rows - size, basis.cols))
        system = (action * basis).row_join(-padded)
        null = system.nullspace()
        if not null:
            return sympy.zeros(size, 0)
        coords = sympy.Matrix.hstack(*[vector[: basis.cols, :] for vector in null])
        spanned = (basis * coords).columnspace()
        if not spanned:
            return sympy.zeros(size, 0)
        candidate = sympy.Matrix.hstack(*spanned)
        if candidate.cols == basis.cols:
            return basis
        basis = candidate
    return basis


def _plane_eigenvectors(power: PlaneAutomorphism, bound: int) -> Dict[Fraction, List[Poly]]:
    image_degree = bound * power.degree
    dimension = (image_degree + 1) * (image_degree + 2) // 2
    if dimension > app_settings.COEFFICIENT_SPACE_CAP:
        raise ResourceCapExceeded("COEFFICIENT_SPACE_CAP", dimension, app_settings.COEFFICIENT_SPACE_CAP)

    source = _plane_monomials(bound)
    target = _plane_monomials(image_degree)
    index = {monomial: row for row, monomial in enumerate(target)}
    action = sympy.zeros(len(target), len(source))
    for col, (i, j) in enumerate(source):
        image = power.pullback(plane_poly(Z**i * W**j))
        for monomial, coeff in image.terms():
            action[index[monomial], col] = coeff
    logger.debug("Substitution action: %d -> %d dimensional coefficient spaces", len(source), len(target))

    basis = _stable_subspace(action, len(source))
    if not basis.cols:
        return {}
    restricted = (basis.T * basis).inv() * basis.T * (action * basis)[: len(source), :]

    x = sympy.Symbol("x")
    _, factors = sympy.factor_list(restricted.charpoly(x).as_expr(), x)
    eigenvectors: Dict[Fraction, List[Poly]] = {}
    for factor, _ in factors:
        factor = Poly(factor, x)
        if factor.degree() != 1:
            continue
        eigenvalue = -factor.all_coeffs()[1] / factor.all_coeffs()[0]
        vectors = (restricted - eigenvalue * sympy.eye(restricted.rows)).nullspace()
        polys = []
        for vector in vectors:
            coords = basis * vector
            expr = sum(coords[k] * Z**i * W**j for k, (i, j) in enumerate(source))
            polys.append(plane_poly(expr))
        eigenvectors[to_fraction(sympy.Rational(eigenvalue))] = polys
    return eigenvectors


def bounded_invariant_search(sigma: Automorphism, degree_bound: int = None, m: int = 1) -> List[InvariantWitness]:
    """
    Nonconstant sigma^m-invariant ratios p/q with p and q of degree at most
    ``degree_bound``, found as quotients of eigenvectors of f -> sigma^m(f)
    with a common eigenvalue.

    For monomial maps "degree" bounds every exponent in absolute value.
    """
    if degree_bound is None:
        degree_bound = app_settings.DEGREE_BOUND
    if degree_bound < 1 or m < 1:
        raise ValidationError("Degree bound and period must be at least 1")
    power = iterate(sigma, m)
    if isinstance(power, MonomialAutomorphism):
        eigenvectors = _monomial_eigenvectors(power, degree_bound)
    elif isinstance(power, PlaneAutomorphism):
        eigenvectors = _plane_eigenvectors(power, degree_bound)
    else:
        raise UnsupportedFamily(f"No invariant search for {sigma!r}")

    witnesses = []
    for eigenvalue in sorted(eigenvectors):
        vectors = eigenvectors[eigenvalue]
        if len(vectors) < 2:
            continue
        one = _one_like(vectors[0])
        constants = [v for v in vectors if is_proportional(v, one)]
        denominator = one if constants else vectors[0]
        for numerator in vectors:
            if numerator is denominator or is_proportional(numerator, denominator):
                continue
            witnesses.append(InvariantWitness(numerator, denominator, m, BRUTE_FORCE_KIND))
    logger.debug("Bounded search (D=%d, m=%d) found %d witnesses", degree_bound, m, len(witnesses))
    return _checked(sigma, witnesses)


# Fibrations of elementary-type plane maps


def base_order(beta: Fraction, gamma: Fraction) -> Optional[int]:
    """
    Order of x -> beta*x + gamma over Q, or None when it is infinite.
    """
    if beta == 1:
        return 1 if gamma == 0 else None
    if beta == -1:
        return 2
    return None


@dataclass(frozen=True)
class FibrationReport:
    fibre: Optional[Poly]
    base_action: Optional[Tuple[Fraction, Fraction]]
    order: Optional[int]
    witnesses: Tuple[InvariantWitness, ...] = ()
    semi_invariant: Optional[SemiInvariant] = None
    reason: str = ""

    @property
    def has_invariant(self) -> bool:
        return bool(self.witnesses)

    def to_json(self) -> dict:
        return {
            "fibre": format_plane_poly(self.fibre) if self.fibre is not None else None,
            "base_action": (
                [format_fraction(x) for x in self.base_action] if self.base_action is not None else None
            ),
            "base_order": self.order,
            "witnesses": [witness.to_json() for witness in self.witnesses],
            "semi_invariant": self.semi_invariant.to_json() if self.semi_invariant else None,
            "reason": self.reason,
        }


def invariant_fibration(sigma: PlaneAutomorphism) -> FibrationReport:
    """
    Pull the coordinate w of the elementary normal form back through the
    conjugating witness; the fibres of the result are permuted by sigma through
    w -> beta*w + gamma.
    """
    if not isinstance(sigma, PlaneAutomorphism):
        raise UnsupportedFamily("Fibrations are only extracted for plane automorphisms")
    classification = classify_plane(sigma)
    if classification.is_henon:
        raise UnsupportedFamily(f"{sigma} is of Henon type and has no invariant fibration")
    elementary = classification.elementary
    if elementary is None:
        return FibrationReport(None, None, None, reason="linear part has no rational eigenvector")

    fibre = inverse(classification.conjugator).pullback(plane_poly(W))
    beta, gamma = elementary.beta, elementary.gamma
    order = base_order(beta, gamma)
    witnesses: List[InvariantWitness] = []
    semi = None
    if order == 1:
        witnesses.append(InvariantWitness(fibre, plane_poly(1), 1, FIBRATION_KIND))
        reason = "base action is trivial"
    elif order == 2:
        centre = plane_poly(fibre.as_expr() - to_sympy_rational(gamma / 2))
        witnesses.append(InvariantWitness(centre**2, plane_poly(1), 1, FIBRATION_KIND))
        witnesses.append(InvariantWitness(fibre, plane_poly(1), 2, FIBRATION_KIND))
        reason = "base action is an involution"
    else:
        if beta != 1:
            centre = plane_poly(fibre.as_expr() - to_sympy_rational(gamma / (1 - beta)))
            semi = SemiInvariant(centre, beta, 1)
        reason = "base action has infinite order; no invariant function claimed"
        alpha = elementary.alpha
        correction = fibre_correction(elementary) if alpha in (1, -1) else None
        if correction is not None:
            # z - h(w) in the elementary coordinates, carried back to sigma's
            section = inverse(classification.conjugator).pullback(plane_poly(Z - correction.as_expr()))
            if alpha == 1:
                witnesses.append(InvariantWitness(section, plane_poly(1), 1, FIBRATION_KIND))
                reason = "base action has infinite order; z - h(w) is invariant"
            else:
                witnesses.append(InvariantWitness(section**2, plane_poly(1), 1, FIBRATION_KIND))
                semi = semi or SemiInvariant(section, alpha, 1)
                reason = "base action has infinite order; z - h(w) changes sign"
    return FibrationReport(fibre, (beta, gamma), order, tuple(_checked(sigma, witnesses)), semi, reason)


# Periodic codimension-one subtori


@dataclass(frozen=True)
class PeriodicDirection:
    """
    A primitive exponent a with M^period a == sign * a; the subtori {u^a = c}
    are permuted by sigma.
    """

    vector: Exponent
    period: int
    sign: int
    scalar: Fraction

    @property
    def fixing_period(self) -> int:
        return self.period if self.sign == 1 else 2 * self.period

    @property
    def periodic_family(self) -> bool:
        """
        Every subtorus {u^a = c} is periodic.
        """
        return abs(self.scalar) == 1

    def to_json(self) -> dict:
        return {
            "vector": list(self.vector),
            "period": self.period,
            "sign": self.sign,
            "scalar": format_fraction(self.scalar),
            "periodic_family": self.periodic_family,
        }


@dataclass(frozen=True)
class PeriodicDivisors:
    directions: Tuple[PeriodicDirection, ...]
    all_directions: bool
    infinite: bool
    truncated: bool = False
    witness: Optional[InvariantWitness] = None

    def to_json(self) -> dict:
        return {
            "directions": "all" if self.all_directions else [d.to_json() for d in self.directions],
            "enumerated": [d.to_json() for d in self.directions],
            "truncated": self.truncated,
            "count": "infinite" if self.infinite else "finite",
            "witness": self.witness.to_json() if self.witness else None,
        }


def _primitive_directions(limit: int):
    radius = 1
    found = []
    while len(found) < limit:
        for a in range(-radius, radius + 1):
            for b in range(-radius, radius + 1):
                if max(abs(a), abs(b)) != radius:
                    continue
                vector = primitive_vector((a, b))
                if vector == (a, b) and vector not in found:
                    found.append(vector)
        radius += 1
    return found[:limit]


def periodic_divisors(sigma: MonomialAutomorphism, bound: int = None) -> PeriodicDivisors:
    if not isinstance(sigma, MonomialAutomorphism) or sigma.arity != 2:
        raise ValidationError("Periodic divisors are enumerated for monomial automorphisms of the 2-torus only")
    if bound is None:
        bound = app_settings.PERIOD_CAP
    identity = identity_matrix(2)

    directions: Dict[Exponent, Tuple[int, int]] = {}
    all_period = None
    for m in range(1, bound + 1):
        power = matrix_power(sigma.matrix, m)
        for sign in (1, -1):
            shifted = matrix_sub(power, tuple(tuple(sign * x for x in row) for row in identity))
            kernel = integer_kernel(shifted)
            if kernel.rank == 2 and all_period is None:
                all_period = (m, sign)
            for vector in kernel:
                directions.setdefault(normalize_sign(vector), (m, sign))
        if all_period is not None:
            break

    truncated = False
    if all_period is not None:
        cap = app_settings.ENUMERATION_CAP
        vectors = _primitive_directions(cap)
        truncated = True
        for vector in vectors:
            if vector in directions:
                continue
            m = all_period[0]
            sign = 1 if matrix_vector(matrix_power(sigma.matrix, m), vector) == vector else -1
            directions[vector] = (m, sign)

    entries = []
    for vector, (m, sign) in sorted(directions.items(), reverse=True):
        fixing = m if sign == 1 else 2 * m
        entries.append(PeriodicDirection(vector, m, sign, iterate(sigma, fixing).scalar(vector)))

    witness = None
    for m in range(1, 2 * bound + 1):
        found = invariant_monomials(sigma, m)
        if found.has_invariant:
            witness = found.witnesses()[0]
            break
    infinite = witness is not None
    logger.debug("%d periodic directions, infinite=%s", len(entries), infinite)
    return PeriodicDivisors(tuple(entries), all_period is not None, infinite, truncated, witness)
