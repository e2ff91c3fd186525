import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import List, Optional, Tuple, Union

import sympy
from sympy import Poly

from oredyn.automorphisms import (
    Automorphism,
    MonomialAutomorphism,
    PlaneAutomorphism,
    classify_plane,
    compose_pairs,
    is_affine_conjugate,
    pair_degree,
)
from oredyn.exact import (
    LAMBDA,
    AlgebraicReal,
    IntegerMatrix,
    char_poly,
    identity_matrix,
    is_zero_matrix,
    matrix_mul,
    matrix_power,
    matrix_sub,
    max_norm,
    spectral_radius,
)
from oredyn.exceptions import UnsupportedFamily

logger = logging.getLogger(__name__)

FINITE = "finite"
INFINITE = "infinite"

# deg(sigma^n) is only expanded while it stays below this bound
DEGREE_EXPANSION_CAP = 64
ELEMENTARY_FIT_DEPTH = 12


@dataclass(frozen=True)
class CyclotomicCertificate:
    """
    (M^k - I) is nilpotent of the given index.
    """

    k: int
    nilpotency_index: int

    def to_json(self) -> dict:
        return {"kind": "cyclotomic", "k": self.k, "nilpotency_index": self.nilpotency_index}


@dataclass(frozen=True)
class DominantRootCertificate:
    """
    An isolating interval for rho whose lower end exceeds 1.
    """

    rho: AlgebraicReal

    def to_json(self) -> dict:
        return {
            "kind": "dominant_root",
            "poly": self.rho.to_dict()["poly"],
            "interval": self.rho.to_dict()["interval"],
        }


@dataclass(frozen=True)
class DegreeCertificate:
    """
    Degree data of a plane automorphism: the cyclically reduced core and the
    exact degree sequence deg(sigma^n).
    """

    kind: str
    degrees: Tuple[int, ...]
    sequence: Tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "kind": "degree_sequence",
            "type": self.kind,
            "factor_degrees": list(self.degrees),
            "sequence": list(self.sequence),
        }


Certificate = Union[CyclotomicCertificate, DominantRootCertificate, DegreeCertificate]


@dataclass(frozen=True)
class GrowthData:
    rho: AlgebraicReal
    j: int
    certificate: Certificate
    lattice_proxy: bool = False

    @property
    def growth_type(self) -> str:
        return FINITE if self.rho.is_one() else INFINITE

    def to_json(self) -> dict:
        return {
            "rho": str(self.rho),
            "rho_detail": self.rho.to_dict(),
            "j": self.j,
            "type": self.growth_type,
            "certificate": self.certificate.to_json(),
            "lattice_proxy": self.lattice_proxy,
        }


@lru_cache(maxsize=None)
def candidate_orders(n: int) -> Tuple[int, ...]:
    """
    Orders k with phi(k) <= n, closed under lcm.
    """
    orders = {k for k in range(1, 2 * n * n + 7) if sympy.totient(k) <= n}
    changed = True
    while changed:
        changed = False
        for a in list(orders):
            for b in list(orders):
                c = a * b // gcd(a, b)
                if c not in orders and sympy.totient(c) <= n * n:
                    orders.add(c)
                    changed = True
    return tuple(sorted(orders))


def nilpotency_index(matrix: IntegerMatrix) -> Optional[int]:
    n = len(matrix)
    power = matrix
    for index in range(1, n + 1):
        if is_zero_matrix(power):
            return index
        power = matrix_mul(power, matrix)
    return None


def is_quasi_unipotent(matrix: IntegerMatrix) -> Tuple[bool, Optional[CyclotomicCertificate]]:
    """
    Whether every eigenvalue of M is a root of unity, with the smallest k
    such that M^k - I is nilpotent as certificate.
    """
    identity = identity_matrix(len(matrix))
    for k in candidate_orders(len(matrix)):
        index = nilpotency_index(matrix_sub(matrix_power(matrix, k), identity))
        if index is not None:
            return True, CyclotomicCertificate(k, index)
    return False, None


def _companion(factor: Poly) -> IntegerMatrix:
    coeffs = [int(c) for c in factor.all_coeffs()]
    degree = len(coeffs) - 1
    rows = []
    for i in range(degree):
        row = [0] * degree
        if i + 1 < degree:
            row[i + 1] = 1
        rows.append(row)
    rows[-1] = [-coeffs[degree - i] for i in range(degree)]
    return tuple(tuple(row) for row in rows)


def _dominant_block_size(matrix: IntegerMatrix, rho: AlgebraicReal) -> int:
    """
    Largest Jordan block among eigenvalues of modulus rho.
    """
    _, factors = sympy.factor_list(char_poly(matrix).as_expr(), LAMBDA)
    size = len(matrix)
    block = 1
    for factor, multiplicity in factors:
        factor = Poly(factor, LAMBDA, domain="ZZ")
        if factor.degree() < 1 or spectral_radius(_companion(factor)) != rho:
            continue
        evaluated = sympy.zeros(size, size)
        for coeff in factor.all_coeffs():
            evaluated = evaluated * sympy.Matrix(matrix) + int(coeff) * sympy.eye(size)
        power = sympy.eye(size)
        for s in range(1, multiplicity + 1):
            power = power * evaluated
            if size - power.rank() == multiplicity * factor.degree():
                block = max(block, s)
                break
    return block


def norm_sequence(matrix: IntegerMatrix, count: int) -> List[int]:
    return [max_norm(matrix_power(matrix, n)) for n in range(1, count + 1)]


def _monomial_growth(sigma: MonomialAutomorphism) -> GrowthData:
    rho = spectral_radius(sigma.matrix)
    if rho.is_one():
        quasi_unipotent, certificate = is_quasi_unipotent(sigma.matrix)
        if not quasi_unipotent:
            raise AssertionError("Spectral radius 1 without a cyclotomic certificate for %r" % (sigma.matrix,))
        return GrowthData(rho, certificate.nilpotency_index - 1, certificate, lattice_proxy=True)
    certified = rho
    while certified.lo <= 1:
        certified = certified.refine((certified.hi - certified.lo) / 2)
    j = _dominant_block_size(sigma.matrix, rho) - 1
    return GrowthData(certified, j, DominantRootCertificate(certified), lattice_proxy=True)


def degree_sequence(sigma: PlaneAutomorphism, count: int, cap: int = DEGREE_EXPANSION_CAP) -> List[int]:
    """
    deg(sigma^n) for n = 1..count, stopping early once the degree exceeds ``cap``.
    """
    degrees = []
    pair = sigma.pair
    for _ in range(count):
        degree = pair_degree(pair)
        degrees.append(degree)
        if degree * sigma.degree > cap:
            break
        pair = compose_pairs(sigma.pair, pair)
    return degrees


def dynamical_degree(sigma: PlaneAutomorphism) -> AlgebraicReal:
    """
    lim deg(sigma^n)^(1/n): 1 for elementary type, the product of the
    elementary degrees of the reduced core for Henon type.
    """
    classification = classify_plane(sigma)
    if not classification.is_henon:
        return AlgebraicReal.from_rational(Fraction(1))
    product = 1
    for degree in classification.degrees:
        product *= degree
    core = classification.core_automorphism()
    observed = degree_sequence(core, 5)
    expected = [product**n for n in range(1, len(observed) + 1)]
    if observed != expected:
        raise AssertionError("Degree sequence %r of the reduced core is not %r" % (observed, expected))
    logger.debug("Dynamical degree %d cross-checked on %d iterates", product, len(observed))
    return AlgebraicReal.from_rational(Fraction(product))


def _plane_growth(sigma: PlaneAutomorphism) -> GrowthData:
    classification = classify_plane(sigma)
    if classification.is_henon:
        rho = dynamical_degree(sigma)
        sequence = tuple(degree_sequence(sigma, 5))
        return GrowthData(rho, 0, DegreeCertificate(classification.kind, classification.degrees, sequence))
    sequence = tuple(degree_sequence(sigma, ELEMENTARY_FIT_DEPTH))
    if len(sequence) < ELEMENTARY_FIT_DEPTH:
        logger.warning("Elementary-type degree sequence was truncated at %d terms", len(sequence))
    # bounded degrees; j = 0 when a triangular change makes the core affine, else j = 1
    elementary = classification.elementary
    j = 0 if elementary is None or is_affine_conjugate(elementary) else 1
    return GrowthData(
        AlgebraicReal.from_rational(Fraction(1)),
        j,
        DegreeCertificate(classification.kind, classification.degrees, sequence),
    )


def growth_data(sigma: Automorphism) -> GrowthData:
    if isinstance(sigma, MonomialAutomorphism):
        return _monomial_growth(sigma)
    if isinstance(sigma, PlaneAutomorphism):
        return _plane_growth(sigma)
    raise UnsupportedFamily("Growth data is not available for %r" % (sigma,))


def growth_type(sigma: Automorphism) -> str:
    return growth_data(sigma).growth_type
