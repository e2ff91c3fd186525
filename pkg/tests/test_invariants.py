from fractions import Fraction
from itertools import product

import sympy
from django.test import TestCase

from oredyn.automorphisms import (
    ElementaryFactor,
    MonomialAutomorphism,
    PlaneAutomorphism,
    W,
    Z,
    fibre_correction,
    henon,
    plane_poly,
)
from oredyn.conf import app_settings
from oredyn.exact import LaurentPoly
from oredyn.exceptions import ResourceCapExceeded, UnsupportedFamily, ValidationError
from oredyn.growth import is_quasi_unipotent
from oredyn.invariants import (
    BRUTE_FORCE_KIND,
    FIBRATION_KIND,
    InvariantWitness,
    base_order,
    bounded_invariant_search,
    invariant_fibration,
    invariant_monomials,
    periodic_divisors,
    verify_witness,
)


def monomial(matrix, coeffs=None):
    return MonomialAutomorphism.from_matrix(matrix, coeffs)


class InvariantMonomialsTest(TestCase):
    def test_hyperbolic_map_has_none(self):
        found = invariant_monomials(monomial([[2, 1], [1, 1]]))

        self.assertEqual(found.basis.rank, 0)
        self.assertFalse(found.has_invariant)
        self.assertEqual(found.coefficient_condition, "no invariant exponents")

    def test_shear(self):
        found = invariant_monomials(monomial([[1, 1], [0, 1]]))

        self.assertEqual(list(found.basis), [(1, 0)])
        self.assertEqual(found.invariant_basis, ((1, 0),))
        self.assertEqual(found.coefficient_condition, "trivial")
        self.assertEqual(found.to_json()["witnesses"][0]["function"], "u")

    def test_coefficient_condition_fails(self):
        found = invariant_monomials(monomial([[1, 1], [0, 1]], [2, 1]))

        self.assertFalse(found.has_invariant)
        self.assertEqual(found.coefficient_condition, "fails")
        self.assertEqual(found.semi_invariants()[0].eigenvalue, Fraction(2))

    def test_coefficient_condition_on_sublattice(self):
        found = invariant_monomials(monomial([[1, 1], [0, 1]], [-1, 1]))

        self.assertEqual(found.invariant_basis, ((2, 0),))
        self.assertEqual(found.coefficient_condition, "satisfied on a sublattice")

    def test_swap_needs_second_power(self):
        swap = monomial([[0, 1], [1, 0]])

        self.assertEqual(invariant_monomials(swap, 1).invariant_basis, ((1, 1),))
        self.assertEqual(invariant_monomials(swap, 2).basis.rank, 2)

    def test_rejects_plane_maps(self):
        with self.assertRaises(UnsupportedFamily):
            invariant_monomials(henon([0, 0, 1]))

    def test_rejects_bad_period(self):
        with self.assertRaises(ValidationError):
            invariant_monomials(monomial([[1, 0], [0, 1]]), 0)


class BoundedSearchTest(TestCase):
    def test_identity(self):
        witnesses = bounded_invariant_search(monomial([[1, 0], [0, 1]]), 1)

        self.assertEqual(len(witnesses), 8)
        self.assertTrue(all(w.kind == BRUTE_FORCE_KIND for w in witnesses))

    def test_hyperbolic_map(self):
        self.assertEqual(bounded_invariant_search(monomial([[2, 1], [1, 1]]), 2), [])

    def test_swap(self):
        sigma = monomial([[0, 1], [1, 0]])
        witnesses = bounded_invariant_search(sigma, 1)

        self.assertTrue(witnesses)
        self.assertTrue(all(verify_witness(sigma, w) for w in witnesses))

    def test_plane_translation(self):
        sigma = PlaneAutomorphism.from_pair(Z + 1, W)
        witnesses = bounded_invariant_search(sigma, 1)

        self.assertEqual([str(w) for w in witnesses], ["w"])

    def test_henon_has_no_low_degree_invariant(self):
        self.assertEqual(bounded_invariant_search(henon([1, 0, 1]), 2), [])

    def test_henon_square_has_no_cubic_invariant(self):
        self.assertEqual(bounded_invariant_search(henon([1, 0, 1]), 3, 2), [])

    def test_coefficient_space_cap(self):
        with app_settings.override(COEFFICIENT_SPACE_CAP=10):
            with self.assertRaises(ResourceCapExceeded):
                bounded_invariant_search(monomial([[1, 0], [0, 1]]), 2)


class SearchAgreementTest(TestCase):
    def test_small_matrices(self):
        for a, b, c, d in product(range(-2, 3), repeat=4):
            if abs(a * d - b * c) != 1:
                continue
            sigma = monomial([[a, b], [c, d]])
            quasi_unipotent, certificate = is_quasi_unipotent(sigma.matrix)
            with self.subTest(matrix=sigma.matrix):
                if quasi_unipotent:
                    # compared at the power k where sigma^k is unipotent
                    found = invariant_monomials(sigma, certificate.k)
                    bound = max(2, min(max(abs(x) for x in vector) for vector in found.invariant_basis))
                    witnesses = bounded_invariant_search(sigma, bound, certificate.k)

                    self.assertTrue(found.has_invariant)
                    self.assertTrue(witnesses)
                    self.assertTrue(all(verify_witness(sigma, w) for w in witnesses))
                else:
                    for m in (1, 2):
                        self.assertFalse(invariant_monomials(sigma, m).has_invariant)
                        self.assertEqual(bounded_invariant_search(sigma, 2, m), [])

    def test_search_finds_more_than_monomials_below_the_unipotent_power(self):
        sigma = monomial([[-2, -1], [1, 0]])
        witnesses = bounded_invariant_search(sigma, 2, 1)

        self.assertEqual(is_quasi_unipotent(sigma.matrix)[1].k, 2)
        self.assertFalse(invariant_monomials(sigma, 1).has_invariant)
        self.assertTrue(invariant_monomials(sigma, 2).has_invariant)
        self.assertTrue(witnesses)
        for witness in witnesses:
            self.assertFalse(witness.numerator.is_monomial())
            self.assertTrue(verify_witness(sigma, witness))


class VerifyWitnessTest(TestCase):
    def test_rejects_constants(self):
        one = LaurentPoly.constant(1, 2)

        self.assertFalse(verify_witness(monomial([[1, 0], [0, 1]]), InvariantWitness(one, one, 1, BRUTE_FORCE_KIND)))

    def test_rejects_non_invariant(self):
        u = LaurentPoly.variable(0, 2)
        witness = InvariantWitness(u, LaurentPoly.constant(1, 2), 1, BRUTE_FORCE_KIND)

        self.assertFalse(verify_witness(monomial([[2, 1], [1, 1]]), witness))


class FibrationTest(TestCase):
    def test_base_order(self):
        self.assertEqual(base_order(Fraction(1), Fraction(0)), 1)
        self.assertEqual(base_order(Fraction(-1), Fraction(3)), 2)
        self.assertIsNone(base_order(Fraction(1), Fraction(1)))
        self.assertIsNone(base_order(Fraction(2), Fraction(0)))

    def test_trivial_base(self):
        report = invariant_fibration(PlaneAutomorphism.from_pair(Z + W**2, W))

        self.assertEqual(report.order, 1)
        self.assertEqual(report.witnesses[0].kind, FIBRATION_KIND)
        self.assertEqual(report.witnesses[0].numerator, plane_poly(W))

    def test_involutive_base(self):
        report = invariant_fibration(PlaneAutomorphism.from_pair(2 * Z + W**2, 1 - W))

        self.assertEqual(report.order, 2)
        self.assertEqual(len(report.witnesses), 2)

    def test_translated_base_has_cubic_invariant(self):
        sigma = PlaneAutomorphism.from_pair(Z + W**2, W + 1)
        report = invariant_fibration(sigma)

        self.assertIsNone(report.order)
        self.assertTrue(report.has_invariant)
        (witness,) = report.witnesses
        self.assertEqual(witness.kind, FIBRATION_KIND)
        self.assertEqual(witness.period, 1)
        self.assertEqual(witness.numerator, plane_poly(Z - W**3 / 3 + W**2 / 2 - W / 6))
        self.assertTrue(verify_witness(sigma, witness))

    def test_sign_change_on_translated_base(self):
        sigma = PlaneAutomorphism.from_pair(-Z + W, W + 1)
        report = invariant_fibration(sigma)

        self.assertTrue(report.has_invariant)
        self.assertEqual(report.witnesses[0].numerator, plane_poly((Z - W / 2 + sympy.Rational(1, 4)) ** 2))
        self.assertEqual(report.semi_invariant.eigenvalue, Fraction(-1))
        self.assertTrue(verify_witness(sigma, report.witnesses[0]))

    def test_scaled_base_with_invariant_section(self):
        sigma = PlaneAutomorphism.from_pair(Z + W, 2 * W)
        report = invariant_fibration(sigma)

        self.assertEqual(report.witnesses[0].numerator, plane_poly(Z - W))
        self.assertEqual(report.semi_invariant.eigenvalue, Fraction(2))

    def test_fibre_correction(self):
        self.assertEqual(
            fibre_correction(ElementaryFactor(1, 1, 1, (0, 0, 1))), plane_poly(W**3 / 3 - W**2 / 2 + W / 6)
        )
        self.assertEqual(fibre_correction(ElementaryFactor(1, 1, 2, ())), plane_poly(0))
        self.assertIsNone(fibre_correction(ElementaryFactor(1, 2, 0, (1,))))

    def test_expanding_fibre_action_has_no_claimed_invariant(self):
        report = invariant_fibration(PlaneAutomorphism.from_pair(2 * Z + W**2, W + 1))

        self.assertIsNone(report.order)
        self.assertFalse(report.has_invariant)
        self.assertIn("no invariant function claimed", report.reason)

    def test_semi_invariant(self):
        report = invariant_fibration(PlaneAutomorphism.from_pair(Z + W**2, 2 * W))

        self.assertEqual(report.semi_invariant.eigenvalue, Fraction(2))

    def test_henon_is_rejected(self):
        with self.assertRaises(UnsupportedFamily):
            invariant_fibration(henon([1, 0, 1]))


class PeriodicDivisorsTest(TestCase):
    def test_hyperbolic_map(self):
        divisors = periodic_divisors(monomial([[2, 1], [1, 1]]))

        self.assertEqual(divisors.directions, ())
        self.assertFalse(divisors.all_directions)
        self.assertFalse(divisors.infinite)

    def test_shear(self):
        divisors = periodic_divisors(monomial([[1, 1], [0, 1]]))

        self.assertEqual([d.vector for d in divisors.directions], [(1, 0)])
        self.assertTrue(divisors.infinite)
        self.assertEqual(str(divisors.witness), "u")

    def test_identity_fixes_every_direction(self):
        divisors = periodic_divisors(monomial([[1, 0], [0, 1]]))

        self.assertTrue(divisors.all_directions)
        self.assertTrue(divisors.truncated)
        self.assertEqual(divisors.to_json()["directions"], "all")

    def test_requires_two_torus(self):
        with self.assertRaises(ValidationError):
            periodic_divisors(monomial([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
