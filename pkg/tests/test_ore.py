from fractions import Fraction
from itertools import product
from random import Random

from django.test import TestCase

from oredyn.automorphisms import MonomialAutomorphism
from oredyn.exact import LaurentPoly
from oredyn.exceptions import NotInvariant, ResourceCapExceeded, UnsupportedShape, ValidationError
from oredyn.growth import growth_data, is_quasi_unipotent
from oredyn.ore import (
    EXPONENTIAL,
    POLYNOMIAL,
    T_RING,
    U_RING,
    InvariantIdealSpec,
    OreElement,
    PointComponent,
    SubtorusComponent,
    component_from_json,
    filtration_dims,
    gk_profile,
    homogeneous_ideal,
    is_homogeneous_prime,
    ore_inverse_of_t,
    ore_mul,
    t_power,
    third_difference_band,
)

TRIANGLE = [(0, 0), (1, 0), (0, 1)]


def monomial(matrix, coeffs=None):
    return MonomialAutomorphism.from_matrix(matrix, coeffs)


def random_element(rng, arity=2, degrees=(-1, 0, 1)):
    terms = {}
    for degree in degrees:
        coeff = LaurentPoly(
            {tuple(rng.randint(-2, 2) for _ in range(arity)): rng.randint(-3, 3) for _ in range(3)},
            arity,
        )
        terms[degree] = coeff
    return OreElement(terms, arity)


class OreArithmeticTest(TestCase):
    def setUp(self):
        self.sigma = monomial([[2, 1], [1, 1]], [2, -1])
        self.u = LaurentPoly.variable(0, 2)
        self.v = LaurentPoly.variable(1, 2)

    def test_commutation_rule(self):
        t = t_power(1)
        s = OreElement.from_coefficient(self.u)

        self.assertEqual(ore_mul(t, s, self.sigma), OreElement({1: self.sigma.pullback(self.u)}))
        self.assertEqual(ore_mul(s, t, self.sigma), OreElement({1: self.u}))

    def test_t_is_a_unit_in_T(self):
        one = OreElement.from_coefficient(LaurentPoly.constant(1, 2))

        self.assertEqual(ore_mul(t_power(1), ore_inverse_of_t(), self.sigma), one)
        self.assertEqual(ore_mul(ore_inverse_of_t(), t_power(1), self.sigma), one)

    def test_negative_powers_use_the_inverse(self):
        s = OreElement.from_coefficient(self.v)
        product = ore_mul(ore_inverse_of_t(), s, self.sigma)

        self.assertEqual(self.sigma.pullback(product.coefficient(-1)), self.v)

    def test_associativity(self):
        rng = Random(7)
        for _ in range(100):
            a, b, c = (random_element(rng) for _ in range(3))

            self.assertEqual(
                ore_mul(ore_mul(a, b, self.sigma), c, self.sigma),
                ore_mul(a, ore_mul(b, c, self.sigma), self.sigma),
            )

    def test_conjugation_by_t(self):
        rng = Random(3)
        for _ in range(50):
            s = LaurentPoly.monomial((rng.randint(-4, 4), rng.randint(-4, 4)), rng.randint(1, 5))
            shifted = ore_mul(t_power(1), OreElement.from_coefficient(s), self.sigma)
            conjugated = ore_mul(shifted, ore_inverse_of_t(), self.sigma)

            self.assertEqual(conjugated, OreElement.from_coefficient(self.sigma.pullback(s)))

    def test_distributivity(self):
        rng = Random(11)
        a, b, c = (random_element(rng) for _ in range(3))

        self.assertEqual(
            ore_mul(a, b + c, self.sigma),
            ore_mul(a, b, self.sigma) + ore_mul(a, c, self.sigma),
        )

    def test_addition(self):
        a = OreElement({0: self.u, 2: self.v})

        self.assertTrue((a - a).is_zero())
        self.assertEqual(a.degrees(), [0, 2])
        self.assertEqual(str(a), "(v)*t^2 + u")

    def test_ring_membership(self):
        self.assertTrue(t_power(2).in_ring(U_RING))
        self.assertFalse(ore_inverse_of_t().in_ring(U_RING))
        self.assertTrue(ore_inverse_of_t().in_ring(T_RING))

    def test_arity_mismatch(self):
        with self.assertRaises(ValidationError):
            ore_mul(t_power(1, 3), t_power(1), self.sigma)


class ComponentTest(TestCase):
    def test_subtorus_is_sign_normalized(self):
        component = SubtorusComponent((-1, 0), 2)

        self.assertEqual(component.exponent, (1, 0))
        self.assertEqual(component.value, Fraction(1, 2))

    def test_reducible_subtorus_is_rejected(self):
        with self.assertRaises(UnsupportedShape):
            SubtorusComponent((2, 0), 1)
        with self.assertRaises(UnsupportedShape):
            SubtorusComponent((0, 0), 1)

    def test_subtorus_value_must_be_nonzero(self):
        with self.assertRaises(ValidationError):
            SubtorusComponent((1, 0), 0)

    def test_subtorus_image(self):
        sigma = monomial([[0, 1], [1, 0]], [2, 1])

        # sigma(u - 3) = 2v - 3
        self.assertEqual(SubtorusComponent((1, 0), 3).image(sigma), SubtorusComponent((0, 1), Fraction(3, 2)))

    def test_point_image_is_preimage(self):
        sigma = monomial([[2, 1], [1, 1]])
        p = PointComponent((2, 3))
        image = p.image(sigma)

        self.assertEqual(image.coords, (Fraction(2, 3), Fraction(9, 2)))

    def test_from_json(self):
        self.assertEqual(
            component_from_json({"shape": "subtorus", "exponent": [0, 1], "value": "2"}),
            SubtorusComponent((0, 1), 2),
        )
        self.assertEqual(component_from_json({"shape": "point", "coords": ["1/2", 3]}), PointComponent(("1/2", 3)))
        with self.assertRaises(UnsupportedShape):
            component_from_json({"shape": "curve"})


class InvariantIdealTest(TestCase):
    def setUp(self):
        self.shear = monomial([[1, 1], [0, 1]])
        self.swap = monomial([[0, 1], [1, 0]])
        self.u = LaurentPoly.variable(0, 2)
        self.v = LaurentPoly.variable(1, 2)

    def test_invariant_subtorus(self):
        spec = InvariantIdealSpec(self.shear, [SubtorusComponent((1, 0), 3)])
        ideal = homogeneous_ideal(spec)

        self.assertIn(OreElement({-1: self.u - 3, 1: self.u**2 - 9}), ideal)
        self.assertNotIn(OreElement({0: self.u - 2}), ideal)
        self.assertTrue(is_homogeneous_prime(spec))

    def test_permuted_subtori(self):
        spec = InvariantIdealSpec(self.swap, [SubtorusComponent((1, 0), 2), SubtorusComponent((0, 1), 2)])

        self.assertEqual(spec.permutation(), {0: 1, 1: 0})
        self.assertEqual(spec.generators, [(self.u - 2) * (self.v - 2)])
        self.assertEqual(is_homogeneous_prime(spec).cycle, [0, 1])

    def test_prime_cycles(self):
        identity = monomial([[1, 0], [0, 1]])
        axes = [SubtorusComponent((1, 0), 1), SubtorusComponent((0, 1), 1)]

        self.assertTrue(is_homogeneous_prime(InvariantIdealSpec(self.swap, [SubtorusComponent((1, 1), 1)])))
        self.assertTrue(is_homogeneous_prime(InvariantIdealSpec(self.swap, axes)))
        self.assertFalse(is_homogeneous_prime(InvariantIdealSpec(identity, axes)))

    def test_non_invariant(self):
        spec = InvariantIdealSpec(self.swap, [SubtorusComponent((1, 0), 2)])

        self.assertFalse(spec.is_invariant())
        with self.assertRaises(NotInvariant):
            homogeneous_ideal(spec)

    def test_points(self):
        spec = InvariantIdealSpec(self.swap, [PointComponent((2, 3)), PointComponent((3, 2)), PointComponent((1, 1))])
        certificate = is_homogeneous_prime(spec)

        self.assertFalse(certificate)
        self.assertEqual(certificate.cycles, [[0, 1], [2]])
        self.assertTrue(spec.contains((self.u - 1) * (self.v - 1) * (self.u + self.v - 5)))

    def test_ideal_is_two_sided(self):
        rng = Random(23)
        cases = [
            (self.shear, [SubtorusComponent((1, 0), 3)]),
            (self.swap, [SubtorusComponent((1, 0), 2), SubtorusComponent((0, 1), 2)]),
        ]
        for sigma, components in cases:
            spec = InvariantIdealSpec(sigma, components)
            ideal = homogeneous_ideal(spec)
            (generator,) = spec.generators
            for _ in range(10):
                x = OreElement({d: generator * c for d, c in random_element(rng).graded_terms.items()})
                r = random_element(rng)

                self.assertIn(x, ideal)
                self.assertIn(ore_mul(r, x, sigma), ideal)
                self.assertIn(ore_mul(x, r, sigma), ideal)

    def test_rejects_duplicate_components(self):
        with self.assertRaises(ValidationError):
            InvariantIdealSpec(self.swap, [PointComponent((1, 1)), PointComponent((1, 1))])

    def test_rejects_empty_spec(self):
        with self.assertRaises(ValidationError):
            InvariantIdealSpec(self.swap, [])

    def test_membership_checks_ring(self):
        spec = InvariantIdealSpec(self.shear, [SubtorusComponent((1, 0), 3)])
        ideal = homogeneous_ideal(spec, U_RING)

        with self.assertRaises(ValidationError):
            ideal.contains(OreElement({-1: self.u - 3}))

    def test_augmented_family(self):
        spec = InvariantIdealSpec(self.swap, [SubtorusComponent((1, 0), 2)])
        ideal = homogeneous_ideal(spec, U_RING, augmented=True)

        self.assertIn(OreElement({0: self.u - 2, 1: self.v, 3: self.u}), ideal)
        self.assertNotIn(OreElement({0: self.v - 2}), ideal)

    def test_augmented_family_restrictions(self):
        single = InvariantIdealSpec(self.swap, [SubtorusComponent((1, 0), 2)])
        double = InvariantIdealSpec(self.swap, [SubtorusComponent((1, 0), 2), SubtorusComponent((0, 1), 2)])

        with self.assertRaises(ValidationError):
            homogeneous_ideal(single, T_RING, augmented=True)
        with self.assertRaises(UnsupportedShape):
            homogeneous_ideal(double, U_RING, augmented=True)


class GKProfileTest(TestCase):
    def test_identity_is_quadratic(self):
        profile = gk_profile(monomial([[1, 0], [0, 1]]), TRIANGLE, 12)

        self.assertEqual(profile.dims[:3], [3, 6, 10])
        self.assertEqual(profile.dims[-1], 91)
        self.assertEqual(profile.classification, POLYNOMIAL)
        self.assertEqual(profile.fitted_degree, 2)
        self.assertEqual(profile.residuals["doubling_ratio"], ["13/4"])
        self.assertEqual(profile.residuals["third_difference_band"], [True, 0, 0])

    def test_shear_is_cubic(self):
        profile = gk_profile(monomial([[1, 1], [0, 1]]), TRIANGLE, 12)

        self.assertEqual(profile.fitted_degree, 3)

    def test_rotation_is_quadratic(self):
        profile = gk_profile(monomial([[0, -1], [1, 0]]), TRIANGLE, 12)

        self.assertEqual(profile.fitted_degree, 2)

    def test_lorenz_is_exponential(self):
        profile = gk_profile(monomial([[2, 1], [1, 1]]), TRIANGLE, 8)

        self.assertEqual(profile.classification, EXPONENTIAL)
        self.assertGreaterEqual(profile.fitted_base, Fraction(5, 4))
        self.assertIsNone(profile.fitted_degree)
        self.assertFalse(profile.residuals["third_difference_band"][0])

    def test_jordan_is_exponential(self):
        profile = gk_profile(monomial([[0, 1], [1, -1]]), TRIANGLE, 12)

        self.assertEqual(profile.classification, EXPONENTIAL)
        self.assertFalse(profile.residuals["third_difference_band"][0])

    def test_third_difference_band(self):
        self.assertEqual(third_difference_band([n**3 for n in range(12)], 4), (True, 6, 6))
        self.assertEqual(third_difference_band([2**n for n in range(12)], 4), (False, 16, 256))
        self.assertEqual(third_difference_band([1, 2, 4], 1), (True, 0, 0))

    def test_dims_are_increasing(self):
        dims = filtration_dims(monomial([[1, 1], [0, 1]]), TRIANGLE, 6)

        self.assertTrue(all(a < b for a, b in zip(dims, dims[1:])))

    def test_json(self):
        data = gk_profile(monomial([[1, 0], [0, 1]]), TRIANGLE, 4).to_json()

        self.assertEqual(data["classification"]["kind"], POLYNOMIAL)
        self.assertEqual(data["thresholds"]["exponential_ratio"], "5/4")
        self.assertEqual(data["thresholds"]["difference_band"], 2)
        self.assertEqual(data["generator_polytope"], [[0, 0], [1, 0], [0, 1]])

    def test_requires_two_torus(self):
        with self.assertRaises(ValidationError):
            gk_profile(monomial([[1, 0, 0], [0, 1, 0], [0, 0, 1]]), TRIANGLE)

    def test_depth_ceiling(self):
        with self.assertRaises(ResourceCapExceeded):
            gk_profile(monomial([[1, 0], [0, 1]]), TRIANGLE, 41)

    def test_polygon_must_contain_origin(self):
        with self.assertRaises(ValidationError):
            gk_profile(monomial([[1, 0], [0, 1]]), [(1, 0), (2, 0), (1, 1)])


class GKAgreementTest(TestCase):
    def test_small_matrices(self):
        for a, b, c, d in product(range(-2, 3), repeat=4):
            if abs(a * d - b * c) != 1:
                continue
            with self.subTest(matrix=((a, b), (c, d))):
                sigma = monomial([[a, b], [c, d]])
                profile = gk_profile(sigma, TRIANGLE, 12)
                quasi_unipotent, _ = is_quasi_unipotent(sigma.matrix)

                self.assertEqual(profile.classification == POLYNOMIAL, quasi_unipotent)
                if quasi_unipotent:
                    self.assertLessEqual(profile.fitted_degree, growth_data(sigma).j + 2)

    def test_shear_profile_starts_with_brute_force_counts(self):
        self.assertEqual(filtration_dims(monomial([[1, 1], [0, 1]]), TRIANGLE, 2), [3, 7])
