from fractions import Fraction
from itertools import product

from django.test import TestCase

from oredyn.automorphisms import (
    ElementaryFactor,
    MonomialAutomorphism,
    PlaneAutomorphism,
    W,
    Z,
    henon,
    inverse,
    is_affine_conjugate,
)
from oredyn.growth import (
    FINITE,
    INFINITE,
    candidate_orders,
    degree_sequence,
    dynamical_degree,
    growth_data,
    growth_type,
    is_quasi_unipotent,
    norm_sequence,
)


def monomial(matrix, coeffs=None):
    return MonomialAutomorphism.from_matrix(matrix, coeffs)


class MonomialGrowthTest(TestCase):
    def test_identity(self):
        growth = growth_data(monomial([[1, 0], [0, 1]]))

        self.assertEqual(growth.growth_type, FINITE)
        self.assertEqual(growth.j, 0)
        self.assertEqual(growth.certificate.k, 1)
        self.assertTrue(growth.lattice_proxy)

    def test_shear(self):
        growth = growth_data(monomial([[1, 1], [0, 1]]))

        self.assertEqual(growth.growth_type, FINITE)
        self.assertEqual(growth.j, 1)
        self.assertEqual(growth.certificate.to_json(), {"kind": "cyclotomic", "k": 1, "nilpotency_index": 2})

    def test_swap_needs_second_power(self):
        growth = growth_data(monomial([[0, 1], [1, 0]]))

        self.assertEqual(growth.growth_type, FINITE)
        self.assertEqual(growth.certificate.k, 2)
        self.assertEqual(growth.j, 0)

    def test_order_six_rotation(self):
        quasi_unipotent, certificate = is_quasi_unipotent(((0, -1), (1, 1)))

        self.assertTrue(quasi_unipotent)
        self.assertEqual(certificate.k, 6)

    def test_lorenz(self):
        growth = growth_data(monomial([[2, 1], [1, 1]]))

        self.assertEqual(growth.growth_type, INFINITE)
        self.assertEqual(growth.j, 0)
        self.assertGreater(growth.rho.lo, 1)
        self.assertAlmostEqual(float(growth.rho), 2.618034, places=5)
        self.assertEqual(growth.to_json()["certificate"]["kind"], "dominant_root")

    def test_jordan(self):
        growth = growth_data(monomial([[0, 1], [1, -1]]))

        self.assertEqual(growth.growth_type, INFINITE)
        self.assertAlmostEqual(float(growth.rho), 1.618034, places=5)

    def test_coefficients_do_not_change_growth(self):
        self.assertEqual(growth_type(monomial([[1, 1], [0, 1]], [2, "-1/3"])), FINITE)

    def test_quasi_unipotent_small_matrices(self):
        # (det, trace) of the integer 2x2 matrices whose eigenvalues are roots of unity, with the least k
        orders = {(1, 2): 1, (1, -2): 2, (-1, 0): 2, (1, -1): 3, (1, 0): 4, (1, 1): 6}
        for a, b, c, d in product(range(-3, 4), repeat=4):
            matrix = ((a, b), (c, d))
            with self.subTest(matrix=matrix):
                quasi_unipotent, certificate = is_quasi_unipotent(matrix)
                k = orders.get((a * d - b * c, a + d))

                self.assertEqual(quasi_unipotent, k is not None)
                if k is not None:
                    self.assertEqual(certificate.k, k)

    def test_candidate_orders(self):
        self.assertEqual(candidate_orders(1), (1, 2))
        self.assertTrue({1, 2, 3, 4, 6}.issubset(candidate_orders(2)))

    def test_norm_sequence(self):
        self.assertEqual(norm_sequence(((1, 1), (0, 1)), 4), [2, 3, 4, 5])
        self.assertEqual(norm_sequence(((2, 1), (1, 1)), 3), [3, 8, 21])


class PlaneGrowthTest(TestCase):
    def test_henon(self):
        sigma = henon([1, 0, 1], 1)
        growth = growth_data(sigma)

        self.assertEqual(growth.growth_type, INFINITE)
        self.assertEqual(growth.rho.rational_value(), Fraction(2))
        self.assertFalse(growth.lattice_proxy)
        self.assertEqual(growth.to_json()["certificate"]["sequence"], [2, 4, 8, 16, 32])

    def test_dynamical_degree_of_composite(self):
        sigma = PlaneAutomorphism.from_word(list(henon([0, 0, 1]).word) + list(henon([0, 0, 0, 1]).word))

        self.assertEqual(dynamical_degree(sigma).rational_value(), Fraction(6))

    def test_inverse_has_the_same_dynamical_degree(self):
        composite = PlaneAutomorphism.from_word(list(henon([0, 0, 1]).word) + list(henon([0, 0, 0, 1]).word))
        for sigma in (henon([1, 0, 1]), henon([0, 1, 1], 2), henon([2, 0, 0, -1], 3), composite):
            with self.subTest(sigma=str(sigma)):
                self.assertEqual(
                    dynamical_degree(inverse(sigma)).rational_value(), dynamical_degree(sigma).rational_value()
                )

    def test_elementary(self):
        sigma = PlaneAutomorphism.from_pair(Z + W**2, W + 1)
        growth = growth_data(sigma)

        self.assertEqual(growth.growth_type, FINITE)
        self.assertEqual(growth.j, 0)
        self.assertEqual(degree_sequence(sigma, 4), [2, 2, 2, 2])

    def test_elementary_jordan_index(self):
        for pair, j in [
            ((Z + W**2, W), 1),
            ((4 * Z + W**2, 2 * W), 1),
            ((-Z + W**2, W), 0),
            ((Z + W**2, 2 * W), 0),
            ((Z + W, W + 1), 0),
        ]:
            with self.subTest(pair=pair):
                self.assertEqual(growth_data(PlaneAutomorphism.from_pair(*pair)).j, j)

    def test_affine_conjugacy(self):
        self.assertTrue(is_affine_conjugate(ElementaryFactor(1, 1, 1, (0, 0, 1))))
        self.assertFalse(is_affine_conjugate(ElementaryFactor(1, 1, 0, (0, 0, 1))))
        self.assertTrue(is_affine_conjugate(ElementaryFactor(3, 1, 0, (5, 7))))

    def test_degree_sequence_stops_at_cap(self):
        self.assertEqual(degree_sequence(henon([1, 0, 1]), 10, cap=16), [2, 4, 8, 16])
