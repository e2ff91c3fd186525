from django.test import TestCase

from oredyn.registry import AlreadyRegistered, NotRegistered, Registry


class RegistryTest(TestCase):
    def setUp(self):
        self.registry = Registry("rule")

    def test_register(self):
        self.registry.register("FINITE_GROWTH_DM", 1)

        self.assertEqual(self.registry.get("FINITE_GROWTH_DM"), 1)
        self.assertTrue("FINITE_GROWTH_DM" in self.registry)
        self.assertEqual(len(self.registry), 1)

    def test_register_as_decorator(self):
        @self.registry.register("growth")
        def growth(spec):
            return spec

        self.assertIs(self.registry.get("growth"), growth)
        self.assertEqual(growth(3), 3)

    def test_register_raises_if_already_registered(self):
        self.registry.register("FINITE_GROWTH_DM", 1)

        with self.assertRaisesMessage(AlreadyRegistered, 'The rule "FINITE_GROWTH_DM" is already registered'):
            self.registry.register("FINITE_GROWTH_DM", 2)

    def test_get_raises_if_not_registered(self):
        with self.assertRaisesMessage(NotRegistered, 'The rule "MISSING" is not registered'):
            self.registry.get("MISSING")

    def test_lookup_returns_default(self):
        self.assertIsNone(self.registry.lookup("MISSING"))
        self.assertEqual(self.registry.lookup("MISSING", {}), {})

    def test_unregister(self):
        self.registry.register("FINITE_GROWTH_DM", 1)
        self.registry.unregister("FINITE_GROWTH_DM")

        with self.assertRaises(NotRegistered):
            self.registry.get("FINITE_GROWTH_DM")
        with self.assertRaises(NotRegistered):
            self.registry.unregister("FINITE_GROWTH_DM")

    def test_keeps_registration_order(self):
        for key, value in (("b", 2), ("a", 1), ("c", 3)):
            self.registry.register(key, value)

        self.assertEqual(self.registry.keys(), ["b", "a", "c"])
        self.assertEqual(self.registry.filter(lambda value: value > 1), [2, 3])

    def test_all_is_a_copy(self):
        self.registry.register("a", 1)
        self.registry.all()["b"] = 2

        self.assertEqual(self.registry.all(), {"a": 1})

    def test_clear(self):
        self.registry.register("a", 1)
        self.registry.clear()

        self.assertEqual(self.registry.all(), {})
