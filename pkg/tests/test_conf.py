from threading import Thread

from django.test import TestCase, override_settings

from oredyn.conf import CEILINGS, DEFAULT_PLANE_PERIOD_CAP, app_settings, validate_caps
from oredyn.exceptions import ResourceCapExceeded, ValidationError


class AppSettingsTest(TestCase):
    def test_reads_django_settings(self):
        self.assertEqual(app_settings.DEPTH, 12)
        self.assertEqual(app_settings.PLANE_PERIOD_CAP, DEFAULT_PLANE_PERIOD_CAP)

    @override_settings(OREDYN={"DEPTH": 7})
    def test_follows_settings_overrides(self):
        self.assertEqual(app_settings.DEPTH, 7)
        self.assertEqual(app_settings.PERIOD_CAP, 6)

    def test_override_is_scoped(self):
        with app_settings.override(DEPTH=5, PERIOD_CAP=None):
            self.assertEqual(app_settings.DEPTH, 5)
            self.assertEqual(app_settings.PERIOD_CAP, 6)
            with app_settings.override(PERIOD_CAP=3):
                self.assertEqual(app_settings.DEPTH, 5)
                self.assertEqual(app_settings.PERIOD_CAP, 3)
            self.assertEqual(app_settings.PERIOD_CAP, 6)

        self.assertEqual(app_settings.DEPTH, 12)

    def test_override_is_thread_local(self):
        seen = []

        def read():
            seen.append(app_settings.DEPTH)

        with app_settings.override(DEPTH=5):
            thread = Thread(target=read)
            thread.start()
            thread.join()

        self.assertEqual(seen, [12])


class ValidateCapsTest(TestCase):
    def test_returns_given_caps(self):
        self.assertEqual(
            validate_caps(DEPTH=10, PERIOD_CAP=None),
            {"DEPTH": 10},
        )

    def test_rejects_non_positive_values(self):
        for value in (0, -3, "4", 2.5, True):
            with self.assertRaises(ValidationError):
                validate_caps(DEPTH=value)

    def test_rejects_values_over_the_ceiling(self):
        with self.assertRaises(ResourceCapExceeded) as cm:
            validate_caps(TORSION_BOUND=CEILINGS["TORSION_BOUND"] + 1)

        self.assertEqual(cm.exception.cap_name, "TORSION_BOUND")
        self.assertEqual(cm.exception.limit, CEILINGS["TORSION_BOUND"])
