from contextlib import contextmanager

from asgiref.local import Local
from django.conf import settings

from oredyn.exceptions import ResourceCapExceeded, ValidationError

SETTINGS_KEY = "OREDYN"

DEFAULT_DEPTH = 12
DEFAULT_DEGREE_BOUND = 2
DEFAULT_PERIOD_CAP = 6
DEFAULT_TORSION_BOUND = 6
DEFAULT_COEFFICIENT_SPACE_CAP = 400
DEFAULT_PLANE_PERIOD_CAP = 3
DEFAULT_ENUMERATION_CAP = 64
DEFAULT_REPORT_FORMATTER = "oredyn.formatter.ReportFormatter"
DEFAULT_MAX_WORKERS = 4

# Hard ceilings that command line overrides may not exceed
CEILINGS = {
    "DEPTH": 40,
    "DEGREE_BOUND": 4,
    "PERIOD_CAP": 12,
    "TORSION_BOUND": 24,
}


class AppSettings:
    def __init__(self):
        self._overrides = Local()

    @property
    def settings(self):
        merged = dict(getattr(settings, SETTINGS_KEY, {}))
        merged.update(getattr(self._overrides, "values", {}))
        return merged

    @contextmanager
    def override(self, **values):
        """
        Override settings for the current thread, e.g. from command line caps.
        """
        previous = getattr(self._overrides, "values", {})
        self._overrides.values = {**previous, **{key: value for key, value in values.items() if value is not None}}
        try:
            yield self
        finally:
            self._overrides.values = previous

    @property
    def DEPTH(self):
        return self.settings.get("DEPTH", DEFAULT_DEPTH)

    @property
    def DEGREE_BOUND(self):
        return self.settings.get("DEGREE_BOUND", DEFAULT_DEGREE_BOUND)

    @property
    def PERIOD_CAP(self):
        return self.settings.get("PERIOD_CAP", DEFAULT_PERIOD_CAP)

    @property
    def TORSION_BOUND(self):
        return self.settings.get("TORSION_BOUND", DEFAULT_TORSION_BOUND)

    @property
    def COEFFICIENT_SPACE_CAP(self):
        return self.settings.get("COEFFICIENT_SPACE_CAP", DEFAULT_COEFFICIENT_SPACE_CAP)

    @property
    def PLANE_PERIOD_CAP(self):
        return self.settings.get("PLANE_PERIOD_CAP", DEFAULT_PLANE_PERIOD_CAP)

    @property
    def ENUMERATION_CAP(self):
        return self.settings.get("ENUMERATION_CAP", DEFAULT_ENUMERATION_CAP)

    @property
    def REPORT_FORMATTER(self):
        return self.settings.get("REPORT_FORMATTER", DEFAULT_REPORT_FORMATTER)

    @property
    def MAX_WORKERS(self):
        return self.settings.get("MAX_WORKERS", DEFAULT_MAX_WORKERS)


app_settings = AppSettings()


def validate_caps(**caps) -> dict:
    """
    Check requested caps against the ceilings; returns the caps that were given.
    """
    given = {}
    for name, value in caps.items():
        if value is None:
            continue
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise ValidationError("%s must be a positive integer, got %r" % (name, value))
        if name in CEILINGS and value > CEILINGS[name]:
            raise ResourceCapExceeded(name, value, CEILINGS[name])
        given[name] = value
    return given
