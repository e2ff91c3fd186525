"""
Input parsing and command dispatch shared by the ``oredyn`` management
command and the console script.

Input documents are JSON objects::

    {"family": "monomial", "matrix": [[2, 1], [1, 1]], "coeffs": ["1", "1"]}
    {"family": "plane_word", "word": [{"type": "henon", "p": "z^2 + 1", "a": "1"}]}
    {"family": "plane_poly", "f": "z^2 + 1 - w", "g": "z"}

with optional ``options`` (``depth``, ``degree_bound``, ``period_cap``,
``torsion_bound``), ``point`` and ``steps`` for orbits, and ``polygon`` for
GK profiles. Polynomials use ``+ - * / ^`` (or ``**``), integers and the
variables ``z`` and ``w``.
"""
import json
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from oredyn.automorphisms import (
    SWAP,
    W,
    Z,
    AffineFactor,
    Automorphism,
    ElementaryFactor,
    MonomialAutomorphism,
    PlaneAutomorphism,
    classify_plane,
)
from oredyn.conf import app_settings, validate_caps
from oredyn.dynamics import classify_orbits, orbit, periodic_orbits, periodic_points
from oredyn.engine import FIELD_HYPOTHESIS, analyze_T, analyze_U
from oredyn.exact import to_fraction
from oredyn.exceptions import UnsupportedFamily, ValidationError
from oredyn.growth import degree_sequence, growth_data, norm_sequence
from oredyn.invariants import bounded_invariant_search, invariant_fibration, invariant_monomials, periodic_divisors
from oredyn.ore import gk_profile
from oredyn.points import TorsionPoint, format_point, torsion_from_signs
from oredyn.registry import Registry
from oredyn.utils import parse_polynomial

logger = logging.getLogger(__name__)

SCHEMA = "oredyn/1"
FAMILIES = ("monomial", "plane_word", "plane_poly")
OPTION_CAPS = {
    "depth": "DEPTH",
    "degree_bound": "DEGREE_BOUND",
    "period_cap": "PERIOD_CAP",
    "torsion_bound": "TORSION_BOUND",
}
STANDARD_TRIANGLE = [(0, 0), (1, 0), (0, 1)]


@dataclass
class InputSpec:
    family: str
    payload: dict
    sigma: Automorphism
    options: dict = field(default_factory=dict)
    point: Optional[object] = None
    steps: Optional[int] = None
    polygon: Optional[List[tuple]] = None

    @property
    def caps(self) -> dict:
        return {OPTION_CAPS[name]: value for name, value in self.options.items()}

    def to_json(self) -> dict:
        data = {"family": self.family, **self.payload}
        if self.options:
            data["options"] = dict(self.options)
        return data


def _rational(value, what: str):
    if isinstance(value, float):
        raise ValidationError("%s must be an integer or a rational string, got %r" % (what, value))
    return to_fraction(value)


def _coefficients(p, variable) -> tuple:
    """
    Ascending coefficients from a polynomial string or a coefficient list.
    """
    if isinstance(p, str):
        poly = parse_polynomial(p, (variable,))
        return tuple(to_fraction(c) for c in reversed(poly.all_coeffs()))
    if isinstance(p, list):
        return tuple(_rational(c, "Coefficient") for c in p)
    raise ValidationError("Polynomial must be a string or a coefficient list, got %r" % (p,))


def _factor(data) -> List:
    if not isinstance(data, dict):
        raise ValidationError("Word factors must be objects, got %r" % (data,))
    kind = data.get("type")
    if kind == "elementary":
        return [
            ElementaryFactor(
                _rational(data.get("alpha", 1), "alpha"),
                _rational(data.get("beta", 1), "beta"),
                _rational(data.get("gamma", 0), "gamma"),
                _coefficients(data.get("p", []), W),
            )
        ]
    if kind == "affine":
        linear = data.get("linear", [[1, 0], [0, 1]])
        translation = data.get("translation", [0, 0])
        if not isinstance(linear, list) or not isinstance(translation, list) or len(translation) != 2:
            raise ValidationError("Affine factors need a 2x2 'linear' list and a 'translation' pair")
        return [
            AffineFactor(
                tuple(tuple(_rational(x, "Linear entry") for x in row) for row in linear),
                tuple(_rational(x, "Translation") for x in translation),
            )
        ]
    if kind == "henon":
        # (p(z) - a*w, z) = (z, w) -> (-a*z + p(w), w) composed with the swap
        a = _rational(data.get("a", 1), "a")
        if a == 0:
            raise ValidationError("Henon factor needs a nonzero 'a'")
        p = _coefficients(data.get("p", []), Z)
        if len(p) < 3:
            raise ValidationError("Henon factor needs deg p >= 2")
        return [ElementaryFactor(-a, 1, 0, p), SWAP]
    raise ValidationError("Unknown factor type %r" % (kind,))


def _monomial(data: dict) -> MonomialAutomorphism:
    matrix = data.get("matrix")
    if not isinstance(matrix, list) or not matrix or not all(isinstance(row, list) for row in matrix):
        raise ValidationError("Monomial input needs a square integer 'matrix'")
    if any(len(row) != len(matrix) for row in matrix):
        raise ValidationError("Matrix must be square")
    if not all(isinstance(x, int) and not isinstance(x, bool) for row in matrix for x in row):
        raise ValidationError("Matrix entries must be integers")
    coeffs = data.get("coeffs")
    if coeffs is not None:
        if not isinstance(coeffs, list):
            raise ValidationError("'coeffs' must be a list")
        coeffs = [_rational(c, "Coefficient") for c in coeffs]
    return MonomialAutomorphism.from_matrix(matrix, coeffs)


def _point(data, sigma: Automorphism):
    if isinstance(data, dict):
        order, exponents = data.get("order"), data.get("exponents")
        if not isinstance(order, int) or not isinstance(exponents, list):
            raise ValidationError("Torsion points need an integer 'order' and integer 'exponents'")
        if not all(isinstance(e, int) for e in exponents):
            raise ValidationError("Torsion points need an integer 'order' and integer 'exponents'")
        if len(exponents) != sigma.arity:
            raise ValidationError("Point has %d coordinates, expected %d" % (len(exponents), sigma.arity))
        return TorsionPoint(order, tuple(exponents))
    if not isinstance(data, list):
        raise ValidationError("A point is a coordinate list or {'order', 'exponents'}")
    coords = [_rational(c, "Coordinate") for c in data]
    if isinstance(sigma, MonomialAutomorphism) and all(abs(c) == 1 for c in coords):
        return torsion_from_signs(coords)
    return tuple(coords)


def parse_input(text: str) -> InputSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError("Malformed JSON: %s" % e.msg, e.pos)
    if not isinstance(data, dict):
        raise ValidationError("Input must be a JSON object")

    family = data.get("family")
    if family == "monomial":
        sigma = _monomial(data)
        payload = {"matrix": data["matrix"], "coeffs": [str(c) for c in sigma.coeffs]}
    elif family == "plane_word":
        word = data.get("word")
        if not isinstance(word, list):
            raise ValidationError("Plane word input needs a 'word' list")
        sigma = PlaneAutomorphism.from_word([factor for item in word for factor in _factor(item)])
        payload = {"word": word}
    elif family == "plane_poly":
        f, g = data.get("f"), data.get("g")
        if f is None or g is None:
            raise ValidationError("Plane polynomial input needs 'f' and 'g'")
        sigma = PlaneAutomorphism.from_pair(parse_polynomial(f, (Z, W)), parse_polynomial(g, (Z, W)))
        payload = {"f": f, "g": g}
    else:
        raise ValidationError("Unknown family %r; expected one of %s" % (family, ", ".join(FAMILIES)))

    options = data.get("options", {})
    if not isinstance(options, dict):
        raise ValidationError("'options' must be an object")
    unknown = set(options) - set(OPTION_CAPS)
    if unknown:
        raise ValidationError("Unknown options: %s" % ", ".join(sorted(unknown)))
    validate_caps(**{OPTION_CAPS[name]: value for name, value in options.items()})

    parsed = InputSpec(family, payload, sigma, dict(options))
    if "point" in data:
        parsed.point = _point(data["point"], sigma)
    if "steps" in data:
        parsed.steps = validate_caps(STEPS=data["steps"])["STEPS"]
    if "polygon" in data:
        polygon = data["polygon"]
        if not isinstance(polygon, list) or not all(isinstance(p, list) and len(p) == 2 for p in polygon):
            raise ValidationError("'polygon' must be a list of [x, y] vertices")
        parsed.polygon = [tuple(p) for p in polygon]
    return parsed


# Commands

commands = Registry("command")


def _orbit_lists(orbits: Sequence[tuple]) -> List[List[str]]:
    return [[format_point(p) for p in cycle] for cycle in orbits]


@commands.register("growth")
def growth_command(parsed: InputSpec) -> dict:
    sigma = parsed.sigma
    result = growth_data(sigma).to_json()
    if isinstance(sigma, MonomialAutomorphism):
        result["norm_sequence"] = norm_sequence(sigma.matrix, app_settings.DEPTH)
    else:
        result["degree_sequence"] = degree_sequence(sigma, app_settings.DEPTH)
        result["classification"] = classify_plane(sigma).to_json()
    return result


@commands.register("invariants")
def invariants_command(parsed: InputSpec) -> dict:
    sigma = parsed.sigma
    result = {
        "search": [w.to_json() for w in bounded_invariant_search(sigma, app_settings.DEGREE_BOUND)],
        "degree_bound": app_settings.DEGREE_BOUND,
    }
    if isinstance(sigma, MonomialAutomorphism):
        result["monomial"] = [invariant_monomials(sigma, m).to_json() for m in range(1, app_settings.PERIOD_CAP + 1)]
        if sigma.arity == 2:
            result["periodic_divisors"] = periodic_divisors(sigma, app_settings.PERIOD_CAP).to_json()
    else:
        classification = classify_plane(sigma)
        result["classification"] = classification.to_json()
        result["fibration"] = None if classification.is_henon else invariant_fibration(sigma).to_json()
    return result


@commands.register("orbits")
def orbits_command(parsed: InputSpec) -> dict:
    result = {"classification": classify_orbits(parsed.sigma).to_json()}
    if parsed.point is not None:
        result["orbit"] = orbit(parsed.sigma, parsed.point, parsed.steps or app_settings.DEPTH).to_json()
    return result


@commands.register("periodic")
def periodic_command(parsed: InputSpec) -> dict:
    sigma = parsed.sigma
    if isinstance(sigma, MonomialAutomorphism):
        bound = app_settings.TORSION_BOUND
        return {
            "torsion_bound": bound,
            "by_period": [periodic_points(sigma, n, bound).to_json() for n in range(1, app_settings.PERIOD_CAP + 1)],
            "orbits": _orbit_lists(periodic_orbits(sigma, bound)),
        }
    cap = min(app_settings.PERIOD_CAP, app_settings.PLANE_PERIOD_CAP)
    return {
        "by_period": [periodic_points(sigma, n).to_json() for n in range(1, cap + 1)],
        "orbits": _orbit_lists(periodic_orbits(sigma, cap)),
    }


@commands.register("gk")
def gk_command(parsed: InputSpec) -> dict:
    if not isinstance(parsed.sigma, MonomialAutomorphism):
        raise UnsupportedFamily("GK profiles are computed for monomial automorphisms")
    return gk_profile(parsed.sigma, parsed.polygon or STANDARD_TRIANGLE, app_settings.DEPTH).to_json()


@commands.register("analyze-t")
def analyze_t_command(parsed: InputSpec) -> dict:
    return analyze_T(parsed.sigma).to_json()


@commands.register("analyze-u")
def analyze_u_command(parsed: InputSpec) -> dict:
    return analyze_U(parsed.sigma).to_json()


@commands.register("report")
def report_command(parsed: InputSpec) -> dict:
    return {
        "growth": growth_data(parsed.sigma).to_json(),
        "T": analyze_T(parsed.sigma).to_json(),
        "U": analyze_U(parsed.sigma).to_json(),
    }


def run(name: str, parsed: InputSpec, **caps) -> dict:
    """
    Run a command on a parsed input. ``caps`` from the command line override
    the input's own options, which override settings.
    """
    handler = commands.lookup(name)
    if handler is None:
        raise ValidationError("Unknown command %r; expected one of %s" % (name, ", ".join(commands.keys())))
    overrides = {**parsed.caps, **validate_caps(**caps)}
    with app_settings.override(**overrides):
        logger.debug("Running %s on %s with caps %s", name, parsed.sigma, overrides)
        result = handler(parsed)
    return {
        "schema": SCHEMA,
        "command": name,
        "header": FIELD_HYPOTHESIS,
        "input": parsed.to_json(),
        "result": result,
    }
