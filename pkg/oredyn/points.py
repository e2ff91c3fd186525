from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence, Tuple, Union

from oredyn.exact import format_fraction, to_fraction
from oredyn.exceptions import ValidationError


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class TorsionPoint:
    """
    A point of the torus whose i-th coordinate is zeta_d ** exponents[i].
    """

    order: int
    exponents: Tuple[int, ...]

    def __post_init__(self):
        if self.order < 1:
            raise ValidationError("Torsion order must be positive, got %d" % self.order)
        residues = tuple(e % self.order for e in self.exponents)
        divisor = self.order
        for e in residues:
            divisor = gcd(divisor, e)
        object.__setattr__(self, "order", self.order // divisor)
        object.__setattr__(self, "exponents", tuple(e // divisor for e in residues))

    @property
    def arity(self) -> int:
        return len(self.exponents)

    def lift(self, order: int) -> Tuple[int, ...]:
        """
        Exponent residues with respect to a multiple of the stored order.
        """
        if order % self.order:
            raise ValueError("%d is not a multiple of %d" % (order, self.order))
        factor = order // self.order
        return tuple(e * factor for e in self.exponents)

    def __str__(self):
        coords = []
        for e in self.exponents:
            if e == 0:
                coords.append("1")
            elif 2 * e == self.order:
                coords.append("-1")
            else:
                coords.append("zeta_%d^%d" % (self.order, e))
        return "(%s)" % ", ".join(coords)

    def to_json(self):
        return {"order": self.order, "exponents": list(self.exponents), "coords": str(self)}


RationalPoint = Tuple[Fraction, ...]
Point = Union[TorsionPoint, RationalPoint]


def rational_point(coords: Sequence) -> RationalPoint:
    return tuple(to_fraction(c) for c in coords)


def torsion_from_signs(coords: Sequence) -> TorsionPoint:
    """
    Rational points with coordinates +-1 as order-2 torsion points.
    """
    exponents = []
    for c in coords:
        c = to_fraction(c)
        if c == 1:
            exponents.append(0)
        elif c == -1:
            exponents.append(1)
        else:
            raise ValidationError("%s is not a root of unity in Q" % format_fraction(c))
    return TorsionPoint(2, tuple(exponents))


def format_point(point: Point) -> str:
    if isinstance(point, TorsionPoint):
        return str(point)
    return "(%s)" % ", ".join(format_fraction(c) for c in point)


def point_to_json(point: Point):
    if isinstance(point, TorsionPoint):
        return point.to_json()
    return [format_fraction(c) for c in point]
