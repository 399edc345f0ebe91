"""Oriented inversive spheres, their 5-coordinate vectors, and the
inversive product.

Coordinate vectors are rows; Moebius matrices act on the right of rows.
A sphere with center c, oriented radius r and bend b = 1/r has coordinates
(a, b, b*cx, b*cy, b*cz) where the augmented bend is a = b*|c|^2 - 1/b.
A plane n.x = h with unit normal n has coordinates (2h, 0, nx, ny, nz).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Tuple, Union

from .ring import Mat, ONE, QSqrt2, ZERO, Scalar


class Coord5(NamedTuple):
    """Inversive coordinate row (a, b, xhat, yhat, zhat)."""

    a: QSqrt2
    b: QSqrt2
    xhat: QSqrt2
    yhat: QSqrt2
    zhat: QSqrt2

    @classmethod
    def of(cls, *vals: Scalar) -> "Coord5":
        if len(vals) == 1 and isinstance(vals[0], (tuple, list)):
            vals = tuple(vals[0])
        if len(vals) != 5:
            raise ValueError("Coord5 needs exactly five entries")
        return cls(*(QSqrt2.coerce(v) for v in vals))

    def __add__(self, other: "Coord5") -> "Coord5":
        return Coord5(*(x + y for x, y in zip(self, other)))

    def __sub__(self, other: "Coord5") -> "Coord5":
        return Coord5(*(x - y for x, y in zip(self, other)))

    def scale(self, k: Scalar) -> "Coord5":
        k = QSqrt2.coerce(k)
        return Coord5(*(k * x for x in self))

    def apply(self, m: Mat) -> "Coord5":
        """Right action of a 5x5 matrix on this row vector."""
        if m.shape != (5, 5):
            raise ValueError("Coord5 transforms under 5x5 matrices")
        return Coord5(*(
            sum((self[i] * m[i, j] for i in range(5)), ZERO) for j in range(5)
        ))

    def serialize(self) -> Tuple[str, ...]:
        return tuple(str(x) for x in self)


@dataclass(frozen=True)
class HonestSphere:
    """A genuine sphere; ``oriented_radius`` < 0 means the orienting
    region is the ball-complement."""

    center: Tuple[QSqrt2, QSqrt2, QSqrt2]
    oriented_radius: QSqrt2

    def __post_init__(self):
        object.__setattr__(self, "center",
                           tuple(QSqrt2.coerce(c) for c in self.center))
        object.__setattr__(self, "oriented_radius",
                           QSqrt2.coerce(self.oriented_radius))
        if not self.oriented_radius:
            raise ValueError("honest sphere needs a nonzero oriented radius")

    @property
    def bend(self) -> QSqrt2:
        return self.oriented_radius.inverse()


@dataclass(frozen=True)
class PlanarSphere:
    """A plane n.x = h with exactly unit normal, oriented along n."""

    unit_normal: Tuple[QSqrt2, QSqrt2, QSqrt2]
    offset: QSqrt2

    def __post_init__(self):
        n = tuple(QSqrt2.coerce(c) for c in self.unit_normal)
        object.__setattr__(self, "unit_normal", n)
        object.__setattr__(self, "offset", QSqrt2.coerce(self.offset))
        if sum((c * c for c in n), ZERO) != ONE:
            raise ValueError("planar sphere needs an exactly unit normal")

    @property
    def bend(self) -> QSqrt2:
        return ZERO


OrientedSphere = Union[HonestSphere, PlanarSphere]


@dataclass(frozen=True)
class PairRelation:
    """How two distinct oriented spheres sit relative to each other.

    ``kind`` is one of intersecting / tangent_nested / tangent_external /
    disjoint_nested / disjoint_external.  ``value`` carries cos(theta) for
    intersecting pairs and cosh(delta) > 1 for disjoint pairs.
    """

    kind: str
    value: Optional[QSqrt2] = None

    @property
    def tangent(self) -> bool:
        return self.kind.startswith("tangent")

    @property
    def disjoint(self) -> bool:
        return self.kind.startswith("disjoint")

    @property
    def nested(self) -> bool:
        return self.kind.endswith("_nested")


_MINUS_HALF = QSqrt2(Fraction(-1, 2))
_HALF = QSqrt2(Fraction(1, 2))

Q_SIGMA = Mat.from_rows([
    [0, _MINUS_HALF, 0, 0, 0],
    [_MINUS_HALF, 0, 0, 0, 0],
    [0, 0, 1, 0, 0],
    [0, 0, 0, 1, 0],
    [0, 0, 0, 0, 1],
])

Q_WILKER = Mat.from_rows([
    [0, -4, 0, 0, 0],
    [-4, 0, 0, 0, 0],
    [0, 0, 2, 0, 0],
    [0, 0, 0, 2, 0],
    [0, 0, 0, 0, 2],
])


def inversive_product(u: Coord5, w: Coord5) -> QSqrt2:
    """The bilinear form u Q_Sigma w^T, expanded for speed."""
    spatial = u.xhat * w.xhat + u.yhat * w.yhat + u.zhat * w.zhat
    return spatial - (u.a * w.b + u.b * w.a) * _HALF


def coords_from_sphere(s: OrientedSphere) -> Coord5:
    if isinstance(s, HonestSphere):
        b = s.bend
        cx, cy, cz = s.center
        norm2 = cx * cx + cy * cy + cz * cz
        a = b * norm2 - s.oriented_radius
        return Coord5(a, b, b * cx, b * cy, b * cz)
    if isinstance(s, PlanarSphere):
        nx, ny, nz = s.unit_normal
        return Coord5(s.offset * 2, ZERO, nx, ny, nz)
    raise TypeError(f"not an oriented sphere: {s!r}")


def sphere_from_coords(v: Coord5) -> OrientedSphere:
    if inversive_product(v, v) != ONE:
        raise ValueError("coordinate vector is not normalized: Sigma(v,v) != 1")
    if v.b:
        binv = v.b.inverse()
        return HonestSphere(
            center=(v.xhat * binv, v.yhat * binv, v.zhat * binv),
            oriented_radius=binv,
        )
    return PlanarSphere(unit_normal=(v.xhat, v.yhat, v.zhat), offset=v.a * _HALF)


def classify_pair(u: Coord5, w: Coord5) -> PairRelation:
    if inversive_product(u, u) != ONE or inversive_product(w, w) != ONE:
        raise ValueError("classify_pair needs normalized coordinate vectors")
    if u == w:
        raise ValueError("classify_pair needs two distinct spheres")
    s = inversive_product(u, w)
    if s == ONE:
        return PairRelation("tangent_nested")
    if s == -ONE:
        return PairRelation("tangent_external")
    if -ONE < s < ONE:
        return PairRelation("intersecting", value=s)
    if s > ONE:
        return PairRelation("disjoint_nested", value=s)
    return PairRelation("disjoint_external", value=-s)


def mobius_inversion() -> Mat:
    """Inversion about the unit sphere: swaps bend and augmented bend."""
    return Mat.from_rows([
        [0, 1, 0, 0, 0],
        [1, 0, 0, 0, 0],
        [0, 0, 1, 0, 0],
        [0, 0, 0, 1, 0],
        [0, 0, 0, 0, 1],
    ])


def mobius_rescale(t: Scalar) -> Mat:
    t = QSqrt2.coerce(t)
    if not t:
        raise ValueError("rescale factor must be nonzero")
    return Mat.from_rows([
        [t, 0, 0, 0, 0],
        [0, t.inverse(), 0, 0, 0],
        [0, 0, 1, 0, 0],
        [0, 0, 0, 1, 0],
        [0, 0, 0, 0, 1],
    ])


def mobius_translate(x: Scalar, y: Scalar, z: Scalar) -> Mat:
    x, y, z = QSqrt2.coerce(x), QSqrt2.coerce(y), QSqrt2.coerce(z)
    n2 = x * x + y * y + z * z
    return Mat.from_rows([
        [1, 0, 0, 0, 0],
        [n2, 1, x, y, z],
        [x * 2, 0, 1, 0, 0],
        [y * 2, 0, 0, 1, 0],
        [z * 2, 0, 0, 0, 1],
    ])


def mobius_rotate(axis, cos_theta: Scalar, sin_theta: Scalar) -> Mat:
    """Rotation about a unit axis, restricted to exactly representable
    (cos, sin) pairs in Q[sqrt2]."""
    x, y, z = (QSqrt2.coerce(c) for c in axis)
    c, s = QSqrt2.coerce(cos_theta), QSqrt2.coerce(sin_theta)
    if x * x + y * y + z * z != ONE:
        raise ValueError("rotation axis must be an exactly unit vector")
    if c * c + s * s != ONE:
        raise ValueError("non-exact rotation: cos^2 + sin^2 != 1")
    k = ONE - c
    r = [
        [x * x * k + c, x * y * k + z * s, x * z * k - y * s],
        [y * x * k - z * s, y * y * k + c, y * z * k + x * s],
        [z * x * k + y * s, z * y * k - x * s, z * z * k + c],
    ]
    rows = [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]]
    for i in range(3):
        rows.append([0, 0] + r[i])
    return Mat.from_rows(rows)


def verify_mobius_invariance(m: Mat) -> bool:
    """Exact check of M Q_Sigma M^T = Q_Sigma and M^T Q_W M = Q_W."""
    if m.shape != (5, 5):
        raise ValueError("expected a 5x5 matrix")
    mt = m.transpose()
    return m * Q_SIGMA * mt == Q_SIGMA and mt * Q_WILKER * m == Q_WILKER
