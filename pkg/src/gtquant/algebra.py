"""Group law and Lie algebra of R^2 x| (SO(2) x R+), its universal cover, and H5.

A group element ``(u, theta, lam)`` acts on the plane as the affine map
``y -> lam**-1 A_theta y + u``; composing those maps gives the product

    (u, th, lam)(u', th', lam') = (u + lam**-1 A_th u', th + th', lam lam').

An algebra element ``(b1, b2, theta, r)`` is the generator whose linear part is
``-r I + theta J`` (``J`` the 90 degree rotation generator) and whose
translation part is ``b``.  Because ``span{I, J}`` is a copy of the complex
numbers, the exponential is evaluated with complex arithmetic:
``u = phi1(z) * (b1 + i b2)`` with ``z = -r + i theta`` and
``phi1(z) = (e^z - 1) / z``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ATOL",
    "AlgebraElement",
    "GroupElement",
    "HeisenbergAlgebraElement",
    "HeisenbergGroupElement",
    "Variant",
    "bch_commutator_check",
    "bracket",
    "cocycle",
    "exp",
    "group_distance",
    "heis_bracket",
    "heis_distance",
    "heis_exp",
    "heis_inverse",
    "heis_product",
    "identity",
    "inverse",
    "phi1",
    "product",
    "project",
    "rotation_matrix",
]

#: Default absolute tolerance for component comparisons.
ATOL = 1e-12

_TWO_PI = 2.0 * math.pi
_SERIES_RADIUS = 1e-4
_SERIES_TERMS = 12


class Variant(str, enum.Enum):
    """Which group an element lives in: the canonical group or its universal cover."""

    BASE = "base"
    COVER = "cover"


def _finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"non-finite component: {v!r}")


def _vec2(v) -> np.ndarray:
    arr = np.array(v, dtype=float).reshape(2)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"non-finite 2-vector: {v!r}")
    arr.setflags(write=False)
    return arr


def rotation_matrix(theta: float) -> np.ndarray:
    """Return ``[[cos, -sin], [sin, cos]]`` for angle ``theta``."""
    if not math.isfinite(theta):
        raise ValueError(f"rotation angle must be finite, got {theta!r}")
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


# --------------------------------------------------------------------------
# R^2 x| (SO(2) x R+)
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AlgebraElement:
    b1: float
    b2: float
    theta: float
    r: float

    def __post_init__(self):
        for name in ("b1", "b2", "theta", "r"):
            object.__setattr__(self, name, float(getattr(self, name)))
        _finite(self.b1, self.b2, self.theta, self.r)

    @classmethod
    def from_array(cls, arr) -> "AlgebraElement":
        b1, b2, theta, r = np.asarray(arr, dtype=float).reshape(4)
        return cls(b1, b2, theta, r)

    def as_array(self) -> np.ndarray:
        return np.array([self.b1, self.b2, self.theta, self.r])

    @property
    def b(self) -> np.ndarray:
        return np.array([self.b1, self.b2])

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(
            self.b1 + other.b1, self.b2 + other.b2, self.theta + other.theta, self.r + other.r
        )

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(-self.b1, -self.b2, -self.theta, -self.r)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __mul__(self, t: float) -> "AlgebraElement":
        return AlgebraElement(t * self.b1, t * self.b2, t * self.theta, t * self.r)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class GroupElement:
    """Element ``(u, theta, lam)``; ``theta`` is stored exactly as given."""

    u: np.ndarray
    theta: float
    lam: float
    variant: Variant = Variant.BASE

    def __post_init__(self):
        object.__setattr__(self, "u", _vec2(self.u))
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "variant", Variant(self.variant))
        _finite(self.theta, self.lam)
        if not self.lam > 0.0:
            raise ValueError(f"dilation factor must be positive, got {self.lam!r}")

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return product(self, other)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.variant == other.variant and group_distance(self, other) <= ATOL

    def __hash__(self):
        raise TypeError("GroupElement is compared to tolerance and is not hashable")

    def __repr__(self):
        return (
            f"GroupElement(u=({self.u[0]!r}, {self.u[1]!r}), theta={self.theta!r}, "
            f"lam={self.lam!r}, variant={self.variant.value!r})"
        )


def identity(variant: Variant = Variant.BASE) -> GroupElement:
    return GroupElement((0.0, 0.0), 0.0, 1.0, variant)


def product(g: GroupElement, h: GroupElement) -> GroupElement:
    if g.variant != h.variant:
        raise ValueError(f"cannot multiply {g.variant.value} and {h.variant.value} elements")
    u = g.u + rotation_matrix(g.theta) @ h.u / g.lam
    return GroupElement(u, g.theta + h.theta, g.lam * h.lam, g.variant)


def inverse(g: GroupElement) -> GroupElement:
    u = -g.lam * (rotation_matrix(-g.theta) @ g.u)
    return GroupElement(u, -g.theta, 1.0 / g.lam, g.variant)


def project(g: GroupElement) -> GroupElement:
    """Covering map: send a cover element to the canonical group."""
    return GroupElement(g.u, math.fmod(g.theta, _TWO_PI), g.lam, Variant.BASE)


def _angle_gap(a: float, b: float) -> float:
    d = math.remainder(a - b, _TWO_PI)
    return abs(d)


def group_distance(g: GroupElement, h: GroupElement) -> float:
    """Max componentwise distance over ``(u, theta, log lam)``.

    Angles are compared modulo 2 pi for the base group and exactly on the cover.
    """
    if g.variant != h.variant:
        raise ValueError("cannot compare elements of different variants")
    du = float(np.max(np.abs(g.u - h.u)))
    if g.variant is Variant.BASE:
        dth = _angle_gap(g.theta, h.theta)
    else:
        dth = abs(g.theta - h.theta)
    dl = abs(math.log(g.lam) - math.log(h.lam))
    return max(du, dth, dl)


def bracket(A: AlgebraElement, B: AlgebraElement) -> AlgebraElement:
    """Lie bracket; the result always lies in the translation ideal."""
    return AlgebraElement(
        B.theta * A.b2 - A.theta * B.b2 + B.r * A.b1 - A.r * B.b1,
        A.theta * B.b1 - B.theta * A.b1 + B.r * A.b2 - A.r * B.b2,
        0.0,
        0.0,
    )


def phi1(z: complex) -> complex:
    """``(e^z - 1) / z`` with its removable singularity at 0 filled in."""
    if abs(z) < _SERIES_RADIUS:
        # Horner form of sum_{k<12} z^k / (k+1)!
        acc = 0j
        for k in range(_SERIES_TERMS, 0, -1):
            acc = 1.0 + acc * z / (k + 1)
        return complex(acc)
    return complex(np.expm1(z) / z)


def exp(A: AlgebraElement, variant: Variant = Variant.BASE) -> GroupElement:
    """Exponential map.

    ``exp(tA)`` traces the one-parameter subgroup ``(u(t), t theta, e^{t r})``
    with ``u(t) = int_0^t e^{-s r} A_{s theta} b ds``.
    """
    w = phi1(complex(-A.r, A.theta)) * complex(A.b1, A.b2)
    return GroupElement((w.real, w.imag), A.theta, math.exp(A.r), variant)


def bch_commutator_check(
    A: AlgebraElement, B: AlgebraElement, t: float, s: float, variant: Variant = Variant.COVER
) -> float:
    """Distance between the group commutator of ``exp(tA), exp(sB)`` and ``exp(ts[A,B])``."""
    if abs(t) > 1.0 or abs(s) > 1.0:
        raise ValueError("bch_commutator_check expects |t|, |s| <= 1")
    gA, gB = exp(t * A, variant), exp(s * B, variant)
    gAi, gBi = exp(-t * A, variant), exp(-s * B, variant)
    lhs = product(product(product(gA, gB), gAi), gBi)
    rhs = exp((t * s) * bracket(A, B), variant)
    return group_distance(lhs, rhs)


# --------------------------------------------------------------------------
# Heisenberg group H5 (the plane case)
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HeisenbergAlgebraElement:
    a: np.ndarray
    b: np.ndarray
    r: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "a", _vec2(self.a))
        object.__setattr__(self, "b", _vec2(self.b))
        object.__setattr__(self, "r", float(self.r))
        _finite(self.r)

    def __add__(self, other):
        return HeisenbergAlgebraElement(self.a + other.a, self.b + other.b, self.r + other.r)

    def __mul__(self, t: float):
        return HeisenbergAlgebraElement(t * self.a, t * self.b, t * self.r)

    __rmul__ = __mul__

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.a, self.b, [self.r]])


@dataclass(frozen=True, eq=False)
class HeisenbergGroupElement:
    u: np.ndarray
    v: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "u", _vec2(self.u))
        object.__setattr__(self, "v", _vec2(self.v))
        object.__setattr__(self, "t", float(self.t))
        _finite(self.t)

    def __matmul__(self, other):
        return heis_product(self, other)

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.u, self.v, [self.t]])


def heis_product(g: HeisenbergGroupElement, h: HeisenbergGroupElement) -> HeisenbergGroupElement:
    t = g.t + h.t + 0.5 * (float(h.u @ g.v) - float(g.u @ h.v))
    return HeisenbergGroupElement(g.u + h.u, g.v + h.v, t)


def heis_inverse(g: HeisenbergGroupElement) -> HeisenbergGroupElement:
    return HeisenbergGroupElement(-g.u, -g.v, -g.t)


def heis_exp(A: HeisenbergAlgebraElement) -> HeisenbergGroupElement:
    # exponential coordinates: the symmetric cocycle makes exp the identity map
    return HeisenbergGroupElement(A.a, A.b, A.r)


def heis_distance(g: HeisenbergGroupElement, h: HeisenbergGroupElement) -> float:
    return float(np.max(np.abs(g.as_array() - h.as_array())))


def cocycle(A: HeisenbergAlgebraElement, B: HeisenbergAlgebraElement) -> float:
    """Central part of the extended bracket, ``b.a' - b'.a``.

    This is the sign for which ``P'_{(A,r)} = a.p + b.x + r`` turns the Poisson
    bracket into the extended Lie bracket; see :mod:`gtquant.phasespace`.
    """
    return float(A.b @ B.a) - float(B.b @ A.a)


def heis_bracket(A: HeisenbergAlgebraElement, B: HeisenbergAlgebraElement) -> HeisenbergAlgebraElement:
    return HeisenbergAlgebraElement((0.0, 0.0), (0.0, 0.0), cocycle(A, B))
