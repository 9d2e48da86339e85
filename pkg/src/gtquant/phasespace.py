"""Phase space M = (R^2 - {0}) x R^2 in the global chart (x, y, px, py).

Tangent vectors and gradients are stored in that component order.  The
symplectic form is ``dx ^ dpx + dy ^ dpy``, represented by the matrix
:data:`OMEGA` so that ``omega(v, w) = v @ OMEGA @ w``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .algebra import (
    AlgebraElement,
    GroupElement,
    HeisenbergAlgebraElement,
    exp,
    rotation_matrix,
)

__all__ = [
    "OMEGA",
    "PUNCTURE_FLOOR",
    "Observable",
    "PhasePoint",
    "PunctureError",
    "TangentVector",
    "act",
    "act_r2",
    "action_jacobian",
    "action_jacobian_r2",
    "effectiveness_probe",
    "field_bracket",
    "fundamental_field",
    "fundamental_field_fd",
    "fundamental_field_matrix",
    "gradient",
    "hamiltonian_field",
    "momentum_map",
    "momentum_observable",
    "poisson",
    "r2_extended_observable",
    "r2_momentum_map",
    "r2_momentum_observable",
    "symplectic_form",
]

PUNCTURE_FLOOR = 1e-300
FD_STEP = 1e-5

OMEGA = np.array(
    [
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
    ]
)
OMEGA.setflags(write=False)


class PunctureError(ValueError):
    """A configuration point fell onto (or below the floor around) the origin."""


@dataclass(frozen=True, eq=False)
class PhasePoint:
    x: np.ndarray
    p: np.ndarray
    floor: float = PUNCTURE_FLOOR

    def __post_init__(self):
        x = np.array(self.x, dtype=float).reshape(2)
        p = np.array(self.p, dtype=float).reshape(2)
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(p))):
            raise ValueError("phase point components must be finite")
        if math.hypot(x[0], x[1]) <= self.floor:
            raise PunctureError(f"configuration {x.tolist()} is at the puncture")
        x.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)

    @classmethod
    def from_array(cls, z, floor: float = PUNCTURE_FLOOR) -> "PhasePoint":
        z = np.asarray(z, dtype=float).reshape(4)
        return cls(z[:2], z[2:], floor)

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.x, self.p])


@dataclass(frozen=True, eq=False)
class TangentVector:
    dx: float
    dy: float
    dpx: float
    dpy: float

    def __post_init__(self):
        for name in ("dx", "dy", "dpx", "dpy"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"non-finite tangent component {name}={v!r}")
            object.__setattr__(self, name, v)

    @classmethod
    def from_array(cls, v) -> "TangentVector":
        return cls(*np.asarray(v, dtype=float).reshape(4))

    def as_array(self) -> np.ndarray:
        return np.array([self.dx, self.dy, self.dpx, self.dpy])

    def __add__(self, other):
        return TangentVector.from_array(self.as_array() + other.as_array())

    def __neg__(self):
        return TangentVector.from_array(-self.as_array())


@dataclass(frozen=True)
class Observable:
    """A smooth function on M, optionally with its analytic gradient."""

    value: Callable[[PhasePoint], float]
    gradient: Optional[Callable[[PhasePoint], np.ndarray]] = None

    def __call__(self, pt: PhasePoint) -> float:
        return self.value(pt)


# --------------------------------------------------------------------------
# group action
# --------------------------------------------------------------------------


def act(g: GroupElement, pt: PhasePoint) -> PhasePoint:
    """``(u, theta, lam) . (x, p) = (lam A x, lam^-1 A p - u)``."""
    R = rotation_matrix(g.theta)
    return PhasePoint(g.lam * (R @ pt.x), (R @ pt.p) / g.lam - g.u, pt.floor)


def act_r2(u, v, z) -> np.ndarray:
    """Translation action of R^4 on the plane's phase space: ``(x + u, p - v)``."""
    z = np.asarray(z, dtype=float)
    return np.concatenate([z[:2] + np.asarray(u, float), z[2:] - np.asarray(v, float)])


def action_jacobian(g: GroupElement) -> np.ndarray:
    R = rotation_matrix(g.theta)
    J = np.zeros((4, 4))
    J[:2, :2] = g.lam * R
    J[2:, 2:] = R / g.lam
    return J


def action_jacobian_r2(u, v) -> np.ndarray:
    # translations: the Jacobian does not depend on (u, v)
    return np.eye(4)


def symplectic_form(v: TangentVector, w: TangentVector) -> float:
    return v.dx * w.dpx - v.dpx * w.dx + v.dy * w.dpy - v.dpy * w.dy


# --------------------------------------------------------------------------
# fundamental vector fields
# --------------------------------------------------------------------------


def fundamental_field_matrix(A: AlgebraElement) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(K, c)`` with ``gamma^A(z) = K z + c``; every fundamental field is affine."""
    th, r = A.theta, A.r
    K = np.array(
        [
            [-r, th, 0.0, 0.0],
            [-th, -r, 0.0, 0.0],
            [0.0, 0.0, r, th],
            [0.0, 0.0, -th, r],
        ]
    )
    c = np.array([0.0, 0.0, A.b1, A.b2])
    return K, c


def fundamental_field(A: AlgebraElement, pt: PhasePoint) -> TangentVector:
    x, y = pt.x
    px, py = pt.p
    th, r = A.theta, A.r
    return TangentVector(
        th * y - r * x,
        -th * x - r * y,
        r * px + th * py + A.b1,
        r * py - th * px + A.b2,
    )


def fundamental_field_fd(A: AlgebraElement, pt: PhasePoint, h: float = FD_STEP) -> TangentVector:
    """Central difference of ``t -> exp(-tA) . pt`` at ``t = 0``.

    Independent of :func:`fundamental_field`: it only uses the exponential map
    and the group action.  Raises :class:`PunctureError` if a probed point
    leaves the configuration space.
    """
    if not h > 0.0:
        raise ValueError(f"step must be positive, got {h!r}")
    fwd = act(exp(-h * A), pt)
    bwd = act(exp(h * A), pt)
    return TangentVector.from_array((fwd.as_array() - bwd.as_array()) / (2.0 * h))


def field_bracket(A: AlgebraElement, B: AlgebraElement, pt: PhasePoint) -> TangentVector:
    """Vector-field commutator ``[gamma^A, gamma^B]`` at ``pt``, from the exact Jacobians."""
    KA, cA = fundamental_field_matrix(A)
    KB, cB = fundamental_field_matrix(B)
    z = pt.as_array()
    return TangentVector.from_array(KB @ (KA @ z + cA) - KA @ (KB @ z + cB))


# --------------------------------------------------------------------------
# observables, Hamiltonian fields, Poisson brackets
# --------------------------------------------------------------------------


def momentum_map(A: AlgebraElement, pt: PhasePoint) -> float:
    x, y = pt.x
    px, py = pt.p
    return A.r * (x * px + y * py) + A.b1 * x + A.b2 * y + A.theta * (x * py - y * px)


def _momentum_gradient(A: AlgebraElement, pt: PhasePoint) -> np.ndarray:
    x, y = pt.x
    px, py = pt.p
    th, r = A.theta, A.r
    return np.array(
        [
            r * px + A.b1 + th * py,
            r * py + A.b2 - th * px,
            r * x - th * y,
            r * y + th * x,
        ]
    )


def momentum_observable(A: AlgebraElement, analytic: bool = True) -> Observable:
    grad = (lambda pt: _momentum_gradient(A, pt)) if analytic else None
    return Observable(lambda pt: momentum_map(A, pt), grad)


def r2_momentum_map(A: HeisenbergAlgebraElement, z) -> float:
    """``P_(a,b) = a.p + b.x`` on the plane's phase space (central part ignored)."""
    z = np.asarray(z, dtype=float)
    return float(A.a @ z[2:] + A.b @ z[:2])


def r2_momentum_observable(A: HeisenbergAlgebraElement) -> Observable:
    grad = np.concatenate([A.b, A.a])
    return Observable(
        lambda pt: r2_momentum_map(A, pt.as_array()),
        lambda pt: grad.copy(),
    )


def r2_extended_observable(A: HeisenbergAlgebraElement) -> Observable:
    """``P'_(a,b,r) = a.p + b.x + r``."""
    grad = np.concatenate([A.b, A.a])
    return Observable(
        lambda pt: r2_momentum_map(A, pt.as_array()) + A.r,
        lambda pt: grad.copy(),
    )


def gradient(f: Observable, pt: PhasePoint, h: float = FD_STEP) -> np.ndarray:
    """Gradient of ``f`` at ``pt``; central differences when ``f`` has no analytic one."""
    if f.gradient is not None:
        g = np.asarray(f.gradient(pt), dtype=float).reshape(4)
    else:
        z = pt.as_array()
        g = np.empty(4)
        for i in range(4):
            dz = np.zeros(4)
            dz[i] = h
            hi = f(PhasePoint.from_array(z + dz, pt.floor))
            lo = f(PhasePoint.from_array(z - dz, pt.floor))
            g[i] = (hi - lo) / (2.0 * h)
    if not np.all(np.isfinite(g)):
        raise ValueError("observable gradient is not finite")
    return g


def hamiltonian_field(f: Observable, pt: PhasePoint, h: float = FD_STEP) -> TangentVector:
    """The unique ``xi`` with ``omega(xi, .) = df(.)``."""
    # omega(xi, w) = xi @ OMEGA @ w, so the condition reads OMEGA.T @ xi = grad f
    xi = np.linalg.solve(OMEGA.T, gradient(f, pt, h))
    return TangentVector.from_array(xi)


def poisson(f: Observable, g: Observable, pt: PhasePoint, h: float = FD_STEP) -> float:
    df = gradient(f, pt, h)
    dg = gradient(g, pt, h)
    return float(df[0] * dg[2] + df[1] * dg[3] - df[2] * dg[0] - df[3] * dg[1])


def effectiveness_probe(
    g: GroupElement, pts: Sequence[PhasePoint], atol: float = 1e-12, rtol: float = 1e-12
) -> bool:
    """True iff ``g`` fixes every sample point."""
    if len(pts) == 0:
        raise ValueError("effectiveness_probe needs at least one sample point")
    for pt in pts:
        moved = act(g, pt).as_array()
        if not np.allclose(moved, pt.as_array(), atol=atol, rtol=rtol):
            return False
    return True
