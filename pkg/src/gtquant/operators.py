"""Unitary representations and their self-adjoint generators.

Punctured plane, on a :class:`~gtquant.hilbert.GridSpec`::

    U(theta, lam) psi(phi, s) = e^{-i alpha theta} psi(phi - theta, s - ln lam)
    V(b) psi(phi, s)          = e^{-i (b1 cos phi + b2 sin phi) e^s / hbar} psi(phi, s)

with generators ``c = e^s cos phi``, ``s = e^s sin phi``,
``pi1 = -i hbar d/dphi + hbar alpha`` and ``pi2 = -i hbar d/ds``.  ``alpha = 0``
is the canonical group; any other ``alpha`` is a twisted representation of the
universal cover.

Plane, on a :class:`~gtquant.hilbert.BoxGridSpec`::

    U(a, b, r) psi(x) = e^{-i b.x - i mu r} psi(x - mu a)

Shifts run in one of two modes.  ``EXACT_ALIGNED`` only accepts shifts that
land on grid nodes and performs them as index permutations, which makes the
Weyl relations hold to rounding.  ``SPECTRAL`` accepts any shift and applies
it as a phase ramp in the Fourier domain.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .algebra import AlgebraElement, bracket, rotation_matrix
from .hilbert import (
    BoxGridSpec,
    BoxWavefunction,
    GridSpec,
    Wavefunction,
    box_norm,
    norm,
)

__all__ = [
    "HeisenbergRepConfig",
    "MisalignedShiftError",
    "Pair",
    "RepConfig",
    "ShiftMode",
    "apply_U",
    "apply_V",
    "apply_c",
    "apply_generator",
    "apply_pi1",
    "apply_pi2",
    "apply_s",
    "commutator_residual",
    "pi1_spectrum",
    "pi1_spectrum_table",
    "quantization_residual",
    "r2_U",
    "r2_V",
    "r2_W",
    "r2_apply",
    "r2_commutator_residual",
    "r2_p",
    "r2_weyl_residual",
    "r2_x",
    "r2_z",
    "weyl_residual",
]

ALIGN_TOL = 1e-12

_WORK_DTYPE = (
    np.clongdouble if np.finfo(np.longdouble).eps < np.finfo(np.float64).eps else np.complex128
)


class ShiftMode(str, enum.Enum):
    EXACT_ALIGNED = "exact_aligned"
    SPECTRAL = "spectral"


class MisalignedShiftError(ValueError):
    """A shift requested in aligned mode does not land on the grid."""


@dataclass(frozen=True)
class RepConfig:
    hbar: float = 1.0
    alpha: float = 0.0
    shift_mode: ShiftMode = ShiftMode.EXACT_ALIGNED

    def __post_init__(self):
        object.__setattr__(self, "shift_mode", ShiftMode(self.shift_mode))
        if not (math.isfinite(self.hbar) and self.hbar > 0):
            raise ValueError(f"hbar must be positive, got {self.hbar!r}")
        if not math.isfinite(self.alpha):
            raise ValueError(f"alpha must be finite, got {self.alpha!r}")


@dataclass(frozen=True)
class HeisenbergRepConfig:
    mu: float = 1.0
    box: BoxGridSpec = field(default_factory=BoxGridSpec)
    shift_mode: ShiftMode = ShiftMode.EXACT_ALIGNED

    def __post_init__(self):
        object.__setattr__(self, "shift_mode", ShiftMode(self.shift_mode))
        if not math.isfinite(self.mu) or self.mu == 0.0:
            raise ValueError(f"mu must be finite and nonzero, got {self.mu!r}")


# --------------------------------------------------------------------------
# cached grid tables
# --------------------------------------------------------------------------


@lru_cache(maxsize=16)
def _polar_tables(grid: GridSpec):
    phi, s = grid.phi, grid.s
    rho = np.exp(s)
    c = np.cos(phi)[:, None] * rho[None, :]
    sn = np.sin(phi)[:, None] * rho[None, :]
    for a in (c, sn):
        a.setflags(write=False)
    return c, sn


def _odd_multiplier(modes: np.ndarray) -> np.ndarray:
    # the unpaired Nyquist mode gets 0 so first derivatives stay self-adjoint
    out = np.array(modes, dtype=float)
    n = out.size
    if n % 2 == 0:
        out[n // 2] = 0.0
    return out


@lru_cache(maxsize=16)
def _derivative_symbols(grid: GridSpec):
    n = _odd_multiplier(grid.phi_modes)
    k = _odd_multiplier(grid.s_wavenumbers)
    n.setflags(write=False)
    k.setflags(write=False)
    return n, k


def _index_shift(q: float, what: str) -> int:
    m = round(q)
    if abs(q - m) > ALIGN_TOL * max(1.0, abs(q)):
        raise MisalignedShiftError(f"{what} shift of {q!r} grid steps is not an integer")
    return int(m)


# --------------------------------------------------------------------------
# punctured plane
# --------------------------------------------------------------------------


def apply_U(theta: float, lam: float, psi: Wavefunction, cfg: RepConfig = RepConfig()) -> Wavefunction:
    if not (math.isfinite(theta) and math.isfinite(lam) and lam > 0):
        raise ValueError(f"need finite theta and positive lam, got {theta!r}, {lam!r}")
    grid = psi.grid
    r = math.log(lam)
    if cfg.shift_mode is ShiftMode.EXACT_ALIGNED:
        m = _index_shift(theta / grid.dphi, "angular") % grid.n_phi
        k = _index_shift(r / grid.ds, "log-radial")
        out = np.roll(psi.amps, (m, k), axis=(0, 1))
    else:
        coeffs = np.fft.fft2(psi.amps)
        ramp_phi = np.exp(-1j * theta * grid.phi_modes)
        ramp_s = np.exp(-1j * r * grid.s_wavenumbers)
        out = np.fft.ifft2(coeffs * ramp_phi[:, None] * ramp_s[None, :])
    if cfg.alpha != 0.0:
        out = out * np.exp(-1j * cfg.alpha * theta)
    return Wavefunction(grid, out)


def _v_phase(b, grid: GridSpec, hbar: float) -> np.ndarray:
    c, sn = _polar_tables(grid)
    return np.exp((-1j / hbar) * (b[0] * c + b[1] * sn))


def apply_V(b, psi: Wavefunction, cfg: RepConfig = RepConfig()) -> Wavefunction:
    b = np.asarray(b, dtype=float).reshape(2)
    return Wavefunction(psi.grid, _v_phase(b, psi.grid, cfg.hbar) * psi.amps)


def weyl_residual(theta: float, lam: float, b, psi: Wavefunction, cfg: RepConfig = RepConfig()) -> float:
    """Relative defect of ``U(theta, r) V(b) = V(e^-r A_theta b) U(theta, r)``."""
    b = np.asarray(b, dtype=float).reshape(2)
    b_moved = rotation_matrix(theta) @ b / lam
    lhs = apply_U(theta, lam, apply_V(b, psi, cfg), cfg)
    rhs = apply_V(b_moved, apply_U(theta, lam, psi, cfg), cfg)
    return norm(lhs - rhs) / norm(psi)


def apply_c(psi: Wavefunction, cfg: RepConfig = RepConfig()) -> Wavefunction:
    c, _ = _polar_tables(psi.grid)
    return Wavefunction(psi.grid, c * psi.amps)


def apply_s(psi: Wavefunction, cfg: RepConfig = RepConfig()) -> Wavefunction:
    _, sn = _polar_tables(psi.grid)
    return Wavefunction(psi.grid, sn * psi.amps)


def _spectral_multiply(amps: np.ndarray, symbol: np.ndarray, axis: int) -> np.ndarray:
    """Apply a Fourier multiplier along one axis, rounding to complex128 once.

    The transform runs in extended precision where the platform has it: in
    double precision the rounding noise in unoccupied high modes is amplified
    by the next derivative and leaves a ~1e-12 floor on operator products.
    """
    shape = (-1, 1) if axis == 0 else (1, -1)
    work = amps.astype(_WORK_DTYPE)
    out = np.fft.ifft(symbol.reshape(shape) * np.fft.fft(work, axis=axis), axis=axis)
    return out.astype(complex)


def _pi1_amps(amps: np.ndarray, grid: GridSpec, cfg: RepConfig) -> np.ndarray:
    n, _ = _derivative_symbols(grid)
    out = _spectral_multiply(amps, cfg.hbar * n, 0)
    if cfg.alpha != 0.0:
        out = out + (cfg.hbar * cfg.alpha) * amps
    return out


def apply_pi1(psi: Wavefunction, cfg: RepConfig = RepConfig()) -> Wavefunction:
    """``-i hbar d/dphi + hbar alpha`` by spectral differentiation."""
    return Wavefunction(psi.grid, _pi1_amps(psi.amps, psi.grid, cfg))


def apply_pi2(psi: Wavefunction, cfg: RepConfig = RepConfig()) -> Wavefunction:
    """``-i hbar rho d/drho = -i hbar d/ds`` by spectral differentiation."""
    _, k = _derivative_symbols(psi.grid)
    return Wavefunction(psi.grid, _spectral_multiply(psi.amps, cfg.hbar * k, 1))


def apply_generator(A: AlgebraElement, psi: Wavefunction, cfg: RepConfig = RepConfig()) -> Wavefunction:
    """``K_A = b1 c + b2 s + theta pi1 + r pi2``, the operator quantizing ``P_A``."""
    c, sn = _polar_tables(psi.grid)
    out = (A.b1 * c + A.b2 * sn) * psi.amps
    if A.theta != 0.0:
        out = out + A.theta * apply_pi1(psi, cfg).amps
    if A.r != 0.0:
        out = out + A.r * apply_pi2(psi, cfg).amps
    return Wavefunction(psi.grid, out)


class Pair(str, enum.Enum):
    """Operator pairs with known commutators (hbar-consistent right-hand sides)."""

    C_S = "c_s"
    PI1_PI2 = "pi1_pi2"
    S_PI1 = "s_pi1"
    C_PI1 = "c_pi1"
    S_PI2 = "s_pi2"
    C_PI2 = "c_pi2"


_PAIRS = {
    # pair: (A, B, rhs operator or None, rhs coefficient / (i hbar))
    Pair.C_S: (apply_c, apply_s, None, 0.0),
    Pair.PI1_PI2: (apply_pi1, apply_pi2, None, 0.0),
    Pair.S_PI1: (apply_s, apply_pi1, apply_c, 1.0),
    Pair.C_PI1: (apply_c, apply_pi1, apply_s, -1.0),
    Pair.S_PI2: (apply_s, apply_pi2, apply_s, 1.0),
    Pair.C_PI2: (apply_c, apply_pi2, apply_c, 1.0),
}


def commutator_residual(pair, psi: Wavefunction, cfg: RepConfig = RepConfig()) -> float:
    """``|| [A, B] psi - i hbar C psi || / || psi ||`` for the chosen pair."""
    A, B, C, coef = _PAIRS[Pair(pair)]
    comm = A(B(psi, cfg), cfg) - B(A(psi, cfg), cfg)
    if C is not None:
        comm = comm - C(psi, cfg) * (1j * cfg.hbar * coef)
    return norm(comm) / norm(psi)


def quantization_residual(
    A: AlgebraElement, B: AlgebraElement, psi: Wavefunction, cfg: RepConfig = RepConfig()
) -> float:
    """Relative defect of ``-(i/hbar) [K_A, K_B] = K_[A,B]`` on ``psi``."""
    KAB = apply_generator(A, apply_generator(B, psi, cfg), cfg)
    KBA = apply_generator(B, apply_generator(A, psi, cfg), cfg)
    lhs = (KAB - KBA) * (-1j / cfg.hbar)
    return norm(lhs - apply_generator(bracket(A, B), psi, cfg)) / norm(psi)


def pi1_spectrum_table(cfg: RepConfig = RepConfig(), grid: GridSpec = GridSpec()) -> list[tuple[int, float]]:
    """``(n, eigenvalue)`` read off by applying ``pi1`` to each ``e^{i n phi}``.

    Only modes with ``|n| < n_phi / 2`` are resolvable; the Nyquist mode's
    derivative symbol is zeroed, so it is left out.
    """
    n_phi = grid.n_phi
    ns = np.arange(-n_phi // 2 + 1, n_phi // 2)
    phi = grid.phi
    # one column per mode: pi1 acts column by column along phi
    basis = np.exp(1j * np.outer(phi, ns))
    image = _pi1_amps(basis, grid, cfg)
    eig = np.einsum("ij,ij->j", basis.conj(), image).real / n_phi
    rows = sorted(zip(ns.tolist(), eig.tolist()), key=lambda t: t[1])
    return rows


def pi1_spectrum(cfg: RepConfig = RepConfig(), grid: GridSpec = GridSpec()) -> list[float]:
    return [e for _, e in pi1_spectrum_table(cfg, grid)]


# --------------------------------------------------------------------------
# plane (Heisenberg group)
# --------------------------------------------------------------------------


@lru_cache(maxsize=16)
def _box_mesh(box: BoxGridSpec):
    X, Y = box.mesh()
    X.setflags(write=False)
    Y.setflags(write=False)
    return X, Y


def r2_apply(a, b, r: float, psi: BoxWavefunction, cfg: HeisenbergRepConfig) -> BoxWavefunction:
    """``e^{-i b.x - i mu r} psi(x - mu a)``."""
    a = np.asarray(a, dtype=float).reshape(2)
    b = np.asarray(b, dtype=float).reshape(2)
    box = psi.grid
    shift = cfg.mu * a
    if cfg.shift_mode is ShiftMode.EXACT_ALIGNED:
        mx = _index_shift(shift[0] / box.dx, "x")
        my = _index_shift(shift[1] / box.dx, "y")
        _index_shift(b[0] / box.dual_spacing, "b_x phase")
        _index_shift(b[1] / box.dual_spacing, "b_y phase")
        out = np.roll(psi.amps, (mx, my), axis=(0, 1)) if (mx or my) else psi.amps
    else:
        if np.any(shift != 0.0):
            k = box.wavenumbers
            ramp = np.exp(-1j * shift[0] * k)[:, None] * np.exp(-1j * shift[1] * k)[None, :]
            out = np.fft.ifft2(np.fft.fft2(psi.amps) * ramp)
        else:
            out = psi.amps
    if np.any(b != 0.0) or r != 0.0:
        X, Y = _box_mesh(box)
        out = np.exp(-1j * (b[0] * X + b[1] * Y) - 1j * cfg.mu * r) * out
    return BoxWavefunction(box, out)


def r2_U(a, psi, cfg):
    return r2_apply(a, (0.0, 0.0), 0.0, psi, cfg)


def r2_V(b, psi, cfg):
    return r2_apply((0.0, 0.0), b, 0.0, psi, cfg)


def r2_W(r, psi, cfg):
    return r2_apply((0.0, 0.0), (0.0, 0.0), r, psi, cfg)


def r2_weyl_residual(a, b, psi: BoxWavefunction, cfg: HeisenbergRepConfig) -> float:
    """Relative defect of ``U(a) V(b) = V(b) U(a) W(-a.b)``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    lhs = r2_U(a, r2_V(b, psi, cfg), cfg)
    rhs = r2_V(b, r2_U(a, r2_W(-float(a @ b), psi, cfg), cfg), cfg)
    return box_norm(lhs - rhs) / box_norm(psi)


def r2_x(psi: BoxWavefunction, i: int) -> BoxWavefunction:
    X, Y = _box_mesh(psi.grid)
    return BoxWavefunction(psi.grid, (X, Y)[i] * psi.amps)


def r2_p(psi: BoxWavefunction, i: int, cfg: HeisenbergRepConfig) -> BoxWavefunction:
    """``-i mu d/dx_i`` by spectral differentiation."""
    k = _odd_multiplier(psi.grid.wavenumbers)
    return BoxWavefunction(psi.grid, _spectral_multiply(psi.amps, cfg.mu * k, i))


def r2_z(psi: BoxWavefunction, cfg: HeisenbergRepConfig) -> BoxWavefunction:
    return psi * cfg.mu


def r2_commutator_residual(i: int, j: int, psi: BoxWavefunction, cfg: HeisenbergRepConfig) -> float:
    """Relative defect of ``[x_i, p_j] = i delta_ij z``."""
    comm = r2_x(r2_p(psi, j, cfg), i) - r2_p(r2_x(psi, i), j, cfg)
    if i == j:
        comm = comm - r2_z(psi, cfg) * 1j
    return box_norm(comm) / box_norm(psi)
