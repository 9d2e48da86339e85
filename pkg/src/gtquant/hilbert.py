"""Discretised Hilbert spaces.

The punctured plane is sampled on a uniform grid in ``(phi, s = ln rho)``.
In those coordinates the measure ``dphi drho / (2 pi rho)`` becomes
``dphi ds / (2 pi)``, dilations become shifts in ``s`` and the radial
generator ``-i hbar rho d/drho`` becomes ``-i hbar d/ds``.  Both directions are
periodic; states are kept negligible near the ``s`` edges so the wrap-around
never matters.

The plane case uses an ``n x n`` periodic box ``[-L, L)^2`` with Lebesgue
measure.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from ._io import atomic_write

__all__ = [
    "BoxGridSpec",
    "BoxWavefunction",
    "GridSpec",
    "Wavefunction",
    "box_inner",
    "box_norm",
    "boundary_amplitude",
    "dump_csv",
    "gaussian_envelope",
    "inner",
    "load_csv",
    "modes",
    "norm",
    "random_box_state",
    "random_state",
    "sample",
]

# Fourier tail of the envelope that may be cut off when projecting onto the band
_TAIL = 1e-17


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def _mode_numbers(n: int) -> np.ndarray:
    """Integer mode numbers in FFT order, ``0, 1, ..., n/2 - 1, -n/2, ..., -1``."""
    return np.fft.fftfreq(n, d=1.0 / n)


@dataclass(frozen=True)
class GridSpec:
    n_phi: int = 256
    n_s: int = 256
    s_min: float = -4.0
    s_max: float = 4.0

    def __post_init__(self):
        if not (_is_pow2(self.n_phi) and _is_pow2(self.n_s)):
            raise ValueError(f"grid sizes must be powers of two, got {self.n_phi}x{self.n_s}")
        if not (math.isfinite(self.s_min) and math.isfinite(self.s_max)):
            raise ValueError("s range must be finite")
        if not self.s_max > self.s_min:
            raise ValueError(f"need s_min < s_max, got [{self.s_min}, {self.s_max}]")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_phi, self.n_s)

    @property
    def dphi(self) -> float:
        return 2.0 * math.pi / self.n_phi

    @property
    def length_s(self) -> float:
        return self.s_max - self.s_min

    @property
    def ds(self) -> float:
        return self.length_s / self.n_s

    @property
    def weight(self) -> float:
        """Quadrature weight of one node, ``dphi ds / 2 pi``."""
        return self.dphi * self.ds / (2.0 * math.pi)

    @property
    def phi(self) -> np.ndarray:
        return np.arange(self.n_phi) * self.dphi

    @property
    def s(self) -> np.ndarray:
        return self.s_min + np.arange(self.n_s) * self.ds

    @property
    def phi_modes(self) -> np.ndarray:
        return _mode_numbers(self.n_phi)

    @property
    def s_wavenumbers(self) -> np.ndarray:
        return 2.0 * math.pi * _mode_numbers(self.n_s) / self.length_s

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """``(phi, s)`` arrays of shape ``(n_phi, n_s)``."""
        return np.meshgrid(self.phi, self.s, indexing="ij")


@dataclass(frozen=True)
class BoxGridSpec:
    n: int = 256
    half_width: float = 8.0

    def __post_init__(self):
        if not _is_pow2(self.n):
            raise ValueError(f"box size must be a power of two, got {self.n}")
        if not (math.isfinite(self.half_width) and self.half_width > 0):
            raise ValueError(f"box half-width must be positive, got {self.half_width}")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n, self.n)

    @property
    def dx(self) -> float:
        return 2.0 * self.half_width / self.n

    @property
    def x(self) -> np.ndarray:
        return -self.half_width + np.arange(self.n) * self.dx

    @property
    def wavenumbers(self) -> np.ndarray:
        return 2.0 * math.pi * _mode_numbers(self.n) / (2.0 * self.half_width)

    @property
    def dual_spacing(self) -> float:
        """Smallest wavenumber compatible with the box period."""
        return math.pi / self.half_width

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x, self.x, indexing="ij")


def _freeze(amps, shape) -> np.ndarray:
    arr = np.array(amps, dtype=complex)
    if arr.shape != tuple(shape):
        raise ValueError(f"amplitude shape {arr.shape} does not match grid {tuple(shape)}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("amplitudes must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Wavefunction:
    """Amplitudes ``amps[j, k] = psi(phi_j, s_k)`` on a :class:`GridSpec`."""

    grid: GridSpec
    amps: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amps", _freeze(self.amps, self.grid.shape))

    def _like(self, amps) -> "Wavefunction":
        return Wavefunction(self.grid, amps)

    def __add__(self, other: "Wavefunction") -> "Wavefunction":
        _same_grid(self, other)
        return self._like(self.amps + other.amps)

    def __sub__(self, other: "Wavefunction") -> "Wavefunction":
        _same_grid(self, other)
        return self._like(self.amps - other.amps)

    def __mul__(self, c: complex) -> "Wavefunction":
        return self._like(c * self.amps)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class BoxWavefunction:
    """Amplitudes ``amps[i, j] = psi(x_i, y_j)`` on a :class:`BoxGridSpec`."""

    grid: BoxGridSpec
    amps: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amps", _freeze(self.amps, self.grid.shape))

    def _like(self, amps) -> "BoxWavefunction":
        return BoxWavefunction(self.grid, amps)

    def __add__(self, other):
        _same_grid(self, other)
        return self._like(self.amps + other.amps)

    def __sub__(self, other):
        _same_grid(self, other)
        return self._like(self.amps - other.amps)

    def __mul__(self, c: complex):
        return self._like(c * self.amps)

    __rmul__ = __mul__


def _same_grid(a, b) -> None:
    if type(a) is not type(b) or a.grid != b.grid:
        raise ValueError("states live on different grids")


def inner(psi: Wavefunction, chi: Wavefunction) -> complex:
    """``<psi, chi>``, antilinear in the first slot."""
    _same_grid(psi, chi)
    return complex(np.vdot(psi.amps, chi.amps) * psi.grid.weight)


def norm(psi: Wavefunction) -> float:
    return math.sqrt(max(inner(psi, psi).real, 0.0))


def box_inner(psi: BoxWavefunction, chi: BoxWavefunction) -> complex:
    _same_grid(psi, chi)
    return complex(np.vdot(psi.amps, chi.amps) * psi.grid.dx**2)


def box_norm(psi: BoxWavefunction) -> float:
    return math.sqrt(max(box_inner(psi, psi).real, 0.0))


def modes(psi: Wavefunction) -> np.ndarray:
    """Fourier coefficients normalised so that ``sum |c|^2 == norm(psi)**2``."""
    return np.fft.fft2(psi.amps, norm="ortho") * math.sqrt(psi.grid.weight)


def sample(f: Callable[[np.ndarray, np.ndarray], np.ndarray], grid: GridSpec) -> Wavefunction:
    """Evaluate ``f(phi, rho)`` on the grid nodes, with ``rho = e^s``."""
    phi, s = grid.mesh()
    vals = np.broadcast_to(np.asarray(f(phi, np.exp(s)), dtype=complex), grid.shape)
    if not np.all(np.isfinite(vals)):
        raise ValueError("sampled function produced non-finite values")
    return Wavefunction(grid, vals)


def gaussian_envelope(coord: np.ndarray, center: float, width: float) -> np.ndarray:
    """Gaussian whose full width at the ``1/e^2`` level is ``width``.

    Equivalently a Gaussian of standard deviation ``width / 4``; it is below
    ``e^-128`` four widths from its centre.
    """
    return np.exp(-8.0 * ((coord - center) / width) ** 2)


def _envelope_gap(width: float, period: float) -> int:
    """Number of Fourier modes the envelope spreads a band-limited factor by."""
    sigma = width / 4.0
    k_gap = math.sqrt(-2.0 * math.log(_TAIL)) / sigma
    return int(math.ceil(k_gap * period / (2.0 * math.pi)))


def _band_mask(n: int, cutoff: int) -> np.ndarray:
    return np.abs(_mode_numbers(n)) <= cutoff


def _random_band_limited(
    rng: np.random.Generator,
    shape: tuple[int, int],
    cutoffs: tuple[int, int],
    envelopes: tuple[Optional[np.ndarray], Optional[np.ndarray]],
    gaps: tuple[int, int],
) -> np.ndarray:
    inner_cut = []
    for n, c, gap in zip(shape, cutoffs, gaps):
        if c > n // 4:
            raise ValueError(f"mode cutoff {c} exceeds n/4 = {n // 4}")
        if c < 0:
            raise ValueError("mode cutoff must be non-negative")
        if gap > c:
            raise ValueError(
                f"envelope needs {gap} modes of headroom but the cutoff is {c}; widen the envelope"
            )
        inner_cut.append(c - gap)
    coeffs = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    coeffs *= np.outer(_band_mask(shape[0], inner_cut[0]), _band_mask(shape[1], inner_cut[1]))
    amps = np.fft.ifft2(coeffs)
    for axis, env in enumerate(envelopes):
        if env is not None:
            amps = amps * (env[:, None] if axis == 0 else env[None, :])
    # project back onto the band; only the envelope's < 1e-17 tail is removed
    coeffs = np.fft.fft2(amps)
    coeffs *= np.outer(_band_mask(shape[0], cutoffs[0]), _band_mask(shape[1], cutoffs[1]))
    return np.fft.ifft2(coeffs)


def _pair(v, default: tuple[int, int]) -> tuple[int, int]:
    if v is None:
        return default
    if isinstance(v, (int, np.integer)):
        return (int(v), int(v))
    a, b = v
    return (int(a), int(b))


def random_state(
    seed: Union[int, Sequence[int]],
    grid: GridSpec,
    mode_cutoff: Union[int, tuple[int, int], None] = None,
    s_envelope_width: Optional[float] = None,
) -> Wavefunction:
    """Deterministic, band-limited, unit-norm random state.

    Fourier support is ``|n| <= cutoff`` in both directions.  The state is
    localised in ``s`` by :func:`gaussian_envelope` centred mid-grid so that its
    amplitude at the ``s`` edges is negligible (far below ``1e-14`` for the
    default width ``(s_max - s_min) / 8``).
    """
    rng = np.random.default_rng(seed)
    cutoffs = _pair(mode_cutoff, (grid.n_phi // 4, grid.n_s // 4))
    width = grid.length_s / 8.0 if s_envelope_width is None else float(s_envelope_width)
    if not width > 0:
        raise ValueError("envelope width must be positive")
    env = gaussian_envelope(grid.s, 0.5 * (grid.s_min + grid.s_max), width)
    gaps = (0, _envelope_gap(width, grid.length_s))
    amps = _random_band_limited(rng, grid.shape, cutoffs, (None, env), gaps)
    psi = Wavefunction(grid, amps)
    return psi * (1.0 / norm(psi))


def random_box_state(
    seed: Union[int, Sequence[int]],
    box: BoxGridSpec,
    mode_cutoff: Optional[int] = None,
    envelope_width: Optional[float] = None,
) -> BoxWavefunction:
    """Box-grid analogue of :func:`random_state`, localised in both directions."""
    rng = np.random.default_rng(seed)
    c = box.n // 4 if mode_cutoff is None else int(mode_cutoff)
    width = 2.0 * box.half_width / 8.0 if envelope_width is None else float(envelope_width)
    if not width > 0:
        raise ValueError("envelope width must be positive")
    env = gaussian_envelope(box.x, 0.0, width)
    gap = _envelope_gap(width, 2.0 * box.half_width)
    amps = _random_band_limited(rng, box.shape, (c, c), (env, env), (gap, gap))
    psi = BoxWavefunction(box, amps)
    return psi * (1.0 / box_norm(psi))


def boundary_amplitude(psi: Wavefunction) -> float:
    """Largest modulus on the first and last ``s`` columns."""
    return float(max(np.max(np.abs(psi.amps[:, 0])), np.max(np.abs(psi.amps[:, -1]))))


_CSV_COLUMNS = ("j", "k", "phi", "s", "re", "im")


def dump_csv(psi: Wavefunction, path) -> None:
    """Write ``psi`` as CSV; the first line records the grid parameters."""
    g = psi.grid
    phi, s = g.phi, g.s
    with atomic_write(path, "w", newline="") as fh:
        fh.write(f"# n_phi={g.n_phi},n_s={g.n_s},s_min={g.s_min!r},s_max={g.s_max!r}\n")
        w = csv.writer(fh)
        w.writerow(_CSV_COLUMNS)
        for j in range(g.n_phi):
            for k in range(g.n_s):
                a = psi.amps[j, k]
                w.writerow((j, k, repr(float(phi[j])), repr(float(s[k])), repr(float(a.real)), repr(float(a.imag))))


def load_csv(path) -> Wavefunction:
    with open(path, newline="") as fh:
        header = fh.readline()
        if not header.startswith("#"):
            raise ValueError("missing grid header line")
        params = dict(item.split("=") for item in header[1:].strip().split(","))
        grid = GridSpec(
            int(params["n_phi"]), int(params["n_s"]), float(params["s_min"]), float(params["s_max"])
        )
        reader = csv.reader(fh)
        cols = next(reader)
        if tuple(cols) != _CSV_COLUMNS:
            raise ValueError(f"unexpected columns {cols}")
        amps = np.zeros(grid.shape, dtype=complex)
        seen = 0
        for row in reader:
            j, k = int(row[0]), int(row[1])
            amps[j, k] = complex(float(row[4]), float(row[5]))
            seen += 1
    if seen != grid.n_phi * grid.n_s:
        raise ValueError(f"expected {grid.n_phi * grid.n_s} rows, read {seen}")
    return Wavefunction(grid, amps)
