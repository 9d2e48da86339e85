"""Property suites that turn each identity of the construction into a residual.

Every suite runs a handful of named checks.  Each check keeps its own
tolerance (``"<suite>.<check>"`` in :data:`DEFAULT_TOLERANCES`).  Overrides in
:class:`SuiteConfig` may name a single check or a whole suite, and the report carries the *binding* check, the
one with the largest residual-to-tolerance ratio, so that ``passed`` is
exactly ``max_residual <= tolerance``.  The remaining checks are listed in the
report notes.

Randomised inputs:

* algebra components uniform in ``[-2, 2]``;
* group elements with ``u`` uniform in ``[-2, 2]^2``, angle uniform in
  ``[-pi, pi]`` and ``ln lam`` uniform in ``[-2, 2]``;
* phase points with ``|x|`` log-uniform in ``[0.1, 10]`` and ``p`` uniform in
  ``[-2, 2]^2``.

Each suite draws from its own generator seeded by ``(seed, suite index)``, so
a suite's residuals do not depend on which other suites run or in which order.
"""

from __future__ import annotations

import dataclasses
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import algebra as alg
from . import operators as ops
from . import phasespace as ps
from .algebra import AlgebraElement, GroupElement, HeisenbergAlgebraElement, Variant
from .hilbert import (
    GridSpec,
    Wavefunction,
    gaussian_envelope,
    inner,
    norm,
    random_box_state,
    random_state,
    sample,
    box_norm,
)
from .operators import HeisenbergRepConfig, Pair, RepConfig, ShiftMode

__all__ = [
    "DEFAULT_TOLERANCES",
    "SUITES",
    "RunResult",
    "SuiteConfig",
    "SuiteReport",
    "reports_to_json",
    "run_all",
    "run_suite",
]

DEFAULT_TOLERANCES: dict[str, float] = {
    "group_axioms.associativity": 1e-12,
    "group_axioms.identity": 1e-12,
    "group_axioms.inverse": 1e-12,
    "group_axioms.exp_subgroup": 1e-12,
    "group_axioms.exp_basis": 1e-12,
    "group_axioms.cover_projection": 1e-12,
    "bch.slope_deficit": 0.1,
    "bch.trivial_cases": 1e-12,
    "symplectic.punctured": 1e-12,
    "symplectic.r2": 1e-12,
    "symplectic.jacobian_fd": 1e-6,
    "gamma_homomorphism.bracket": 1e-12,
    "gamma_homomorphism.linearity": 1e-12,
    "gamma_homomorphism.fd_oracle": 1e-6,
    "gamma_homomorphism.fd_order_deficit": 0.1,
    "momentum_homomorphism.punctured": 1e-12,
    "momentum_homomorphism.r2_cocycle": 1e-12,
    "momentum_homomorphism.r2_obstruction": 0.5,
    "momentum_homomorphism.r2_extended": 1e-12,
    "hamiltonian_fields.analytic": 1e-12,
    "hamiltonian_fields.defining_equation": 1e-10,
    "hamiltonian_fields.fd_gradient": 1e-8,
    "weyl_punctured.aligned": 1e-12,
    "weyl_punctured.spectral": 1e-8,
    "weyl_punctured.first_relation": 1e-12,
    "weyl_punctured.second_relation": 1e-12,
    "weyl_punctured.unitarity": 1e-12,
    "weyl_r2.aligned": 1e-12,
    "weyl_r2.spectral": 1e-8,
    "weyl_r2.first_relation": 1e-12,
    "weyl_r2.second_relation": 1e-12,
    "weyl_r2.canonical_commutator": 1e-8,
    "weyl_r2.central_operator": 1e-15,
    "commutators.nontrivial": 1e-8,
    "commutators.abelian": 1e-12,
    "commutators.self_adjoint": 1e-10,
    "spectrum_twist.eigenvalues": 1e-12,
    "spectrum_twist.eigenvectors": 1e-12,
    "spectrum_twist.alpha_periodicity": 1e-12,
    "spectrum_twist.cover_phase": 1e-12,
    "quantization_map.pairs": 1e-8,
    "quantization_map.translation_pairs": 1e-12,
}

# trials per suite as a fraction of SuiteConfig.trials (1000 by default)
_TRIAL_DIVISOR = {
    "group_axioms": 1,
    "bch": 50,
    "symplectic": 1,
    "gamma_homomorphism": 2,
    "momentum_homomorphism": 1,
    "hamiltonian_fields": 1,
    "weyl_punctured": 10,
    "weyl_r2": 10,
    "commutators": 100,
    "spectrum_twist": 1000,
    "quantization_map": 10,
}

BCH_K = tuple(range(3, 11))
TWIST_ALPHAS = (0.0, 0.3, 0.5)

_HEIS_SIGN_NOTE = (
    "sign: z(A,B) = P_[A,B] - {P_A,P_B} = -b.a' + b'.a; the extended bracket that makes "
    "P'_(A,r) = P_A + r a homomorphism has central part b.a' - b'.a = -z(A,B)"
)
_HBAR_NOTE = "hbar placement: commutators checked as [s,pi1]=i hbar c, [c,pi1]=-i hbar s, [s,pi2]=i hbar s, [c,pi2]=i hbar c"


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 42
    trials: int = 1000
    tolerances: dict = field(default_factory=dict)
    grid: GridSpec = field(default_factory=GridSpec)
    rep: RepConfig = field(default_factory=RepConfig)
    heis: HeisenbergRepConfig = field(default_factory=HeisenbergRepConfig)

    def __post_init__(self):
        if int(self.trials) < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES) - set(_TRIAL_DIVISOR)
        if unknown:
            raise ValueError(f"unknown tolerance keys: {sorted(unknown)}")
        for k, v in self.tolerances.items():
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ValueError(f"tolerance {k} must be a positive number, got {v!r}")

    def tol(self, key: str) -> float:
        """Tolerance for ``"<suite>.<check>"``; a bare suite key covers all its checks."""
        if key in self.tolerances:
            return float(self.tolerances[key])
        suite = key.split(".", 1)[0]
        return float(self.tolerances.get(suite, DEFAULT_TOLERANCES[key]))

    def trials_for(self, suite: str) -> int:
        return max(1, int(self.trials) // _TRIAL_DIVISOR[suite])


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    trials: int
    max_residual: float
    tolerance: float
    passed: bool
    notes: tuple = ()
    # (check, residual, tolerance) triples; kept out of the JSON schema
    checks: tuple = ()

    def check(self, name: str) -> tuple[float, float]:
        for c, res, tol in self.checks:
            if c == name:
                return res, tol
        raise KeyError(f"{self.suite} has no check {name!r}")

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "trials": self.trials,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "notes": list(self.notes),
        }


class _Checks:
    """Per-suite accumulator of named residuals."""

    def __init__(self, suite: str, cfg: SuiteConfig):
        self.suite = suite
        self.cfg = cfg
        self.worst: dict[str, float] = {}
        self.notes: list[str] = []

    def record(self, check: str, residual: float) -> None:
        residual = float(residual)
        if math.isnan(residual):
            residual = math.inf
        prev = self.worst.get(check, 0.0)
        self.worst[check] = max(prev, residual)

    def report(self, trials: int) -> SuiteReport:
        rows = []
        for check, res in self.worst.items():
            tol = self.cfg.tol(f"{self.suite}.{check}")
            rows.append((res / tol, check, res, tol))
        ratio, check, res, tol = max(rows, key=lambda r: r[0])
        lines = [
            f"{c}: residual={r:.3e} tol={t:.1e} {'ok' if r <= t else 'FAIL'}"
            for _, c, r, t in rows
        ]
        lines.append(f"binding check: {check}")
        checks = tuple((c, r, t) for _, c, r, t in rows)
        return SuiteReport(self.suite, trials, res, tol, res <= tol, tuple(lines + self.notes), checks)


# --------------------------------------------------------------------------
# samplers
# --------------------------------------------------------------------------


def _rand_algebra(rng) -> AlgebraElement:
    return AlgebraElement.from_array(rng.uniform(-2.0, 2.0, 4))


def _rand_group(rng, variant=Variant.BASE) -> GroupElement:
    u = rng.uniform(-2.0, 2.0, 2)
    theta = rng.uniform(-math.pi, math.pi)
    lam = math.exp(rng.uniform(-2.0, 2.0))
    return GroupElement(u, theta, lam, variant)


def _rand_point(rng) -> ps.PhasePoint:
    radius = math.exp(rng.uniform(math.log(0.1), math.log(10.0)))
    angle = rng.uniform(-math.pi, math.pi)
    return ps.PhasePoint(
        (radius * math.cos(angle), radius * math.sin(angle)), rng.uniform(-2.0, 2.0, 2)
    )


def _rand_heis(rng) -> HeisenbergAlgebraElement:
    v = rng.uniform(-2.0, 2.0, 5)
    return HeisenbergAlgebraElement(v[:2], v[2:4], v[4])


def _vec_gap(v: ps.TangentVector, w: ps.TangentVector) -> float:
    return float(np.max(np.abs(v.as_array() - w.as_array())))


def _analytic_state(grid: GridSpec) -> Wavefunction:
    """``e^{i phi}`` times a Gaussian in ``s``, normalised."""
    center = 0.5 * (grid.s_min + grid.s_max)
    width = grid.length_s / 8.0
    psi = sample(
        lambda phi, rho: np.exp(1j * phi) * gaussian_envelope(np.log(rho), center, width), grid
    )
    return psi * (1.0 / norm(psi))


# --------------------------------------------------------------------------
# algebra suites
# --------------------------------------------------------------------------


def group_axiom_residuals(g, h, k, A, t, s) -> dict[str, float]:
    """Residuals of the group axioms and the one-parameter subgroup law."""
    e = alg.identity(g.variant)
    cover = Variant.COVER
    return {
        "associativity": alg.group_distance(alg.product(alg.product(g, h), k), alg.product(g, alg.product(h, k))),
        "identity": max(alg.group_distance(alg.product(e, g), g), alg.group_distance(alg.product(g, e), g)),
        "inverse": max(
            alg.group_distance(alg.product(g, alg.inverse(g)), e),
            alg.group_distance(alg.product(alg.inverse(g), g), e),
        ),
        "exp_subgroup": alg.group_distance(
            alg.product(alg.exp(t * A, cover), alg.exp(s * A, cover)), alg.exp((t + s) * A, cover)
        ),
    }


def _exp_basis_residual(rng) -> float:
    b1, b2, th, r = rng.uniform(-2.0, 2.0, 4)
    cases = [
        (AlgebraElement(b1, 0, 0, 0), GroupElement((b1, 0.0), 0.0, 1.0)),
        (AlgebraElement(0, b2, 0, 0), GroupElement((0.0, b2), 0.0, 1.0)),
        (AlgebraElement(0, 0, th, 0), GroupElement((0.0, 0.0), th, 1.0)),
        (AlgebraElement(0, 0, 0, r), GroupElement((0.0, 0.0), 0.0, math.exp(r))),
    ]
    worst = 0.0
    for A, expected in cases:
        got = alg.exp(A)
        worst = max(
            worst,
            float(np.max(np.abs(got.u - expected.u))),
            abs(got.theta - expected.theta),
            abs(got.lam - expected.lam),
        )
    return worst


def suite_group_axioms(cfg: SuiteConfig, rng) -> SuiteReport:
    chk = _Checks("group_axioms", cfg)
    n = cfg.trials_for("group_axioms")
    for _ in range(n):
        g, h, k = _rand_group(rng), _rand_group(rng), _rand_group(rng)
        A = _rand_algebra(rng)
        t, s = rng.uniform(-1.0, 1.0, 2)
        for name, res in group_axiom_residuals(g, h, k, A, t, s).items():
            chk.record(name, res)
        chk.record("exp_basis", _exp_basis_residual(rng))
        gc, hc = _rand_group(rng, Variant.COVER), _rand_group(rng, Variant.COVER)
        gc = GroupElement(gc.u, gc.theta * 5.0, gc.lam, Variant.COVER)
        chk.record(
            "cover_projection",
            alg.group_distance(alg.project(alg.product(gc, hc)), alg.product(alg.project(gc), alg.project(hc))),
        )
    chk.notes.append("exp subgroup sampled with |t|, |s| <= 1")
    return chk.report(n)


def bch_slope(A: AlgebraElement, B: AlgebraElement, ks: Sequence[int] = BCH_K) -> Optional[float]:
    """Least-squares log-log slope of the commutator defect over ``t = s = 2^-k``.

    ``None`` when the defect vanishes to rounding (commuting generators).
    """
    ts = np.array([2.0**-k for k in ks])
    d = np.array([alg.bch_commutator_check(A, B, t, t) for t in ts])
    if np.any(d <= 1e-15):
        return None
    return float(np.polyfit(np.log(ts), np.log(d), 1)[0])


def suite_bch(cfg: SuiteConfig, rng) -> SuiteReport:
    chk = _Checks("bch", cfg)
    n = cfg.trials_for("bch")
    slopes = []
    skipped = 0
    for _ in range(n):
        A, B = _rand_algebra(rng), _rand_algebra(rng)
        slope = bch_slope(A, B)
        if slope is None:
            skipped += 1
            chk.record("slope_deficit", 0.0)
        else:
            slopes.append(slope)
            chk.record("slope_deficit", max(0.0, 3.0 - slope))
        chk.record(
            "trivial_cases",
            max(alg.bch_commutator_check(A, A, 0.5, 0.5), alg.bch_commutator_check(A, B, 0.0, 0.5)),
        )
    if slopes:
        chk.notes.append(f"fitted slopes: min={min(slopes):.4f} max={max(slopes):.4f}")
    if skipped:
        chk.notes.append(f"{skipped} commuting pair(s) skipped")
    return chk.report(n)


def suite_symplectic(cfg: SuiteConfig, rng) -> SuiteReport:
    chk = _Checks("symplectic", cfg)
    n = cfg.trials_for("symplectic")
    W = ps.OMEGA
    for i in range(n):
        g = _rand_group(rng)
        J = ps.action_jacobian(g)
        chk.record("punctured", np.max(np.abs(J.T @ W @ J - W)))
        u, v = rng.uniform(-2.0, 2.0, 2), rng.uniform(-2.0, 2.0, 2)
        z = rng.uniform(-2.0, 2.0, 4)
        # the translation action is affine, so a unit-step central difference is exact
        Jr = np.column_stack(
            [(ps.act_r2(u, v, z + e) - ps.act_r2(u, v, z - e)) / 2.0 for e in np.eye(4)]
        )
        chk.record("r2", np.max(np.abs(Jr.T @ W @ Jr - W)))
        if i < 100:
            pt = _rand_point(rng)
            h = 1e-6
            z0 = pt.as_array()
            Jfd = np.column_stack(
                [
                    (ps.act(g, ps.PhasePoint.from_array(z0 + h * e)).as_array()
                     - ps.act(g, ps.PhasePoint.from_array(z0 - h * e)).as_array()) / (2 * h)
                    for e in np.eye(4)
                ]
            )
            chk.record("jacobian_fd", np.max(np.abs(Jfd - J)) / max(1.0, np.max(np.abs(J))))
    return chk.report(n)


# --------------------------------------------------------------------------
# phase-space suites
# --------------------------------------------------------------------------


def fd_order(A: AlgebraElement, pt: ps.PhasePoint, h: float = 1e-2) -> Optional[float]:
    """Observed order of the finite-difference oracle under halving ``h``."""
    exact = ps.fundamental_field(A, pt)
    e1 = _vec_gap(ps.fundamental_field_fd(A, pt, h), exact)
    e2 = _vec_gap(ps.fundamental_field_fd(A, pt, h / 2), exact)
    if e1 < 1e-11 or e2 < 1e-13:
        return None
    return math.log2(e1 / e2)


def suite_gamma_homomorphism(cfg: SuiteConfig, rng) -> SuiteReport:
    chk = _Checks("gamma_homomorphism", cfg)
    n = cfg.trials_for("gamma_homomorphism")
    orders = []
    for i in range(n):
        A, B, pt = _rand_algebra(rng), _rand_algebra(rng), _rand_point(rng)
        chk.record(
            "bracket", _vec_gap(ps.field_bracket(A, B, pt), ps.fundamental_field(alg.bracket(A, B), pt))
        )
        chk.record(
            "linearity",
            _vec_gap(ps.fundamental_field(A + B, pt), ps.fundamental_field(A, pt) + ps.fundamental_field(B, pt)),
        )
        exact = ps.fundamental_field(A, pt)
        scale = max(1.0, float(np.max(np.abs(exact.as_array()))))
        chk.record("fd_oracle", _vec_gap(ps.fundamental_field_fd(A, pt), exact) / scale)
        if i < 100:
            p = fd_order(A, pt)
            if p is not None:
                orders.append(p)
                chk.record("fd_order_deficit", max(0.0, 2.0 - p))
    if orders:
        chk.notes.append(f"observed FD order under h-halving: min={min(orders):.4f} max={max(orders):.4f}")
    return chk.report(n)


def suite_momentum_homomorphism(cfg: SuiteConfig, rng) -> SuiteReport:
    chk = _Checks("momentum_homomorphism", cfg)
    n = cfg.trials_for("momentum_homomorphism")
    zmin = math.inf
    for _ in range(n):
        A, B, pt = _rand_algebra(rng), _rand_algebra(rng), _rand_point(rng)
        lhs = ps.poisson(ps.momentum_observable(A), ps.momentum_observable(B), pt)
        chk.record("punctured", abs(lhs - ps.momentum_map(alg.bracket(A, B), pt)))

        Ah, Bh = _rand_heis(rng), _rand_heis(rng)
        z4 = rng.uniform(-2.0, 2.0, 4)
        zpt = ps.PhasePoint.from_array(z4)
        pb = ps.poisson(ps.r2_momentum_observable(Ah), ps.r2_momentum_observable(Bh), zpt)
        # R^4 is abelian: P_[A,B] = P_0 = 0
        z = 0.0 - pb
        chk.record("r2_cocycle", abs(z - (-float(Ah.b @ Bh.a) + float(Bh.b @ Ah.a))))
        zmin = min(zmin, abs(z))
        chk.record("r2_obstruction", 1.0 if abs(z) <= 1e-12 else 0.0)
        ext = ps.poisson(ps.r2_extended_observable(Ah), ps.r2_extended_observable(Bh), zpt)
        rhs = ps.r2_extended_observable(alg.heis_bracket(Ah, Bh))(zpt)
        chk.record("r2_extended", abs(ext - rhs))
    chk.notes.append(f"smallest |z(A,B)| over generic plane pairs: {zmin:.3e}")
    chk.notes.append(_HEIS_SIGN_NOTE)
    return chk.report(n)


def suite_hamiltonian_fields(cfg: SuiteConfig, rng) -> SuiteReport:
    chk = _Checks("hamiltonian_fields", cfg)
    n = cfg.trials_for("hamiltonian_fields")
    for _ in range(n):
        A, pt = _rand_algebra(rng), _rand_point(rng)
        gamma = ps.fundamental_field(A, pt)
        f = ps.momentum_observable(A)
        xi = ps.hamiltonian_field(f, pt)
        chk.record("analytic", _vec_gap(xi, -gamma))
        w = ps.TangentVector.from_array(rng.uniform(-1.0, 1.0, 4))
        chk.record("defining_equation", abs(ps.symplectic_form(xi, w) - ps.gradient(f, pt) @ w.as_array()))
        xi_fd = ps.hamiltonian_field(ps.momentum_observable(A, analytic=False), pt)
        chk.record("fd_gradient", _vec_gap(xi_fd, -gamma))
    return chk.report(n)


# --------------------------------------------------------------------------
# operator suites
# --------------------------------------------------------------------------


def _state_seed(cfg: SuiteConfig, suite_index: int, trial: int):
    return [cfg.seed, suite_index, trial]


def suite_weyl_punctured(cfg: SuiteConfig, rng) -> SuiteReport:
    chk = _Checks("weyl_punctured", cfg)
    n = cfg.trials_for("weyl_punctured")
    grid = cfg.grid
    aligned = dataclasses.replace(cfg.rep, shift_mode=ShiftMode.EXACT_ALIGNED)
    spectral = dataclasses.replace(cfg.rep, shift_mode=ShiftMode.SPECTRAL)
    max_k = max(1, grid.n_s // 8)
    for i in range(n):
        psi = random_state(_state_seed(cfg, 7, i), grid)
        m1, m2 = rng.integers(-grid.n_phi, grid.n_phi + 1, 2)
        k1, k2 = rng.integers(-max_k, max_k + 1, 2)
        b, b2 = rng.uniform(-2.0, 2.0, 2), rng.uniform(-2.0, 2.0, 2)
        th1, th2 = m1 * grid.dphi, m2 * grid.dphi
        lam1, lam2 = math.exp(k1 * grid.ds), math.exp(k2 * grid.ds)
        chk.record("aligned", ops.weyl_residual(th1, lam1, b, psi, aligned))

        th = rng.uniform(-math.pi, math.pi)
        lam = math.exp(rng.uniform(-1.0, 1.0))
        chk.record("spectral", ops.weyl_residual(th, lam, b, psi, spectral))

        mode = cfg.rep
        if mode.shift_mode is ShiftMode.SPECTRAL:
            th1, th2 = rng.uniform(-math.pi, math.pi, 2)
            lam1, lam2 = np.exp(rng.uniform(-0.5, 0.5, 2))
        lhs = ops.apply_U(th1, lam1, ops.apply_U(th2, lam2, psi, mode), mode)
        rhs = ops.apply_U(th1 + th2, math.exp(math.log(lam1) + math.log(lam2)), psi, mode)
        chk.record("first_relation", norm(lhs - rhs))
        lhs = ops.apply_V(b, ops.apply_V(b2, psi, mode), mode)
        chk.record("second_relation", norm(lhs - ops.apply_V(b + b2, psi, mode)))
        chk.record(
            "unitarity",
            max(
                abs(norm(ops.apply_U(th1, lam1, psi, aligned)) - 1.0),
                abs(norm(ops.apply_U(th, lam, psi, spectral)) - 1.0),
                abs(norm(ops.apply_V(b, psi, mode)) - 1.0),
            ),
        )
    return chk.report(n)


def suite_weyl_r2(cfg: SuiteConfig, rng) -> SuiteReport:
    chk = _Checks("weyl_r2", cfg)
    n = cfg.trials_for("weyl_r2")
    heis = cfg.heis
    box = heis.box
    aligned = dataclasses.replace(heis, shift_mode=ShiftMode.EXACT_ALIGNED)
    spectral = dataclasses.replace(heis, shift_mode=ShiftMode.SPECTRAL)
    span = max(1, box.n // 16)
    for i in range(n):
        psi = random_box_state(_state_seed(cfg, 8, i), box)
        a = rng.integers(-span, span + 1, 2) * box.dx / heis.mu
        a2 = rng.integers(-span, span + 1, 2) * box.dx / heis.mu
        b = rng.integers(-span, span + 1, 2) * box.dual_spacing
        b2 = rng.integers(-span, span + 1, 2) * box.dual_spacing
        r = rng.uniform(-2.0, 2.0)
        chk.record("aligned", ops.r2_weyl_residual(a, b, psi, aligned))
        chk.record(
            "first_relation",
            box_norm(ops.r2_U(a, ops.r2_U(a2, psi, aligned), aligned) - ops.r2_U(a + a2, psi, aligned)),
        )
        chk.record(
            "second_relation",
            box_norm(ops.r2_V(b, ops.r2_V(b2, psi, aligned), aligned) - ops.r2_V(b + b2, psi, aligned)),
        )
        ac = rng.uniform(-1.0, 1.0, 2)
        bc = rng.uniform(-2.0, 2.0, 2)
        chk.record("spectral", ops.r2_weyl_residual(ac, bc, psi, spectral))
        if i < 10:
            worst = max(ops.r2_commutator_residual(p, q, psi, heis) for p in (0, 1) for q in (0, 1))
            chk.record("canonical_commutator", worst)
        w = ops.r2_W(r, psi, heis)
        chk.record(
            "central_operator",
            max(
                box_norm(w - psi * np.exp(-1j * heis.mu * r)),
                box_norm(ops.r2_z(psi, heis) - psi * heis.mu),
            ),
        )
    return chk.report(n)


def suite_commutators(cfg: SuiteConfig, rng) -> SuiteReport:
    chk = _Checks("commutators", cfg)
    n = cfg.trials_for("commutators")
    grid = cfg.grid
    states = [_analytic_state(grid)] + [random_state(_state_seed(cfg, 9, i), grid) for i in range(n)]
    nontrivial = (Pair.S_PI1, Pair.C_PI1, Pair.S_PI2, Pair.C_PI2)
    for j, psi in enumerate(states):
        chk.record("nontrivial", max(ops.commutator_residual(p, psi, cfg.rep) for p in nontrivial))
        chk.record(
            "abelian", max(ops.commutator_residual(p, psi, cfg.rep) for p in (Pair.C_S, Pair.PI1_PI2))
        )
        chi = states[(j + 1) % len(states)]
        for op in (ops.apply_c, ops.apply_s, ops.apply_pi1, ops.apply_pi2):
            chk.record("self_adjoint", abs(inner(psi, op(chi, cfg.rep)) - inner(op(psi, cfg.rep), chi)))
    chk.notes.append(_HBAR_NOTE)
    return chk.report(len(states))


def suite_spectrum_twist(cfg: SuiteConfig, rng) -> SuiteReport:
    chk = _Checks("spectrum_twist", cfg)
    grid = cfg.grid
    alphas = sorted(set(TWIST_ALPHAS) | {cfg.rep.alpha})
    phi = grid.phi
    for a in alphas:
        rep = dataclasses.replace(cfg.rep, alpha=a)
        table = ops.pi1_spectrum_table(rep, grid)
        ns = np.array([t[0] for t in table], dtype=float)
        eig = np.array([t[1] for t in table])
        chk.record("eigenvalues", np.max(np.abs(eig - rep.hbar * (ns + a))))
        basis = np.exp(1j * np.outer(phi, ns))
        image = ops._pi1_amps(basis, grid, rep)
        # relative to max(1, |eigenvalue|): plane waves up to |n| ~ N/2 carry roundoff ~ eps |n|
        defect = np.linalg.norm(image - basis * eig[None, :], axis=0) / (
            np.linalg.norm(basis, axis=0) * np.maximum(1.0, np.abs(eig))
        )
        chk.record("eigenvectors", np.max(defect))

        shifted = ops.pi1_spectrum(dataclasses.replace(rep, alpha=a + 1.0), grid)
        chk.record("alpha_periodicity", _window_set_gap(eig, np.array(shifted), rep.hbar))

        psi = random_state(_state_seed(cfg, 10, int(round(a * 1000))), grid, (8, grid.n_s // 4))
        for mode in ShiftMode:
            cover = dataclasses.replace(rep, shift_mode=mode)
            once = ops.apply_U(2.0 * math.pi, 1.0, psi, cover)
            chk.record("cover_phase", norm(once - psi * np.exp(-2j * math.pi * a)))
    chk.notes.append(f"alphas checked: {', '.join(repr(a) for a in alphas)}")
    chk.notes.append("spectra compared on their common window; the Nyquist mode is excluded")
    return chk.report(len(alphas))


def _window_set_gap(x: np.ndarray, y: np.ndarray, hbar: float) -> float:
    """Distance between two sorted spectra restricted to their common range."""
    lo, hi = max(x.min(), y.min()), min(x.max(), y.max())
    pad = 0.5 * hbar
    xs = x[(x >= lo - pad * 1e-6) & (x <= hi + pad * 1e-6)]
    ys = y[(y >= lo - pad * 1e-6) & (y <= hi + pad * 1e-6)]
    if xs.size != ys.size:
        return math.inf
    return float(np.max(np.abs(np.sort(xs) - np.sort(ys)))) if xs.size else 0.0


def suite_quantization_map(cfg: SuiteConfig, rng) -> SuiteReport:
    chk = _Checks("quantization_map", cfg)
    n = cfg.trials_for("quantization_map")
    rep = dataclasses.replace(cfg.rep, alpha=0.0)
    grid = cfg.grid
    n_states = min(n, 10)
    states = [random_state(_state_seed(cfg, 11, i), grid) for i in range(n_states)]
    for i in range(n):
        psi = states[i % n_states]
        A, B = _rand_algebra(rng), _rand_algebra(rng)
        chk.record("pairs", ops.quantization_residual(A, B, psi, rep))
        At = AlgebraElement(A.b1, A.b2, 0.0, 0.0)
        Bt = AlgebraElement(B.b1, B.b2, 0.0, 0.0)
        chk.record("translation_pairs", ops.quantization_residual(At, Bt, psi, rep))
    chk.notes.append("dictionary: P_(b,0,0) -> b1 c + b2 s, P_(0,theta,r) -> theta pi1 + r pi2; alpha = 0")
    return chk.report(n)


SUITES: dict[str, Callable[[SuiteConfig, np.random.Generator], SuiteReport]] = {
    "group_axioms": suite_group_axioms,
    "bch": suite_bch,
    "symplectic": suite_symplectic,
    "gamma_homomorphism": suite_gamma_homomorphism,
    "momentum_homomorphism": suite_momentum_homomorphism,
    "hamiltonian_fields": suite_hamiltonian_fields,
    "weyl_punctured": suite_weyl_punctured,
    "weyl_r2": suite_weyl_r2,
    "commutators": suite_commutators,
    "spectrum_twist": suite_spectrum_twist,
    "quantization_map": suite_quantization_map,
}


def run_suite(name: str, cfg: SuiteConfig) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    index = list(SUITES).index(name)
    rng = np.random.default_rng([cfg.seed, index])
    return SUITES[name](cfg, rng)


@dataclass(frozen=True)
class RunResult:
    reports: tuple
    passed: bool
    runtime: float


def run_all(cfg: SuiteConfig, suites: Optional[Iterable[str]] = None, workers: int = 1) -> RunResult:
    """Run the selected suites (default: all) and collect reports in registry order."""
    selected = list(SUITES) if suites is None else list(dict.fromkeys(suites))
    for name in selected:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    ordered = [name for name in SUITES if name in selected]
    start = time.perf_counter()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(lambda n: run_suite(n, cfg), ordered))
    else:
        reports = [run_suite(n, cfg) for n in ordered]
    runtime = time.perf_counter() - start
    return RunResult(tuple(reports), all(r.passed for r in reports), runtime)


def reports_to_json(reports: Iterable[SuiteReport]) -> str:
    import json

    return json.dumps([r.to_dict() for r in reports], indent=2) + "\n"
