"""Proximal gradient descent for the regularized generalized singular value
problem

    min_z  r(z) + delta * penalty(z),     r(z) = ||A_num z||^2 / ||A_den z||^2

with either the l1 penalty (soft-thresholding prox) or the weighted-l2
surrogate of the lq quasi-norm (diagonal reweighting prox).
"""
import dataclasses
import enum
import math
import typing as t

import numpy as np

from . import sgsvp_matrix
from .sgsvp_errors import (
    DegenerateDenominatorError,
    DivergenceError,
    InputError,
    ShapeError,
)
from .sgsvp_matrix import DenseMatrix, RealVector

DENOMINATOR_FLOOR = 1e-30
DEFAULT_EPSILON = 10 ** -2.5
DEFAULT_DELTA = 20627 / 23750


class PenaltyKind(enum.Enum):
    """L1: soft-thresholding of ||z||_1.
    LQ: weighted-l2 surrogate of ||z||_q^q, 0 < q < 1.
    WEIGHTED_L1: the same surrogate with q = 1 (reweighted l1).
    """

    L1 = "l1"
    LQ = "lq"
    WEIGHTED_L1 = "weighted-l1"

    @property
    def reweighted(self) -> bool:
        return self is not PenaltyKind.L1


def penalty_for_q(q: float) -> PenaltyKind:
    """The reweighted penalty for a given q (LQ below 1, WEIGHTED_L1 at 1)."""
    return PenaltyKind.LQ if q < 1 else PenaltyKind.WEIGHTED_L1


class InitMode(enum.Enum):
    ONES_UNIT_NORM = "ones-unit-norm"
    SEEDED_GAUSSIAN = "seeded-gaussian"


@dataclasses.dataclass(frozen=True)
class PgdConfig:
    """Solver parameters.

    Keyword args:
        q: float in (0, 1]. Exponent of the lq penalty (ignored by L1).
        epsilon: float > 0. Smoothing of the weighted-l2 surrogate (ignored
            by L1).
        alpha: float > 0. Fixed step size.
        delta1, delta2: float > 0. Regularization weights of the first and
            second direction.
        maxiter: int >= 1.
        tol: float >= 0. Relative change of the objective below which the
            iteration stops. 0 disables early stopping.
        init: InitMode (or its string value). Initial iterate.
        seed: int. Seed for the SEEDED_GAUSSIAN initial iterate.
    """

    q: float = 1.0
    epsilon: float = DEFAULT_EPSILON
    alpha: float = 1e-3
    delta1: float = DEFAULT_DELTA
    delta2: float = DEFAULT_DELTA
    maxiter: int = 10_000
    tol: float = 1e-4
    init: InitMode = InitMode.ONES_UNIT_NORM
    seed: int = 42

    def __post_init__(self):
        if not isinstance(self.init, InitMode):
            try:
                object.__setattr__(self, "init", InitMode(self.init))
            except ValueError:
                raise InputError(  # pylint: disable=raise-missing-from
                    f"unknown init mode {self.init!r}; expected one of "
                    f"{[mode.value for mode in InitMode]}"
                )
        for name, ok in (
            ("q", 0 < self.q <= 1),
            ("epsilon", self.epsilon > 0),
            ("alpha", self.alpha > 0),
            ("delta1", self.delta1 > 0),
            ("delta2", self.delta2 > 0),
            ("maxiter", int(self.maxiter) == self.maxiter and self.maxiter >= 1),
            ("tol", self.tol >= 0),
        ):
            if not ok:
                raise InputError(f"invalid solver setting {name}={getattr(self, name)!r}")
        object.__setattr__(self, "maxiter", int(self.maxiter))

    def delta(self, direction: int) -> float:
        return self.delta1 if direction == 1 else self.delta2


@dataclasses.dataclass
class SolveTrace:
    objective_history: np.ndarray
    relative_change_history: np.ndarray
    iterations_run: int
    converged: bool
    final_rayleigh: float

    @property
    def final_objective(self) -> float:
        return float(self.objective_history[-1])


def initial_iterate(m: int, cfg: PgdConfig) -> RealVector:
    if cfg.init is InitMode.SEEDED_GAUSSIAN:
        rng = np.random.Generator(np.random.Philox(cfg.seed))
        z = rng.standard_normal(m)
        return z / np.linalg.norm(z)
    return np.full(m, 1 / math.sqrt(m))


def _quotient(num_res, den_res, iteration=None) -> t.Tuple[float, float]:
    den = float(den_res @ den_res)
    if math.isfinite(den) and den < DENOMINATOR_FLOOR:
        raise DegenerateDenominatorError(den, iteration)
    return float(num_res @ num_res) / den, den


def _gradient(A_num, A_den, num_res, den_res, den, r_value) -> RealVector:
    return (2 / den) * (
        sgsvp_matrix.matvec_transposed(A_num, num_res)
        - r_value * sgsvp_matrix.matvec_transposed(A_den, den_res)
    )


def rayleigh_quotient(
    A_num: DenseMatrix, A_den: DenseMatrix, z: RealVector
) -> float:
    """Returns ||A_num z||^2 / ||A_den z||^2.

    Raises:
        DegenerateDenominatorError if ||A_den z||^2 < DENOMINATOR_FLOOR.
    """
    r_value, _ = _quotient(
        sgsvp_matrix.matvec(A_num, z), sgsvp_matrix.matvec(A_den, z)
    )
    return r_value


def gradient(
    A_num: DenseMatrix, A_den: DenseMatrix, z: RealVector, r_value: float
) -> RealVector:
    """Gradient of the Rayleigh quotient at z, given r_value = r(z):

        (2 / ||A_den z||^2) (A_num^T (A_num z) - r(z) A_den^T (A_den z))
    """
    num_res = sgsvp_matrix.matvec(A_num, z)
    den_res = sgsvp_matrix.matvec(A_den, z)
    _, den = _quotient(num_res, den_res)
    return _gradient(A_num, A_den, num_res, den_res, den, r_value)


def gd_step(z: RealVector, grad: RealVector, alpha: float) -> RealVector:
    if z.shape != grad.shape:
        raise ShapeError(
            f"gd_step: iterate has shape {z.shape}, gradient {grad.shape}"
        )
    return z - alpha * grad


def prox_l1(y: RealVector, alpha: float, delta: float) -> RealVector:
    """Soft threshold at alpha * delta / 2."""
    return np.sign(y) * np.maximum(np.abs(y) - alpha * delta / 2, 0.0)


def reweight_diagonal(z: RealVector, epsilon: float, q: float) -> RealVector:
    """Diagonal of D_{epsilon,q}(z): (z_l^2 + epsilon^2)^((q - 2) / 2).

    The diagonal matrix itself is never formed.
    """
    if not epsilon > 0 or not 0 < q <= 1:
        raise InputError(
            f"reweighting needs epsilon > 0 and 0 < q <= 1 "
            f"(got epsilon={epsilon!r}, q={q!r})"
        )
    return (z * z + epsilon * epsilon) ** ((q - 2) / 2)


def prox_lq(
    y: RealVector, d: RealVector, alpha: float, delta: float
) -> RealVector:
    """(I + alpha delta D)^-1 y, computed elementwise."""
    if y.shape != d.shape:
        raise ShapeError(f"prox_lq: y has shape {y.shape}, d {d.shape}")
    return y / (1 + alpha * delta * d)


def effective_q(cfg: PgdConfig, kind: PenaltyKind) -> float:
    return 1.0 if kind is PenaltyKind.WEIGHTED_L1 else cfg.q


def penalty(z: RealVector, cfg: PgdConfig, kind: PenaltyKind) -> float:
    """||z||_1 for L1; the weighted quadratic z^T D(z) z otherwise."""
    if kind is PenaltyKind.L1:
        return float(np.abs(z).sum())
    d = reweight_diagonal(z, cfg.epsilon, effective_q(cfg, kind))
    return float((d * z * z).sum())


def objective(
    A_num: DenseMatrix,
    A_den: DenseMatrix,
    z: RealVector,
    cfg: PgdConfig,
    kind: PenaltyKind,
    delta: float,
) -> float:
    """h(z) = r(z) + delta * penalty(z)."""
    return rayleigh_quotient(A_num, A_den, z) + delta * penalty(z, cfg, kind)


def _relative_change(h_old: float, h_new: float) -> float:
    if abs(h_old) < DENOMINATOR_FLOOR:
        return 0.0 if abs(h_new) < DENOMINATOR_FLOOR else math.inf
    return abs(h_new - h_old) / abs(h_old)


def solve(
    A_num: DenseMatrix,
    A_den: DenseMatrix,
    cfg: PgdConfig,
    kind: PenaltyKind,
    delta: float,
    z0: t.Optional[RealVector] = None,
) -> t.Tuple[RealVector, SolveTrace]:
    """Runs proximal gradient descent from z0 (default: the iterate chosen by
    `cfg.init`).

    Each iteration: (reweighted kinds only) D at the current iterate, the
    Rayleigh quotient and its gradient, a gradient step, and the prox of
    the penalty. Stops after `cfg.maxiter` iterations or once
    |h(z_new) - h(z)| / |h(z)| < cfg.tol.

    Raises:
        DegenerateDenominatorError if ||A_den z||^2 drops below
            DENOMINATOR_FLOOR at any iterate.
        DivergenceError if the objective stops being finite.
        InputError for inconsistent shapes or a q/penalty mismatch.
    """
    A_num = np.asarray(A_num, dtype=np.float64)
    A_den = np.asarray(A_den, dtype=np.float64)
    if A_num.shape[1] != A_den.shape[1]:
        raise ShapeError(
            f"numerator has {A_num.shape[1]} columns, "
            f"denominator {A_den.shape[1]}"
        )
    if kind is PenaltyKind.LQ and not cfg.q < 1:
        raise InputError(
            f"the lq penalty needs q < 1 (got q={cfg.q!r}); "
            "use the weighted-l1 penalty for q = 1"
        )
    if not delta > 0:
        raise InputError(f"delta must be positive, got {delta!r}")
    m = A_num.shape[1]
    q = effective_q(cfg, kind)
    if z0 is None:
        z = initial_iterate(m, cfg)
    else:
        z = sgsvp_matrix.as_vector(z0, "initial iterate")
        if z.shape[0] != m:
            raise ShapeError(f"initial iterate has length {z.shape[0]}, not {m}")

    def _penalty(vec):
        return penalty(vec, cfg, kind)

    objectives = []
    changes = []
    converged = False
    with np.errstate(over="ignore", invalid="ignore"):
        num_res = sgsvp_matrix.matvec(A_num, z)
        den_res = sgsvp_matrix.matvec(A_den, z)
        r_value, den = _quotient(num_res, den_res, 0)
        h = r_value + delta * _penalty(z)
        if not math.isfinite(h):
            raise DivergenceError(0, cfg.alpha)
        objectives.append(h)
        for k in range(cfg.maxiter):
            if kind.reweighted:
                d = reweight_diagonal(z, cfg.epsilon, q)
            grad = _gradient(A_num, A_den, num_res, den_res, den, r_value)
            y = gd_step(z, grad, cfg.alpha)
            if kind.reweighted:
                z_new = prox_lq(y, d, cfg.alpha, delta)
            else:
                z_new = prox_l1(y, cfg.alpha, delta)
            num_res = sgsvp_matrix.matvec(A_num, z_new)
            den_res = sgsvp_matrix.matvec(A_den, z_new)
            r_new, den = _quotient(num_res, den_res, k + 1)
            h_new = r_new + delta * _penalty(z_new)
            if not math.isfinite(h_new):
                raise DivergenceError(k + 1, cfg.alpha)
            change = _relative_change(h, h_new)
            objectives.append(h_new)
            changes.append(change)
            z, h, r_value = z_new, h_new, r_new
            if change < cfg.tol:
                converged = True
                break
    return z, SolveTrace(
        objective_history=np.array(objectives),
        relative_change_history=np.array(changes),
        iterations_run=len(changes),
        converged=converged,
        final_rayleigh=r_value,
    )
