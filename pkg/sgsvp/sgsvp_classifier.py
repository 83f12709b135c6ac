"""Non-parallel proximal hyperplanes built from two sparse GSVP solutions.

Plane 0 is fitted to lie close to the Class 0 samples and far from the
Class 1 samples, plane 1 the other way round. A sample goes to the class of
the plane it is (relatively) closer to:

    class 0  iff  |x.w0 + b0| / ||w0|| <= |x.w1 + b1| / ||w1||
"""
import dataclasses
import typing as t
import warnings

import numpy as np

from . import sgsvp_matrix
from . import sgsvp_select
from . import sgsvp_solver
from .sgsvp_errors import EmptyModelError, InputError, ShapeError
from .sgsvp_matrix import DenseMatrix, RealVector

# A final Rayleigh quotient this close to 1 means the plane is no closer to
# its own class than to the other one.
NON_DISCRIMINATIVE_TOL = 1e-9


@dataclasses.dataclass
class Hyperplane:
    w: RealVector
    b: float

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.w))

    def distances(self, X: DenseMatrix) -> np.ndarray:
        """Normalized distance of each row of X to the plane."""
        norm = self.norm
        if not norm > 0:
            raise EmptyModelError(
                "hyperplane normal is zero (every feature was deselected or "
                "shrunk to zero); try a smaller delta or disable masking"
            )
        return np.abs(X @ self.w + self.b) / norm


@dataclasses.dataclass
class GsvpSvmModel:
    plane0: Hyperplane
    plane1: Hyperplane
    selection: sgsvp_select.SelectionResult
    config: sgsvp_solver.PgdConfig
    penalty: sgsvp_solver.PenaltyKind
    discriminative: bool = True
    feature_names: t.Tuple[str, ...] = ()
    # Not serialized; None for models read back from disk.
    traces: t.Optional[
        t.Tuple[sgsvp_solver.SolveTrace, sgsvp_solver.SolveTrace]
    ] = None

    @property
    def n_features(self) -> int:
        return self.plane0.w.shape[0]


def _check_blocks(C1, C2):
    C1 = sgsvp_matrix.as_matrix(C1, "C1 (Class 0 samples)")
    C2 = sgsvp_matrix.as_matrix(C2, "C2 (Class 1 samples)")
    if C1.shape[1] != C2.shape[1]:
        raise ShapeError(
            f"class blocks have {C1.shape[1]} and {C2.shape[1]} features"
        )
    if C1.shape[1] < 2:
        raise ShapeError("need at least 2 features")
    return C1, C2


def fit(
    C1: DenseMatrix,
    C2: DenseMatrix,
    cfg: sgsvp_solver.PgdConfig,
    kind: sgsvp_solver.PenaltyKind,
    mask: bool = True,
    elbow_rule: str = "per-vector",
    degenerate_fallback: bool = True,
    feature_names: t.Sequence[str] = (),
) -> GsvpSvmModel:
    """Fits both planes and applies elbow-based feature selection.

    Args:
        C1: Class 0 samples (rows).
        C2: Class 1 samples (rows).
        cfg: solver settings; delta1 regularizes plane 0, delta2 plane 1.
        kind: penalty.

    Keyword args:
        mask: if False, every feature is kept.
        elbow_rule, degenerate_fallback: passed to select_features().
        feature_names: stored on the model for reporting.

    Raises:
        SolverError subclasses from the solver; EmptyModelError if a masked
        normal is zero.
    """
    C1, C2 = _check_blocks(C1, C2)
    if feature_names and len(feature_names) != C1.shape[1]:
        raise InputError(
            f"{len(feature_names)} feature names for {C1.shape[1]} features"
        )
    C1_aug = sgsvp_matrix.augment_with_ones(C1)
    C2_aug = sgsvp_matrix.augment_with_ones(C2)
    w1_aug, trace1 = sgsvp_solver.solve(C1_aug, C2_aug, cfg, kind, cfg.delta1)
    w2_aug, trace2 = sgsvp_solver.solve(C2_aug, C1_aug, cfg, kind, cfg.delta2)
    w1, b1 = w1_aug[:-1], float(w1_aug[-1])
    w2, b2 = w2_aug[:-1], float(w2_aug[-1])
    if mask:
        selection = sgsvp_select.select_features(
            w1, w2, elbow_rule=elbow_rule, degenerate_fallback=degenerate_fallback
        )
    else:
        selection = sgsvp_select.select_all(w1, w2)
    masked = sgsvp_select.apply_mask(w1, w2, b1, b2, selection)
    model = GsvpSvmModel(
        plane0=Hyperplane(masked.w1, masked.b1),
        plane1=Hyperplane(masked.w2, masked.b2),
        selection=selection,
        config=cfg,
        penalty=kind,
        discriminative=(
            trace1.final_rayleigh < 1 - NON_DISCRIMINATIVE_TOL
            and trace2.final_rayleigh < 1 - NON_DISCRIMINATIVE_TOL
        ),
        feature_names=tuple(feature_names),
        traces=(trace1, trace2),
    )
    for plane in (model.plane0, model.plane1):
        if not plane.norm > 0:
            raise EmptyModelError(
                "a fitted hyperplane has a zero normal after feature "
                "selection; try a smaller delta"
            )
    if not model.discriminative:
        warnings.warn(
            "model is not discriminative: a plane is no closer to its own "
            f"class than to the other (final Rayleigh quotients "
            f"{trace1.final_rayleigh:.6g}, {trace2.final_rayleigh:.6g})"
        )
    return model


def predict_batch(model: GsvpSvmModel, X: DenseMatrix) -> np.ndarray:
    """Labels (0 or 1) for every row of X, in row order. Equal distances
    go to class 0."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise ShapeError(
            f"model has {model.n_features} features; got samples of shape "
            f"{X.shape}"
        )
    d0 = model.plane0.distances(X)
    d1 = model.plane1.distances(X)
    return np.where(d0 <= d1, 0, 1)


def predict(model: GsvpSvmModel, x: RealVector) -> int:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ShapeError(f"expected one sample, got shape {x.shape}")
    return int(predict_batch(model, x[np.newaxis, :])[0])
