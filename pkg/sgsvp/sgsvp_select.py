"""Feature selection from the sorted weight magnitudes of the two planes.

Each weight vector is sorted by magnitude; the elbow of the sorted curve
(the point furthest from the chord joining its first and last points, both
axes scaled to [0, 1]) gives the number of features it keeps.
"""
import dataclasses
import typing as t
import warnings

import numpy as np

from .sgsvp_errors import CurveTooShortError, DegenerateCurveError, ShapeError
from .sgsvp_matrix import RealVector

# Distances (in the normalized plot) closer than this count as ties.
DISTANCE_TIE_TOL = 1e-12

ELBOW_RULES = ("per-vector", "smallest-x")

NO_ELBOW = 0


@dataclasses.dataclass(frozen=True)
class ElbowPoint:
    """x is the 1-based rank of the elbow, and so the number of features
    kept. x = NO_ELBOW (0) marks a curve without an elbow whose side selects
    nothing (`degenerate_fallback=False`).
    """

    x: int
    y: float


@dataclasses.dataclass
class SelectionResult:
    sorted_magnitudes_1: np.ndarray
    sorted_magnitudes_2: np.ndarray
    rank_indices_1: np.ndarray
    rank_indices_2: np.ndarray
    elbow_1: ElbowPoint
    elbow_2: ElbowPoint
    selected_1: t.Tuple[int, ...]
    selected_2: t.Tuple[int, ...]
    selected_union: t.Tuple[int, ...]
    exclusive_1: t.Tuple[int, ...]
    exclusive_2: t.Tuple[int, ...]
    common: t.Tuple[int, ...]
    degenerate_1: bool = False
    degenerate_2: bool = False

    @property
    def n_features(self) -> int:
        return len(self.rank_indices_1)


@dataclasses.dataclass
class MaskedHyperplanePair:
    w1: RealVector
    w2: RealVector
    b1: float
    b2: float


def sort_by_magnitude(w: RealVector) -> t.Tuple[np.ndarray, np.ndarray]:
    """Returns (|w| in descending order, the permutation that sorts it).

    The sort is stable: equal magnitudes keep their original order.
    """
    magnitudes = np.abs(np.asarray(w, dtype=np.float64))
    if magnitudes.ndim != 1 or magnitudes.size == 0:
        raise ShapeError(f"cannot sort weights of shape {magnitudes.shape}")
    perm = np.argsort(-magnitudes, kind="stable")
    return magnitudes[perm], perm


def find_elbow(curve: t.Sequence[float]) -> ElbowPoint:
    """Returns the point of a nonincreasing curve furthest from the chord
    joining its first and last points.

    Both axes are min-max normalized first, so the answer does not depend
    on the units of the curve. Ties go to the smallest x.

    Raises:
        CurveTooShortError if the curve has fewer than 3 points.
        DegenerateCurveError if no point lies off the chord.
    """
    y = np.asarray(curve, dtype=np.float64)
    n = y.shape[0]
    if n < 3:
        raise CurveTooShortError(f"need at least 3 points to find an elbow, got {n}")
    y_range = y.max() - y.min()
    if not y_range > 0:
        raise DegenerateCurveError("curve is constant")
    x_norm = np.arange(n) / (n - 1)
    y_norm = (y - y.min()) / y_range
    # chord from (0, y_norm[0]) to (1, y_norm[-1])
    dy = y_norm[-1] - y_norm[0]
    dist = np.abs(dy * x_norm - (y_norm - y_norm[0])) / np.hypot(1.0, dy)
    best = dist.max()
    if best <= DISTANCE_TIE_TOL:
        raise DegenerateCurveError("curve is a straight line")
    i = int(np.flatnonzero(dist >= best - DISTANCE_TIE_TOL)[0])
    return ElbowPoint(x=i + 1, y=float(y[i]))


def _side(w, degenerate_fallback, side):
    magnitudes, perm = sort_by_magnitude(w)
    try:
        elbow = find_elbow(magnitudes)
    except (CurveTooShortError, DegenerateCurveError) as exc:
        if degenerate_fallback:
            warnings.warn(
                f"w{side}: {exc}; no elbow, keeping all {len(perm)} features"
            )
            elbow = ElbowPoint(x=len(perm), y=float(magnitudes[-1]))
        else:
            warnings.warn(f"w{side}: {exc}; no elbow, selecting no features")
            elbow = ElbowPoint(x=NO_ELBOW, y=float(magnitudes[0]))
        return magnitudes, perm, elbow, True
    return magnitudes, perm, elbow, False


def select_features(
    w1: RealVector,
    w2: RealVector,
    elbow_rule: str = "per-vector",
    degenerate_fallback: bool = True,
) -> SelectionResult:
    """Selects, for each weight vector, the features before its elbow.

    Keyword args:
        elbow_rule: "per-vector" keeps the first x_i ranked features of w_i;
            "smallest-x" keeps min(x_1, x_2) ranked features of both.
        degenerate_fallback: when a curve has no elbow (it is a straight
            line or has fewer than 3 points), keep all features of that side
            (True) or none of them (False).
    """
    if elbow_rule not in ELBOW_RULES:
        raise ValueError(f"elbow_rule must be one of {ELBOW_RULES}")
    w1 = np.asarray(w1, dtype=np.float64)
    w2 = np.asarray(w2, dtype=np.float64)
    if w1.shape != w2.shape:
        raise ShapeError(f"weight vectors differ in shape: {w1.shape}, {w2.shape}")
    mags_1, perm_1, elbow_1, degen_1 = _side(w1, degenerate_fallback, 1)
    mags_2, perm_2, elbow_2, degen_2 = _side(w2, degenerate_fallback, 2)
    n_1, n_2 = elbow_1.x, elbow_2.x
    if elbow_rule == "smallest-x":
        n_1 = n_2 = min(n_1, n_2)
    selected_1 = tuple(int(i) for i in perm_1[:n_1])
    selected_2 = tuple(int(i) for i in perm_2[:n_2])
    set_1, set_2 = set(selected_1), set(selected_2)
    union = selected_1 + tuple(i for i in selected_2 if i not in set_1)
    return SelectionResult(
        sorted_magnitudes_1=mags_1,
        sorted_magnitudes_2=mags_2,
        rank_indices_1=perm_1,
        rank_indices_2=perm_2,
        elbow_1=elbow_1,
        elbow_2=elbow_2,
        selected_1=selected_1,
        selected_2=selected_2,
        selected_union=union,
        exclusive_1=tuple(i for i in selected_1 if i not in set_2),
        exclusive_2=tuple(i for i in selected_2 if i not in set_1),
        common=tuple(i for i in selected_1 if i in set_2),
        degenerate_1=degen_1,
        degenerate_2=degen_2,
    )


def select_all(w1: RealVector, w2: RealVector) -> SelectionResult:
    """A SelectionResult that keeps every feature (masking disabled)."""
    mags_1, perm_1 = sort_by_magnitude(w1)
    mags_2, perm_2 = sort_by_magnitude(w2)
    everything = tuple(range(len(perm_1)))
    return SelectionResult(
        sorted_magnitudes_1=mags_1,
        sorted_magnitudes_2=mags_2,
        rank_indices_1=perm_1,
        rank_indices_2=perm_2,
        elbow_1=ElbowPoint(x=len(perm_1), y=float(mags_1[-1])),
        elbow_2=ElbowPoint(x=len(perm_2), y=float(mags_2[-1])),
        selected_1=everything,
        selected_2=everything,
        selected_union=everything,
        exclusive_1=(),
        exclusive_2=(),
        common=everything,
    )


def apply_mask(
    w1: RealVector,
    w2: RealVector,
    b1: float,
    b2: float,
    sel: SelectionResult,
) -> MaskedHyperplanePair:
    """Zeroes the entries of w_i outside selected_i; biases pass through."""

    def _mask(w, selected):
        out = np.zeros_like(np.asarray(w, dtype=np.float64))
        idx = np.fromiter(selected, dtype=np.intp, count=len(selected))
        out[idx] = np.asarray(w)[idx]
        return out

    return MaskedHyperplanePair(
        w1=_mask(w1, sel.selected_1),
        w2=_mask(w2, sel.selected_2),
        b1=float(b1),
        b2=float(b2),
    )
