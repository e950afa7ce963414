"""Metric-depth evaluation: threshold accuracies, AbsRel, RMSE, log10."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .depth import DepthMap
from .errors import DimensionMismatchError, EmptyEvaluationError


@dataclass(frozen=True)
class DepthMetrics:
    """The six standard measures plus the pixel counts they were taken over."""

    delta1: float
    delta2: float
    delta3: float
    abs_rel: float
    rmse: float
    log10: float
    n_evaluated: int
    n_total: int

    def as_dict(self) -> dict:
        return asdict(self)


def evaluate(
    pred: DepthMap,
    gt: DepthMap,
    min_depth: float,
    max_depth: float,
) -> DepthMetrics:
    """Evaluate predicted against ground-truth depth.

    Only pixels valid in both maps with ground truth inside
    ``[min_depth, max_depth]`` participate. Threshold accuracies use a
    strict comparison: ``delta_k`` is the fraction of pixels with
    ``max(pred/gt, gt/pred) < 1.25**k``.
    """
    if pred.values.shape != gt.values.shape:
        raise DimensionMismatchError(
            f"prediction {pred.values.shape} and ground truth {gt.values.shape} differ"
        )
    mask = pred.valid & gt.valid & (gt.values >= min_depth) & (gt.values <= max_depth)
    n = int(mask.sum())
    if n == 0:
        raise EmptyEvaluationError("no pixel is valid in both maps within the depth range")

    p = pred.values[mask]
    g = gt.values[mask]
    ratio = np.maximum(p / g, g / p)
    diff = p - g

    return DepthMetrics(
        delta1=float(np.mean(ratio < 1.25)),
        delta2=float(np.mean(ratio < 1.25**2)),
        delta3=float(np.mean(ratio < 1.25**3)),
        abs_rel=float(np.mean(np.abs(diff) / g)),
        rmse=float(np.sqrt(np.mean(diff * diff))),
        log10=float(np.mean(np.abs(np.log10(p) - np.log10(g)))),
        n_evaluated=n,
        n_total=int(mask.size),
    )
