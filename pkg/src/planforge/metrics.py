"""Evaluation metrics for reconstructed plans and rendered rasters."""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import InputError
from .types import EdgeMask, FloorPlan, Label, MetricsReport


def mape(predicted: np.ndarray, truth: np.ndarray) -> float:
    """Mean absolute percentage error, in percent."""
    p = np.asarray(predicted, dtype=float).ravel()
    t = np.asarray(truth, dtype=float).ravel()
    if p.shape != t.shape:
        raise InputError("mape inputs must have matching lengths")
    if p.size == 0:
        raise InputError("mape inputs must be non-empty")
    if np.any(t <= 0):
        raise InputError("mape reference values must be positive")
    return float(np.mean(np.abs(p - t) / t) * 100.0)


def ssim(
    x: np.ndarray,
    y: np.ndarray,
    data_range: float = 255.0,
    c1: float | None = None,
    c2: float | None = None,
) -> float:
    """Global structural similarity over the whole image (single window)."""
    a = np.asarray(x, dtype=float)
    b = np.asarray(y, dtype=float)
    if a.shape != b.shape:
        raise InputError("ssim inputs must have matching shapes")
    if a.size == 0:
        raise InputError("ssim inputs must be non-empty")
    if c1 is None:
        c1 = (0.01 * data_range) ** 2
    if c2 is None:
        c2 = (0.03 * data_range) ** 2
    mu_a, mu_b = a.mean(), b.mean()
    var_a, var_b = a.var(), b.var()
    cov = ((a - mu_a) * (b - mu_b)).mean()
    num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)
    den = (mu_a**2 + mu_b**2 + c1) * (var_a + var_b + c2)
    return float(num / den)


def psnr(x: np.ndarray, y: np.ndarray, data_range: float = 255.0) -> float:
    """Peak signal-to-noise ratio in dB; identical inputs give infinity."""
    a = np.asarray(x, dtype=float)
    b = np.asarray(y, dtype=float)
    if a.shape != b.shape:
        raise InputError("psnr inputs must have matching shapes")
    if a.size == 0:
        raise InputError("psnr inputs must be non-empty")
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return math.inf
    return 20.0 * math.log10(data_range) - 10.0 * math.log10(mse)


def pixel_error(x, y) -> float:
    """Percentage of pixels whose wall-edge membership disagrees."""
    a = x.labels if isinstance(x, EdgeMask) else np.asarray(x)
    b = y.labels if isinstance(y, EdgeMask) else np.asarray(y)
    if a.shape != b.shape:
        raise InputError("pixel_error inputs must have matching shapes")
    if a.size == 0:
        raise InputError("pixel_error inputs must be non-empty")
    return float(np.mean((a == Label.EDGE) != (b == Label.EDGE)) * 100.0)


def corner_error(
    predicted: np.ndarray, truth: np.ndarray, diagonal: float
) -> float:
    """Mean matched-corner distance as a percentage of the scene diagonal.

    Corners are paired by minimum-cost assignment and the counts must agree.
    """
    p = np.asarray(predicted, dtype=float).reshape(-1, 2)
    t = np.asarray(truth, dtype=float).reshape(-1, 2)
    if p.shape[0] == 0 or t.shape[0] == 0:
        raise InputError("corner_error needs at least one corner on each side")
    if p.shape[0] != t.shape[0]:
        raise InputError(
            f"corner counts differ: {p.shape[0]} predicted vs {t.shape[0]} reference"
        )
    if diagonal <= 0:
        raise InputError("corner_error diagonal must be positive")
    cost = np.linalg.norm(p[:, None, :] - t[None, :, :], axis=2)
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].mean() / diagonal * 100.0)


def _bbox_diagonal(points: np.ndarray) -> float:
    lo = points.min(axis=0)
    hi = points.max(axis=0)
    return float(np.hypot(*(hi - lo)))


def evaluate_plan(predicted: FloorPlan, truth: FloorPlan) -> MetricsReport:
    """Room-matched accuracy of a reconstructed plan against a reference.

    Rooms pair by id.  Areas and aspect ratios feed MAPE; corners pool the
    per-room assignment distances, normalized by the reference boundary's
    bounding-box diagonal.
    """
    ids_p = {r.room_id for r in predicted.rooms}
    ids_t = {r.room_id for r in truth.rooms}
    if ids_p != ids_t:
        raise InputError(
            f"room ids do not match: {sorted(ids_p)} vs {sorted(ids_t)}"
        )
    areas_p, areas_t, aspects_p, aspects_t = [], [], [], []
    distances: list[float] = []
    for rid in sorted(ids_p):
        rp = predicted.room(rid)
        rt = truth.room(rid)
        areas_p.append(rp.area())
        areas_t.append(rt.area())
        aspects_p.append(rp.aspect_ratio())
        aspects_t.append(rt.aspect_ratio())
        cost = np.linalg.norm(
            rp.vertices[:, None, :] - rt.vertices[None, :, :], axis=2
        )
        rows, cols = linear_sum_assignment(cost)
        distances.extend(cost[rows, cols].tolist())
    diagonal = _bbox_diagonal(truth.boundary.vertices)
    return MetricsReport(
        area_mape=mape(np.array(areas_p), np.array(areas_t)),
        aspect_mape=mape(np.array(aspects_p), np.array(aspects_t)),
        corner_error=float(np.mean(distances) / diagonal * 100.0),
    )
