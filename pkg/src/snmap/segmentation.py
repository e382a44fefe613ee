"""Foreground/background separation via a 1-D Gaussian mixture.

The pixel intensity histogram of a frame is modelled as a G-component
mixture fitted with EM. The segmentation cutoff is the density minimum
between the two lowest component means; everything at or below the
cutoff is zeroed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.special import logsumexp

from .core import Frame
from .exceptions import DegenerateFit, InputError, NoValley

EM_TOL = 1e-6
EM_MAX_ITER = 500
EM_RESTARTS = 5
AUTO_GROUPS = (2, 3, 4, 5)
VALLEY_GRID = 4096
_SIGMA_COLLAPSE = 1e-8


@dataclass(frozen=True)
class GmmModel:
    """Fitted mixture, components sorted by ascending mean."""

    n_components: int
    weights: tuple[float, ...]
    means: tuple[float, ...]
    stddevs: tuple[float, ...]
    loglik: float
    loglik_history: tuple[float, ...] = ()

    def pdf(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)[..., None]
        w = np.array(self.weights)
        mu = np.array(self.means)
        sd = np.array(self.stddevs)
        comp = np.exp(-0.5 * ((y - mu) / sd) ** 2) / (sd * np.sqrt(2 * np.pi))
        return comp @ w


@dataclass(frozen=True)
class Threshold:
    value: float
    origin: Literal["auto", "manual"]

    def to_dict(self) -> dict:
        return {"value": self.value, "origin": self.origin}


@dataclass(frozen=True)
class HistogramSummary:
    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]
    n_pixels: int

    def to_dict(self) -> dict:
        return {
            "bin_edges": list(self.bin_edges),
            "counts": list(self.counts),
            "n_pixels": self.n_pixels,
        }


def _log_density(y, w, mu, sd):
    # (n, G) log of weighted component densities
    return (
        np.log(w)
        - np.log(sd)
        - 0.5 * np.log(2 * np.pi)
        - 0.5 * ((y[:, None] - mu) / sd) ** 2
    )


def _em_once(y: np.ndarray, quantiles: np.ndarray, n_components: int):
    """One EM run from quantile-based initial means.

    Returns (weights, means, stddevs, history) or None if a component
    variance collapses.
    """
    g = n_components
    spread = y.max() - y.min()
    mu = np.quantile(y, quantiles)
    sd = np.full(g, y.std() / g)
    w = np.full(g, 1.0 / g)
    if np.any(sd < _SIGMA_COLLAPSE * spread) or spread == 0.0:
        return None

    history = []
    for _ in range(EM_MAX_ITER):
        logp = _log_density(y, w, mu, sd)
        norm = logsumexp(logp, axis=1)
        ll = float(norm.sum())
        if history and abs(ll - history[-1]) <= EM_TOL * abs(history[-1]):
            history.append(ll)
            break
        history.append(ll)
        resp = np.exp(logp - norm[:, None])

        nk = resp.sum(axis=0)
        w = nk / len(y)
        mu = (resp * y[:, None]).sum(axis=0) / nk
        var = (resp * (y[:, None] - mu) ** 2).sum(axis=0) / nk
        sd = np.sqrt(var)
        if np.any(sd < _SIGMA_COLLAPSE * spread):
            return None
    else:
        logp = _log_density(y, w, mu, sd)
        history.append(float(logsumexp(logp, axis=1).sum()))
    return w, mu, sd, history


def _fit_fixed_g(y: np.ndarray, g: int, rng: np.random.Generator) -> GmmModel:
    base = (np.arange(1, g + 1) - 0.5) / g
    best = None
    for restart in range(EM_RESTARTS):
        if restart == 0:
            q = base
        else:
            q = np.clip(base + rng.uniform(-0.3, 0.3, size=g) / g, 0.0, 1.0)
        result = _em_once(y, q, g)
        if result is None:
            continue
        if best is None or result[3][-1] > best[3][-1]:
            best = result
    if best is None:
        raise DegenerateFit(
            f"all {EM_RESTARTS} EM restarts collapsed a component (G={g})"
        )
    w, mu, sd, history = best
    order = np.argsort(mu)
    w = w[order] / w.sum()
    return GmmModel(
        n_components=g,
        weights=tuple(w),
        means=tuple(mu[order]),
        stddevs=tuple(sd[order]),
        loglik=history[-1],
        loglik_history=tuple(history),
    )


def fit_gmm(
    pixels, n_components: int | Literal["auto"] = "auto", seed: int = 0
) -> GmmModel:
    """Fit a 1-D Gaussian mixture to a flat pixel sample.

    ``n_components="auto"`` tries G in 2..5 and keeps the fit with the
    lowest BIC. Initial means sit at evenly spaced quantiles; four of the
    five restarts jitter those quantiles. Raises DegenerateFit when no
    restart survives (e.g. all pixels identical).
    """
    y = np.asarray(pixels, dtype=float).ravel()
    if not np.all(np.isfinite(y)):
        raise InputError("pixel sample contains NaN or Inf")
    rng = np.random.default_rng(seed)

    if n_components == "auto":
        candidates = [g for g in AUTO_GROUPS if len(y) >= 10 * g]
        if not candidates:
            raise InputError(
                f"too few pixels ({len(y)}) for automatic component selection"
            )
        best_model, best_bic = None, np.inf
        for g in candidates:
            try:
                model = _fit_fixed_g(y, g, rng)
            except DegenerateFit:
                continue
            k = 3 * g - 1
            bic = -2.0 * model.loglik + k * np.log(len(y))
            if bic < best_bic:
                best_model, best_bic = model, bic
        if best_model is None:
            raise DegenerateFit("no component count in 2..5 produced a stable fit")
        return best_model

    g = int(n_components)
    if g < 2:
        raise InputError("need at least two mixture components")
    if len(y) < 10 * g:
        raise InputError(f"need at least {10 * g} pixels to fit G={g}")
    return _fit_fixed_g(y, g, rng)


def find_threshold(model: GmmModel) -> Threshold:
    """Locate the mixture-density minimum between the two lowest means.

    The density is evaluated on a uniform 4096-point grid spanning the
    two smallest component means; the smallest grid point attains ties.
    A minimum at either end of the interval means there is no valley to
    cut at, so NoValley is raised with the interval midpoint attached as
    a suggestion for a manual cutoff.
    """
    mu1, mu2 = model.means[0], model.means[1]
    mid = 0.5 * (mu1 + mu2)
    if not mu2 > mu1:
        raise NoValley("the two lowest means coincide", suggestion=mid)
    grid = np.linspace(mu1, mu2, VALLEY_GRID)
    dens = model.pdf(grid)
    k = int(np.argmin(dens))
    if k == 0 or k == VALLEY_GRID - 1:
        raise NoValley(
            "mixture density is monotone between the two lowest means",
            suggestion=mid,
        )
    return Threshold(value=float(grid[k]), origin="auto")


def apply_threshold(frame: Frame, threshold: Threshold | float) -> Frame:
    """Zero every pixel at or below the cutoff; strictly greater survives."""
    c = threshold.value if isinstance(threshold, Threshold) else float(threshold)
    v = frame.values
    return Frame(np.where(v > c, v, 0.0))


def histogram(frame: Frame, nbins: int = 64) -> HistogramSummary:
    """Equal-width histogram of all pixels, max value landing in the last bin."""
    if nbins < 1:
        raise InputError("nbins must be positive")
    v = frame.values.ravel()
    lo, hi = float(v.min()), float(v.max())
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    counts, edges = np.histogram(v, bins=nbins, range=(lo, hi))
    return HistogramSummary(
        bin_edges=tuple(float(e) for e in edges),
        counts=tuple(int(c) for c in counts),
        n_pixels=v.size,
    )


def segment_frame(
    frame: Frame,
    cutoff: float | None = None,
    n_components: int | Literal["auto"] = "auto",
    seed: int = 0,
) -> tuple[Frame, Threshold, GmmModel | None]:
    """Convenience wrapper: fit, find the valley, apply.

    A manual ``cutoff`` skips the fit entirely.
    """
    if cutoff is not None:
        thr = Threshold(value=float(cutoff), origin="manual")
        return apply_threshold(frame, thr), thr, None
    model = fit_gmm(frame.values, n_components=n_components, seed=seed)
    thr = find_threshold(model)
    return apply_threshold(frame, thr), thr, model


__all__ = [
    "GmmModel",
    "Threshold",
    "HistogramSummary",
    "fit_gmm",
    "find_threshold",
    "apply_threshold",
    "histogram",
    "segment_frame",
]
