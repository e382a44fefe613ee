"""Pixelwise nonparametric comparison of two aligned sequences.

For an aligned frame pair the difference field is smoothed, a noise
level and effective degrees of freedom are estimated from the smoother's
residual operator, and a t-type statistic per pixel is converted to
p-values with Benjamini-Hochberg control of the false discovery rate.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Literal, Sequence as Seq

import numpy as np
from numpy.typing import NDArray
from scipy import stats as sps

from .core import Frame
from .exceptions import InputError, NonPositiveDf
from .smoothing import (
    Bandwidths,
    DiffField,
    SmoothResult,
    pad_field,
    select_bandwidth,
    smooth_field,
    strip_margin,
)

Sidedness = Literal["two", "greater"]
DfMethod = Literal["two-moment", "n-minus-6"]

HUTCHINSON_PROBES = 32
EXACT_DF_THRESHOLD = 20000
# Rough cap on nonzeros of (I-H)'(I-H) before the exact path is abandoned.
_EXACT_NNZ_LIMIT = 2e8


@dataclass(frozen=True)
class DfEstimate:
    """Noise scale and effective degrees of freedom for one field."""

    sigma_hat: float
    delta1: float
    delta2: float
    nu: float
    method: DfMethod

    def to_dict(self) -> dict:
        return {
            "sigma_hat": self.sigma_hat,
            "delta1": self.delta1,
            "delta2": self.delta2,
            "nu": self.nu,
            "method": self.method,
        }


@dataclass(frozen=True, eq=False)
class StatMaps:
    """Per-pair output maps, all shaped like the input frames."""

    d: DiffField
    s: NDArray[np.float64]
    t: NDArray[np.float64]
    p: NDArray[np.float64]
    significant: NDArray[np.bool_]
    alpha: float
    sidedness: Sidedness


def curated_difference(frame1: Frame, frame2: Frame, mask=None) -> DiffField:
    """Difference field frame1 - frame2, zeroed outside the mask.

    Positive values mean the first sequence sits higher.
    """
    if frame1.shape != frame2.shape:
        raise InputError("frames must share a shape")
    d = frame1.values - frame2.values
    if mask is None:
        mask = np.ones(d.shape, bool)
    else:
        mask = np.asarray(mask, bool)
    return DiffField(np.where(mask, d, 0.0), mask)


def _delta2_exact(sr: SmoothResult) -> float:
    from scipy.sparse import identity

    h = sr.op.hat_rows_sparse(sr.mask)
    b = identity(h.shape[0], format="csr") - h
    lam = b.T @ b
    return float(lam.multiply(lam).sum())


def _delta2_hutchinson(sr: SmoothResult, probes: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    mask = sr.mask
    n = int(mask.sum())
    op = sr.op
    acc = 0.0
    for _ in range(probes):
        z = rng.integers(0, 2, size=n).astype(float) * 2.0 - 1.0
        z_img = np.zeros(sr.m_hat.shape)
        z_img[mask] = z
        hz = np.where(mask, op.estimate(z_img), 0.0)
        u = z_img - hz
        u[~mask] = 0.0
        htu = np.where(mask, op.apply_ht(u, mask), 0.0)
        lam_z = (u - htu)[mask]
        acc += float(lam_z @ lam_z)
    return acc / probes


def estimate_df(
    sr: SmoothResult,
    method: DfMethod = "two-moment",
    exact_threshold: int = EXACT_DF_THRESHOLD,
    probes: int = HUTCHINSON_PROBES,
    seed: int = 0,
) -> DfEstimate:
    """Estimate sigma and degrees of freedom from the residual operator.

    With L = (I-H)'(I-H) over masked pixels, delta1 = tr(L) follows from
    the recorded hat traces and delta2 = tr(L^2) is computed exactly via
    a sparse hat matrix when the masked count is at most
    ``exact_threshold`` (and memory allows), otherwise by a fixed-seed
    Hutchinson estimator whose probes need only one smoothing pass and
    one transposed pass each. The two-moment match gives
    nu = delta1^2 / delta2. ``method="n-minus-6"`` skips all of that and
    uses nu = N - 6.
    """
    n = int(sr.mask.sum())
    if method == "n-minus-6":
        nu = float(n - 6)
        if nu <= 0:
            raise NonPositiveDf(f"N - 6 = {nu} with N = {n}")
        sigma = float(np.sqrt(sr.rss / nu))
        return DfEstimate(
            sigma_hat=sigma, delta1=nu, delta2=nu, nu=nu, method=method
        )

    delta1 = n - 2.0 * sr.tr_h + sr.tr_hht
    if delta1 <= 0:
        raise NonPositiveDf(f"delta1 = {delta1}")
    win = (2 * sr.op.w1 + 1) * (2 * sr.op.w2 + 1)
    lam_nnz = float(n) * min(4.0 * win, float(n))
    if n <= exact_threshold and lam_nnz <= _EXACT_NNZ_LIMIT:
        delta2 = _delta2_exact(sr)
    else:
        if n <= exact_threshold:
            warnings.warn(
                "exact delta2 would be too large; using Hutchinson probes",
                stacklevel=2,
            )
        delta2 = _delta2_hutchinson(sr, probes, seed)
    if delta2 <= 0:
        raise NonPositiveDf(f"delta2 = {delta2}")
    sigma = float(np.sqrt(sr.rss / delta1))
    return DfEstimate(
        sigma_hat=sigma,
        delta1=float(delta1),
        delta2=float(delta2),
        nu=float(delta1 * delta1 / delta2),
        method=method,
    )


def t_map(sr: SmoothResult, df: DfEstimate) -> tuple[np.ndarray, np.ndarray]:
    """Pixelwise statistic T = m_hat / (sigma * ||p(s)||).

    Returns (t, zero_norm_flags). Pixels with a zero hat norm get T = 0
    and a flag; with a zero sigma the statistic is +-inf where the
    estimate is nonzero (zero noise, certain difference) and 0 where it
    vanishes. Unmasked pixels are 0.
    """
    mask = sr.mask
    denom = df.sigma_hat * sr.hat_norm
    zero_norm = mask & (sr.hat_norm == 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(mask & (denom > 0.0), sr.m_hat / np.where(denom > 0, denom, 1.0), 0.0)
        inf_side = mask & (denom == 0.0) & ~zero_norm & (sr.m_hat != 0.0)
        t = np.where(inf_side, np.sign(sr.m_hat) * np.inf, t)
    return t, zero_norm


def p_map(t: np.ndarray, nu: float, sidedness: Sidedness = "two") -> np.ndarray:
    """Student-t p-values for the statistic map."""
    if nu <= 0:
        raise NonPositiveDf(f"nu = {nu}")
    if sidedness == "two":
        return 2.0 * sps.t.sf(np.abs(t), nu)
    if sidedness == "greater":
        return sps.t.sf(t, nu)
    raise InputError(f"unknown sidedness {sidedness!r}")


def bh_fdr(pvals, alpha: float = 0.05) -> tuple[np.ndarray, np.ndarray]:
    """Benjamini-Hochberg step-up over a flat vector of p-values.

    Returns (reject, adjusted). The largest k with p_(k) <= k*alpha/m
    sets the rejection cutoff; adjusted values are the usual running
    minimum of m*p_(k)/k from the tail, clipped to 1.
    """
    p = np.asarray(pvals, dtype=float).ravel()
    m = p.size
    if m == 0:
        return np.zeros(0, bool), np.zeros(0)
    order = np.argsort(p, kind="stable")
    ranked = p[order]
    thresholds = alpha * np.arange(1, m + 1) / m
    passing = np.nonzero(ranked <= thresholds)[0]
    reject = np.zeros(m, bool)
    if passing.size:
        cutoff = ranked[passing[-1]]
        reject = p <= cutoff
    adj = np.minimum.accumulate((m * ranked / np.arange(1, m + 1))[::-1])[::-1]
    adjusted = np.empty(m)
    adjusted[order] = np.minimum(adj, 1.0)
    return reject, adjusted


@dataclass(frozen=True)
class SnmConfig:
    """Knobs for a full statistical run over aligned pairs."""

    alpha: float = 0.05
    sidedness: Sidedness = "two"
    bandwidths: tuple[Bandwidths, ...] | None = None
    pad_margin: int | None = None
    truncate: float | None = 4.0
    df_method: DfMethod = "two-moment"
    exact_threshold: int = EXACT_DF_THRESHOLD
    fdr_scope: Literal["frame", "pooled"] = "frame"
    cv_folds: int = 10
    cv_iterations: int = 20
    seed: int = 0
    workers: int = 1


@dataclass(frozen=True, eq=False)
class SnmResult:
    maps: tuple[StatMaps, ...]
    bandwidths: Bandwidths
    dfs: tuple[DfEstimate, ...]
    cv_scores: tuple[tuple[Bandwidths, float], ...]


def _analyze_frame(diff_padded, cfg, bw, df_cache):
    """Smooth one padded field and return everything but the FDR step."""
    sr = smooth_field(diff_padded, bw, truncate=cfg.truncate)
    if not np.any(diff_padded.values[diff_padded.mask]):
        n = int(diff_padded.mask.sum())
        df = DfEstimate(0.0, float(n), float(n), float(n), cfg.df_method)
        t = np.zeros(diff_padded.shape)
        p = np.ones(diff_padded.shape)
        return sr, df, t, p
    if "df" in df_cache:
        cached = df_cache["df"]
        sigma = float(np.sqrt(sr.rss / cached.delta1)) if cached.delta1 > 0 else 0.0
        df = DfEstimate(sigma, cached.delta1, cached.delta2, cached.nu, cached.method)
    else:
        df = estimate_df(
            sr,
            method=cfg.df_method,
            exact_threshold=cfg.exact_threshold,
            seed=cfg.seed,
        )
        df_cache["df"] = df
    t, _ = t_map(sr, df)
    p = np.where(diff_padded.mask, p_map(t, df.nu, cfg.sidedness), 1.0)
    return sr, df, t, p


def run_snm(
    pairs: Seq[tuple[Frame, Frame]],
    config: SnmConfig = SnmConfig(),
    mask: NDArray[np.bool_] | None = None,
    progress: Callable[[int, int], None] | None = None,
) -> SnmResult:
    """Full statistical chain over a list of aligned frame pairs.

    Bandwidths are selected once (first pair's difference field) and
    reused; each pair is then smoothed, tested and thresholded. FDR runs
    within each frame by default, or once over all frames' masked pixels
    with ``fdr_scope="pooled"``. Padding added for smoothing is stripped
    from every returned map.  ``progress``, if given, is called with
    (frames done, total) after each frame.
    """
    if not pairs:
        raise InputError("need at least one aligned pair")
    diffs = [curated_difference(f1, f2, mask) for f1, f2 in pairs]
    total = len(diffs)
    done = 0

    def tick(result):
        nonlocal done
        done += 1
        if progress is not None:
            progress(done, total)
        return result

    grid = config.bandwidths
    if isinstance(grid, Bandwidths):
        grid = (grid,)
    bw, scores = select_bandwidth(
        diffs[0],
        grid=grid,
        folds=config.cv_folds,
        iterations=config.cv_iterations,
        seed=config.seed,
        truncate=config.truncate,
    )
    trunc = config.truncate if config.truncate is not None else 4.0
    margin = (
        config.pad_margin
        if config.pad_margin is not None
        else int(np.ceil(trunc * max(bw.h1, bw.h2)))
    )
    padded = [pad_field(d, margin) for d in diffs]

    df_cache: dict = {}
    if config.workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        # Warm the trace cache serially so every worker reuses it.
        first = tick(_analyze_frame(padded[0], config, bw, df_cache))
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            rest = list(
                pool.map(
                    lambda d: tick(_analyze_frame(d, config, bw, df_cache)),
                    padded[1:],
                )
            )
        analyzed = [first, *rest]
    else:
        analyzed = [tick(_analyze_frame(d, config, bw, df_cache)) for d in padded]

    masked_counts = [int(d.mask.sum()) for d in padded]
    if config.fdr_scope == "pooled":
        flat = np.concatenate(
            [p[d.mask] for (_, _, _, p), d in zip(analyzed, padded)]
        )
        reject_flat, _ = bh_fdr(flat, config.alpha)
        rejects = []
        at = 0
        for cnt in masked_counts:
            rejects.append(reject_flat[at : at + cnt])
            at += cnt
    else:
        rejects = [
            bh_fdr(p[d.mask], config.alpha)[0]
            for (_, _, _, p), d in zip(analyzed, padded)
        ]

    maps = []
    dfs = []
    for (sr, df, t, p), dpad, dorig, rej in zip(analyzed, padded, diffs, rejects):
        sig = np.zeros(dpad.shape, bool)
        sig[dpad.mask] = rej
        maps.append(
            StatMaps(
                d=dorig,
                s=strip_margin(sr.m_hat, margin),
                t=strip_margin(t, margin),
                p=strip_margin(p, margin),
                significant=strip_margin(sig, margin),
                alpha=config.alpha,
                sidedness=config.sidedness,
            )
        )
        dfs.append(df)
    return SnmResult(
        maps=tuple(maps),
        bandwidths=bw,
        dfs=tuple(dfs),
        cv_scores=tuple(scores),
    )
