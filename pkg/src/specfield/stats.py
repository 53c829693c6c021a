"""Monte Carlo verification of the joint limit law of modulated sums.

At m separated admissible frequencies, the scaled real/imag parts

    (Re S(lam_1), Im S(lam_1), ..., Re S(lam_m), Im S(lam_m)) / sqrt(V)

converge to a centered Gaussian vector with covariance diag(f(lam)/2) —
each of the 2m coordinates gets HALF the spectral density, which is what
makes the periodogram I(lam) = |S|^2/V asymptotically Exponential with
mean f(lam) (sum of two independent N(0, f/2) squares), the ordinates at
distinct frequencies being asymptotically independent.

The weighted-functional route goes through

    G(b, z) = sum_j a_j Re z_j + b_j Im z_j,   b = (a_1, b_1, ..., a_m, b_m),

whose second moment per unit volume tends to (1/2) f(lam) ||b||^2; the
``miller_check`` table tracks that convergence along a dims sequence.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ._util import replication_chunks, run_chunked
from .domain import as_dims
from .fieldgen import LinearFieldSpec, generate_batch, replication_seeds, spectral_density
from .frequencies import FrequencyScheme, SeparationSpec, check_separation, is_admissible
from .periodogram import phase_grid
from .rng import replication_seed

# terms of the asymptotic Kolmogorov series are accumulated until below this
KS_SERIES_TOL = 1e-10


def g_functional(weights, z) -> float:
    """G(b, z) = sum_j a_j Re z_j + b_j Im z_j with b = (a_1, b_1, a_2, b_2, ...)."""
    w = np.asarray(weights, dtype=float)
    zv = np.asarray(z, dtype=complex)
    if w.ndim != 1 or zv.ndim != 1 or w.size != 2 * zv.size:
        raise ValueError(
            f"need exactly two weights per complex entry: {w.size} weights "
            f"for {zv.size} entries")
    return float(np.dot(w[0::2], zv.real) + np.dot(w[1::2], zv.imag))


def ks_statistic(samples, cdf) -> tuple[float, float]:
    """Kolmogorov-Smirnov distance against a named null, with asymptotic p-value.

    ``cdf`` is a tag tuple: ("exponential", mean) or ("normal", mean, variance).
    Returns (D, p) where p = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 t^2) at
    t = sqrt(n) * D, the series truncated once terms drop below KS_SERIES_TOL
    and the result clipped to [0, 1].
    """
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n < 1:
        raise ValueError("need at least one sample")
    kind = cdf[0]
    if kind == "exponential":
        mean = float(cdf[1])
        if mean <= 0:
            raise ValueError(f"exponential mean must be > 0, got {mean}")
        f = 1.0 - np.exp(-np.maximum(x, 0.0) / mean)
    elif kind == "normal":
        mean, variance = float(cdf[1]), float(cdf[2])
        if variance <= 0:
            raise ValueError(f"normal variance must be > 0, got {variance}")
        from scipy import special
        f = 0.5 * special.erfc(-(x - mean) / math.sqrt(2.0 * variance))
    else:
        raise ValueError(f"unknown distribution tag {kind!r}")
    grid = np.arange(1, n + 1, dtype=float) / n
    d_plus = float(np.max(grid - f))
    d_minus = float(np.max(f - (grid - 1.0 / n)))
    d = max(d_plus, d_minus)
    return d, kolmogorov_pvalue(math.sqrt(n) * d)


def kolmogorov_pvalue(t: float) -> float:
    """Limiting tail probability P(sup|B(F)| > t) via the alternating series."""
    if t <= 0.0:
        return 1.0
    total = 0.0
    sign = 1.0
    for k in range(1, 100_000):
        term = 2.0 * math.exp(-2.0 * (k * t) ** 2)
        if term < KS_SERIES_TOL:
            break
        total += sign * term
        sign = -sign
    return min(max(total, 0.0), 1.0)


def cross_frequency_independence(periodograms) -> float:
    """Largest |correlation| between periodogram columns (replications x m)."""
    p = np.asarray(periodograms, dtype=float)
    if p.ndim != 2 or p.shape[0] < 2 or p.shape[1] < 2:
        raise ValueError("need a (replications >= 2) x (frequencies >= 2) array")
    if np.any(p.std(axis=0) == 0.0):
        raise ValueError("a periodogram column is constant; correlation undefined")
    corr = np.corrcoef(p, rowvar=False)
    off = corr[~np.eye(corr.shape[0], dtype=bool)]
    return float(np.max(np.abs(off)))


def _validated_freqs(spec: LinearFieldSpec, scheme: FrequencyScheme, dims):
    box = as_dims(dims, spec.dim)
    freqs = scheme.freqs_for(box)
    if not is_admissible(scheme.base):
        raise ValueError("scheme base frequency is not admissible")
    if len(freqs) >= 2:
        single = FrequencyScheme(base=scheme.base, per_n=(freqs,), dims_sequence=(box,))
        sep = SeparationSpec.uniform(len(freqs),
                                     scheme.delta if scheme.delta is not None else 0.25)
        verdict = check_separation(single, sep)
        if not verdict.ok:
            raise ValueError(
                f"frequencies for dims {box.v} violate separation at pair "
                f"{verdict.witness[:2]}")
    return box, freqs


def _batched_sums(spec, box, freqs, seeds) -> np.ndarray:
    """Modulated sums for every seed and frequency, shape (R, m)."""
    coords = [np.arange(1, v + 1, dtype=np.int64) for v in box.v]
    phases = [phase_grid(coords, lam) for lam in freqs]
    out = np.empty((len(seeds), len(freqs)), dtype=np.complex128)
    vol = box.volume
    bytes_per_rep = 16 * vol * 3
    chunks = replication_chunks(len(seeds), bytes_per_rep)

    def fill(lo, hi):
        vals = generate_batch(spec, box, None, seeds[lo:hi]).reshape(hi - lo, -1)
        for j, ph in enumerate(phases):
            for r in range(hi - lo):
                out[lo + r, j] = np.dot(vals[r], ph)

    run_chunked(chunks, fill)
    return out


@dataclass(frozen=True)
class CltReport:
    """Joint-normality diagnostics of scaled modulated sums at m frequencies."""

    dims: tuple[int, ...]
    frequencies: tuple
    target_diagonal: float            # f(base)/2
    covariance: np.ndarray            # empirical 2m x 2m, (Re1, Im1, Re2, ...)
    max_cov_error: float              # sup |cov - diag(f/2)|
    coordinate_ks: tuple              # 2m (D, p) pairs vs N(0, f/2)
    periodogram_ks: tuple             # m (D, p) pairs vs Exponential(mean f)
    max_cross_correlation: float | None
    replications: int
    seed: int
    raw_sums: np.ndarray = field(repr=False, compare=False)
    raw_periodograms: np.ndarray = field(repr=False, compare=False)

    def to_json(self) -> str:
        doc = {
            "dims": list(self.dims),
            "frequencies": [list(f) for f in self.frequencies],
            "target_diagonal": self.target_diagonal,
            "covariance": [[float(c) for c in row] for row in self.covariance],
            "max_cov_error": self.max_cov_error,
            "coordinate_ks": [{"d": d, "p": p} for d, p in self.coordinate_ks],
            "periodogram_ks": [{"d": d, "p": p} for d, p in self.periodogram_ks],
            "max_cross_correlation": self.max_cross_correlation,
            "replications": self.replications,
            "seed": self.seed,
        }
        return json.dumps(doc, indent=2, sort_keys=True)


def run_clt_experiment(spec: LinearFieldSpec, scheme: FrequencyScheme, dims,
                       replications: int, seed: int) -> CltReport:
    """Replicate the field, collect scaled sums at the scheme's frequencies,
    and compare against the Gaussian/exponential limit laws.

    Fails fast when the base frequency's spectral density vanishes (the
    limit would be degenerate) or the scheme is not separated at ``dims``.
    """
    box, freqs = _validated_freqs(spec, scheme, dims)
    f_base = spectral_density(spec, scheme.base)
    if f_base <= 0.0:
        raise ValueError("spectral density vanishes at the base frequency; "
                         "the limit law is degenerate")
    if replications < 2:
        raise ValueError("need at least 2 replications")
    m = len(freqs)
    seeds = replication_seeds(seed, replications)
    sums = _batched_sums(spec, box, freqs, seeds)
    scale = math.sqrt(box.volume)
    coords = np.empty((replications, 2 * m), dtype=float)
    coords[:, 0::2] = sums.real / scale
    coords[:, 1::2] = sums.imag / scale
    periodograms = (sums.real ** 2 + sums.imag ** 2) / box.volume

    target = f_base / 2.0
    centered = coords - coords.mean(axis=0)
    cov = centered.T @ centered / (replications - 1)
    max_err = float(np.max(np.abs(cov - target * np.eye(2 * m))))
    coord_ks = tuple(ks_statistic(coords[:, i], ("normal", 0.0, target))
                     for i in range(2 * m))
    per_ks = tuple(ks_statistic(periodograms[:, j], ("exponential", f_base))
                   for j in range(m))
    cross = (cross_frequency_independence(periodograms) if m >= 2 else None)
    return CltReport(dims=box.v, frequencies=tuple(tuple(f) for f in freqs),
                     target_diagonal=target, covariance=cov, max_cov_error=max_err,
                     coordinate_ks=coord_ks, periodogram_ks=per_ks,
                     max_cross_correlation=cross, replications=replications,
                     seed=seed, raw_sums=sums, raw_periodograms=periodograms)


@dataclass(frozen=True)
class MillerRow:
    index: int
    dims: tuple[int, ...]
    estimate: float      # mean of G(b, S)^2 / V over replications
    target: float        # (1/2) f(base) ||b||^2
    discrepancy: float   # |estimate - target|
    std_error: float     # standard error of the estimate


@dataclass(frozen=True)
class MillerReport:
    rows: tuple[MillerRow, ...]
    weights: tuple[float, ...]
    replications: int
    seed: int

    def to_json(self) -> str:
        doc = {
            "weights": list(self.weights),
            "replications": self.replications,
            "seed": self.seed,
            "rows": [{
                "index": row.index, "dims": list(row.dims),
                "estimate": row.estimate, "target": row.target,
                "discrepancy": row.discrepancy, "std_error": row.std_error,
            } for row in self.rows],
        }
        return json.dumps(doc, indent=2, sort_keys=True)


def miller_check(spec: LinearFieldSpec, scheme: FrequencyScheme, weights,
                 dims_sequence, replications: int, seed: int) -> MillerReport:
    """Track E[G(b, S)^2]/V against (1/2) f ||b||^2 along a dims sequence.

    Each entry draws its own replications (seeds derived from the master
    seed and the entry index) and reports the Monte Carlo discrepancy with
    its standard error; the discrepancy should shrink as the box grows.
    """
    w = np.asarray(weights, dtype=float)
    f_base = spectral_density(spec, scheme.base)
    if f_base <= 0.0:
        raise ValueError("spectral density vanishes at the base frequency")
    target = 0.5 * f_base * float(np.dot(w, w))
    rows = []
    for index, dims in enumerate(dims_sequence, start=1):
        box, freqs = _validated_freqs(spec, scheme, dims)
        if w.size != 2 * len(freqs):
            raise ValueError(f"need {2 * len(freqs)} weights, got {w.size}")
        entry_seed = replication_seed(seed, index)
        seeds = replication_seeds(entry_seed, replications)
        sums = _batched_sums(spec, box, freqs, seeds)
        g = sums.real @ w[0::2] + sums.imag @ w[1::2]
        g_sq = g * g / box.volume
        estimate = float(g_sq.mean())
        rows.append(MillerRow(
            index=index, dims=box.v, estimate=estimate, target=target,
            discrepancy=abs(estimate - target),
            std_error=float(g_sq.std(ddof=1) / math.sqrt(replications))))
    return MillerReport(rows=tuple(rows), weights=tuple(float(x) for x in w),
                        replications=replications, seed=seed)
