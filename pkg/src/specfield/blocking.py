"""Bernstein blocking along the first axis, index-product truncation, and
the negligibility diagnostics that justify dropping both remainders.

The block layout for a box with first-axis length v1 is driven by three
integers computed from v1 and the field's mixing profile:

    s = floor(v1^(1/3))                     block gap
    p = min(s, floor(1 / sqrt(rho'(s))))    number of big blocks
    r = the unique positive integer with (r-1+s)p <= v1 < (r+s)p

Big block l occupies first coordinates (l-1)(r+s)+1 .. lr+(l-1)s (width r);
consecutive blocks are s apart, and everything not covered is the leftover
set, of first-axis width v1 - pr <= v1^(2/3).  All arithmetic is exact on
Python integers — the cube root in particular is an integer cube root, not
a float power.

Truncation splits the demodulated field at each index k into a bounded
part and a tail at the level <k>^q, where <k> is the product of the
(absolute, positive) coordinates of k.  Centering constants vanish exactly
for centered Gaussian innovations; the bounded/tail second moments have
closed Gaussian forms used by the reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .domain import as_dims, as_frequency
from .fieldgen import (FieldSample, LinearFieldSpec, autocovariance,
                       generate_batch, replication_seeds)
from .periodogram import phase_grid
from ._util import replication_chunks, run_chunked


@dataclass(frozen=True)
class MixingProfile:
    """Known values (or certified lower bounds) of rho'(n), plus the range
    beyond which the field is exactly independent under axis separation."""

    values: dict
    dependence_range: int | None = None

    def __post_init__(self):
        vals = {}
        for n, rho in sorted(self.values.items()):
            n = int(n)
            rho = float(rho)
            if n < 1:
                raise ValueError("profile separations are 1-based")
            if not (0.0 <= rho <= 1.0):
                raise ValueError(f"rho'({n}) = {rho} outside [0, 1]")
            vals[n] = rho
        keys = sorted(vals)
        for a, b in zip(keys, keys[1:]):
            if vals[b] > vals[a] + 1e-12:
                raise ValueError("rho' profile must be nonincreasing")
        object.__setattr__(self, "values", vals)
        if self.dependence_range is not None:
            object.__setattr__(self, "dependence_range", int(self.dependence_range))

    def value_at(self, n: int) -> float:
        """rho'(n): exact zero beyond the dependence range, else the recorded
        value at the largest separation <= n (a valid bound: rho' is
        nonincreasing), else the trivial bound 1."""
        n = int(n)
        if self.dependence_range is not None and n > self.dependence_range:
            return 0.0
        if n in self.values:
            return self.values[n]
        below = [k for k in self.values if k <= n]
        if below:
            return self.values[max(below)]
        return 1.0


def dependence_profile(spec: LinearFieldSpec) -> MixingProfile:
    """The m-dependence profile of a finite moving average: rho' vanishes
    exactly once the separation clears the filter support diameter."""
    return MixingProfile(values={}, dependence_range=spec.dependence_range)


@dataclass(frozen=True)
class BlockingPlan:
    v1: int
    s: int
    p: int
    r: int
    q: float

    @property
    def leftover_width(self) -> int:
        return self.v1 - self.p * self.r


def _integer_cuberoot(n: int) -> int:
    """floor(n^(1/3)) exactly (float powers round: 1000**(1/3) < 10)."""
    x = round(n ** (1.0 / 3.0))
    while x ** 3 > n:
        x -= 1
    while (x + 1) ** 3 <= n:
        x += 1
    return x


def plan(v1: int, profile: MixingProfile, q: float) -> BlockingPlan:
    """Compute the blocking integers for first-axis length v1.

    Requires v1 >= 8 (so s >= 2) and 0 < q < 1/4.  rho'(s) = 0 yields p = s
    (the floor(1/sqrt(0)) = infinity convention, capped by s).
    """
    v1 = int(v1)
    if v1 < 8:
        raise ValueError(f"v1 must be >= 8, got {v1}")
    q = float(q)
    if not (0.0 < q < 0.25):
        raise ValueError(f"q must satisfy 0 < q < 1/4, got {q}")
    s = _integer_cuberoot(v1)
    rho = profile.value_at(s)
    if rho == 0.0:
        p = s
    else:
        p = min(s, int(math.floor(1.0 / math.sqrt(rho))))
    r = v1 // p - s + 1
    if r < 1:
        raise ValueError(
            f"no positive block width exists for v1={v1}, s={s}, p={p}"
        )
    if not ((r - 1 + s) * p <= v1 < (r + s) * p):
        raise ValueError(
            f"internal blocking inconsistency at v1={v1}: s={s}, p={p}, r={r}"
        )
    if (v1 - p * r) ** 3 > v1 ** 2:
        raise ValueError(
            f"leftover width {v1 - p * r} exceeds v1^(2/3) for v1={v1}"
        )
    return BlockingPlan(v1=v1, s=s, p=p, r=r, q=q)


@dataclass(frozen=True)
class IndexSlab:
    """A run of consecutive first coordinates crossed with the full box in
    the remaining axes; cardinalities stay exact Python integers."""

    first_lo: int
    first_hi: int
    dims: tuple[int, ...]

    @property
    def width(self) -> int:
        return self.first_hi - self.first_lo + 1

    @property
    def cardinality(self) -> int:
        return self.width * math.prod(self.dims[1:])

    @property
    def first_slice(self) -> slice:
        """Slice of the first array axis for a zero-shift sample."""
        return slice(self.first_lo - 1, self.first_hi)


def block_index_sets(pl: BlockingPlan, dims) -> tuple[list[IndexSlab], list[IndexSlab]]:
    """Big blocks and leftover runs for a box whose first side is pl.v1.

    Returns (blocks, leftover): p blocks of first-axis width r, and the
    leftover runs (the s-wide gaps between consecutive blocks plus the tail
    after the last one) whose total cardinality is (v1 - p*r) * v2...vd.
    """
    box = as_dims(dims)
    if box.v[0] != pl.v1:
        raise ValueError(f"plan is for v1={pl.v1}, box has first side {box.v[0]}")
    blocks = []
    leftover = []
    for l in range(1, pl.p + 1):
        lo = (l - 1) * (pl.r + pl.s) + 1
        hi = l * pl.r + (l - 1) * pl.s
        blocks.append(IndexSlab(first_lo=lo, first_hi=hi, dims=box.v))
        gap_hi = l * (pl.r + pl.s) if l < pl.p else pl.v1
        if gap_hi >= hi + 1:
            leftover.append(IndexSlab(first_lo=hi + 1, first_hi=gap_hi, dims=box.v))
    return blocks, leftover


@dataclass(frozen=True)
class TruncatedField:
    """Demodulated sample split at the index-product threshold <k>^q:
    bounded + tail reproduces exp(-i k.lam) X_k exactly."""

    bounded: np.ndarray
    tail: np.ndarray
    q: float
    thresholds: np.ndarray


def index_products(sample_or_coords) -> np.ndarray:
    """<k> = prod_i k_i over the box (absolute coordinates, all required >= 1)."""
    if isinstance(sample_or_coords, FieldSample):
        coords = sample_or_coords.axis_coords()
    else:
        coords = [np.asarray(c, dtype=np.int64) for c in sample_or_coords]
    d = len(coords)
    if any(c.min() < 1 for c in coords):
        raise ValueError("index products need every box coordinate >= 1 "
                         "(use a nonnegative shift)")
    grid = np.ones((1,) * d, dtype=np.float64)
    for s, c in enumerate(coords):
        grid = grid * c.astype(np.float64).reshape(
            (1,) * s + (len(c),) + (1,) * (d - 1 - s))
    return grid


def truncate(sample: FieldSample, lam, q: float) -> TruncatedField:
    """Split the demodulated field at |X_k| <= <k>^q.

    Both halves keep mean zero without explicit centering: the truncation
    sets are symmetric and the Gaussian marginals are centered, so the
    centering constants are exactly zero.
    """
    q = float(q)
    if not (0.0 < q < 0.25):
        raise ValueError(f"q must satisfy 0 < q < 1/4, got {q}")
    freq = as_frequency(lam, sample.dim)
    thresholds = index_products(sample) ** q
    phases = phase_grid(sample, freq).reshape(sample.values.shape)
    demod = phases * sample.values
    keep = np.abs(sample.values) <= thresholds
    return TruncatedField(bounded=np.where(keep, demod, 0.0),
                          tail=np.where(keep, 0.0, demod),
                          q=q, thresholds=thresholds)


def truncated_mean(spec: LinearFieldSpec, threshold: float) -> complex:
    """Centering constant E[X 1{|X| <= t}], from the exact marginal law.

    Both innovation kinds give centered marginals whose truncation sets are
    symmetric: the real field integrates an odd function over [-t, t], the
    circular field averages a radially-truncated phase-symmetric law.  The
    constant is therefore exactly zero — no quadrature residue to carry.
    """
    if float(threshold) < 0:
        raise ValueError("threshold must be >= 0")
    return 0j


def truncated_second_moments(spec: LinearFieldSpec, thresholds):
    """Exact marginal second moments (E|bounded|^2, E|tail|^2) at given levels.

    For the real field, with sigma^2 = r(0) and a = t/sigma,
        E[X^2; |X| > t] = 2 sigma^2 (a phi(a) + Q(a)),
    and for the circular field, with b = (t/sigma)^2,
        E[|X|^2; |X| > t] = sigma^2 (1 + b) exp(-b).
    """
    t = np.asarray(thresholds, dtype=float)
    sigma2 = autocovariance(spec, (0,) * spec.dim).real
    if sigma2 <= 0.0:
        zero = np.zeros_like(t)
        return zero, zero.copy()
    if spec.is_real:
        a = t / math.sqrt(sigma2)
        pdf = np.exp(-0.5 * a * a) / math.sqrt(2.0 * math.pi)
        upper = 0.5 * special.erfc(a / math.sqrt(2.0))
        tail = 2.0 * sigma2 * (a * pdf + upper)
    else:
        b = (t * t) / sigma2
        tail = sigma2 * (1.0 + b) * np.exp(-b)
    return sigma2 - tail, tail


@dataclass(frozen=True)
class NegligibilityRow:
    index: int
    dims: tuple[int, ...]
    v1: int
    s: int
    p: int
    r: int
    leftover_cardinality: int
    leftover_mean: float
    leftover_se: float
    tail_mean: float
    tail_se: float


@dataclass(frozen=True)
class NegligibilityReport:
    rows: tuple[NegligibilityRow, ...]
    q: float
    replications: int
    seed: int


def _weight_field(weights, coords, freqs) -> np.ndarray:
    """W_k = sum_j (a_j - i b_j) exp(-i k.lam_j): Re(X W) is the weighted
    real-imag functional of the demodulated values, vectorized over the box."""
    weights = np.asarray(weights, dtype=float)
    a = weights[0::2]
    b = weights[1::2]
    total = 0j
    for j, lam in enumerate(freqs):
        total = total + (a[j] - 1j * b[j]) * phase_grid(coords, lam)
    return total


def negligibility_report(spec: LinearFieldSpec, scheme, dims_sequence, q: float,
                         weights, replications: int, seed: int,
                         profile: MixingProfile | None = None) -> NegligibilityReport:
    """Monte Carlo second moments of the two discarded pieces, per dims entry.

    Column one: E[ (sum over the leftover set of the weighted bounded parts)
    / sqrt(V) ]^2.  Column two: mean over the scheme's frequencies of
    E |sum over the box of the tail parts|^2 / V.  Standard errors accompany
    both.  The blocking plan uses the field's own m-dependence profile
    unless one is passed explicitly.
    """
    weights = np.asarray(weights, dtype=float)
    prof = profile if profile is not None else dependence_profile(spec)
    rows = []
    for index, dims in enumerate(dims_sequence, start=1):
        box = as_dims(dims, spec.dim)
        freqs = scheme.freqs_for(box)
        if weights.size != 2 * len(freqs):
            raise ValueError(
                f"need {2 * len(freqs)} weights for {len(freqs)} frequencies, "
                f"got {weights.size}")
        pl = plan(box.v[0], prof, q)
        _, leftover = block_index_sets(pl, box)
        coords = [np.arange(1, v + 1, dtype=np.int64) for v in box.v]
        thresholds = index_products(coords) ** q
        wfield = _weight_field(weights, coords, freqs).reshape(box.v)
        phase_list = [phase_grid(coords, lam).reshape(box.v) for lam in freqs]
        leftover_cells = np.zeros(box.v, dtype=bool)
        for slab in leftover:
            leftover_cells[slab.first_slice] = True

        seeds = replication_seeds(seed, replications, offset=index * replications)
        g_sq = np.empty(replications, dtype=float)
        z_sq = np.empty(replications, dtype=float)
        vol = box.volume
        bytes_per_rep = 16 * vol * (3 + len(freqs))
        chunks = replication_chunks(replications, bytes_per_rep)

        def fill(lo, hi):
            vals = generate_batch(spec, box, None, seeds[lo:hi])
            keep = np.abs(vals) <= thresholds
            bounded = np.where(keep, vals, 0.0)
            tails = np.where(keep, 0.0, vals)
            axes = tuple(range(1, spec.dim + 1))
            # restrict to the leftover set, then sum the weighted bounded parts
            g = np.where(leftover_cells, (bounded * wfield).real, 0.0).sum(axis=axes)
            g_sq[lo:hi] = (g / math.sqrt(vol)) ** 2
            acc = np.zeros(hi - lo, dtype=float)
            for ph in phase_list:
                z = (tails * ph).reshape(hi - lo, -1).sum(axis=1)
                acc += (z.real ** 2 + z.imag ** 2) / vol
            z_sq[lo:hi] = acc / len(freqs)

        run_chunked(chunks, fill)
        rows.append(NegligibilityRow(
            index=index, dims=box.v, v1=pl.v1, s=pl.s, p=pl.p, r=pl.r,
            leftover_cardinality=sum(sl.cardinality for sl in leftover),
            leftover_mean=float(g_sq.mean()),
            leftover_se=float(g_sq.std(ddof=1) / math.sqrt(replications)),
            tail_mean=float(z_sq.mean()),
            tail_se=float(z_sq.std(ddof=1) / math.sqrt(replications)),
        ))
    return NegligibilityReport(rows=tuple(rows), q=q,
                               replications=replications, seed=seed)
