"""Exact second-moment theory for modulated sums over boxes.

Everything here comes from one identity: for a stationary field with
autocovariance r and a box of dims v,

    E I(lam) = sum_{|h_s| < v_s} prod_s (1 - |h_s|/v_s) * r(h) * e^{-i h.lam}
             = integral over the torus of prod_s K(theta_s, v_s) * f(theta + lam)

with K the Fejer kernel and the torus measure normalized.  The lag-domain
route is exact for finite moving averages (finitely many nonzero r(h));
the frequency-domain route is evaluated by trapezoid quadrature and, since
the integrand is a trigonometric polynomial, is itself exact once the grid
out-resolves the degree.  Keeping both routes callable is the point: they
check each other.

The covariance between two modulated sums at frequencies lam and mu over
the same box factorizes per axis into shifted geometric sums, handled by
the modulated Dirichlet kernel; the no-conjugate pairing decays the same
way but is driven by the pseudo-covariance, which vanishes identically for
circular fields.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import as_dims, as_frequency
from .fieldgen import LinearFieldSpec, autocovariance_table, spectral_density
from .kernels import dirichlet_mod, fejer

# imaginary residue of the lag sum: expected below 1e-10, fatal at 1e-8
IMAG_RESIDUAL_FATAL = 1e-8


class InternalConsistencyError(Exception):
    """A quantity that must be real/nonnegative by theory failed to be, beyond roundoff."""


def _clipped_lags(spec: LinearFieldSpec, dims):
    """Autocovariance entries with |h_s| <= v_s - 1 (others pair no box points)."""
    table = autocovariance_table(spec)
    out = {}
    for h, r in table.items():
        if all(abs(hs) <= vs - 1 for hs, vs in zip(h, dims)):
            out[h] = r
    return out


def expected_periodogram_exact(spec: LinearFieldSpec, lam, dims) -> float:
    """E I(lam) over the box, via the Fejer-weighted lag sum (exact, no quadrature)."""
    box = as_dims(dims, spec.dim)
    freq = as_frequency(lam, spec.dim).as_array()
    total = 0j
    for h, r in _clipped_lags(spec, box.v).items():
        weight = 1.0
        for hs, vs in zip(h, box.v):
            weight *= 1.0 - abs(hs) / vs
        total += weight * r * np.exp(-1j * np.dot(h, freq))
    if abs(total.imag) >= IMAG_RESIDUAL_FATAL:
        raise InternalConsistencyError(
            f"expected periodogram has imaginary residual {total.imag:.3e}"
        )
    if total.real < -IMAG_RESIDUAL_FATAL:
        raise InternalConsistencyError(
            f"expected periodogram is negative: {total.real:.3e}"
        )
    return max(float(total.real), 0.0)


def expected_periodogram_quadrature(spec: LinearFieldSpec, lam, dims,
                                    grid_points_per_dim: int | None = None) -> float:
    """E I(lam) via trapezoid quadrature of the Fejer-smoothed spectral density.

    The grid must carry at least ``4 * max(v)`` points per axis; being a
    uniform grid on a full period, the rule integrates the (trigonometric
    polynomial) integrand exactly once that resolution is met.
    """
    box = as_dims(dims, spec.dim)
    freq = as_frequency(lam, spec.dim).as_array()
    required = 4 * max(box.v)
    n_grid = required if grid_points_per_dim is None else int(grid_points_per_dim)
    if n_grid < required:
        raise ValueError(
            f"quadrature grid too coarse: {n_grid} < 4*max(v) = {required}"
        )
    theta = -np.pi + 2.0 * np.pi * np.arange(n_grid) / n_grid
    d = spec.dim

    amp = np.zeros((n_grid,) * d, dtype=np.complex128)
    for tap_lag, coeff in spec.taps.items():
        contrib = np.full((1,) * d, coeff, dtype=np.complex128)
        for s in range(d):
            axis = np.exp(-1j * tap_lag[s] * (theta + freq[s]))
            contrib = contrib * axis.reshape((1,) * s + (n_grid,) + (1,) * (d - 1 - s))
        amp += contrib
    integrand = spec.innovation_std ** 2 * (amp.real ** 2 + amp.imag ** 2)
    for s in range(d):
        kern = fejer(theta, box.v[s])
        integrand *= kern.reshape((1,) * s + (n_grid,) + (1,) * (d - 1 - s))
    # normalized torus measure: the integral is the grid mean
    return float(integrand.mean())


def _geometric_phase_sum(start: int, phi: float, length: int) -> complex:
    """sum_{k=start}^{start+length-1} exp(-i k phi), via the modulated Dirichlet kernel."""
    return np.exp(-1j * start * phi) * np.sqrt(length) * dirichlet_mod(phi, length)


def covariance_of_sums(spec: LinearFieldSpec, lam, mu, dims) -> complex:
    """E[S(lam) conj(S(mu))] / V over the box; reduces to E I at mu = lam."""
    box = as_dims(dims, spec.dim)
    lamv = as_frequency(lam, spec.dim).as_array()
    muv = as_frequency(mu, spec.dim).as_array()
    total = 0j
    for h, r in _clipped_lags(spec, box.v).items():
        term = r * np.exp(-1j * np.dot(h, lamv))
        for hs, vs, ls, ms in zip(h, box.v, lamv, muv):
            start = max(1, 1 - hs)
            term *= _geometric_phase_sum(start, ls - ms, vs - abs(hs))
        total += term
    return complex(total / box.volume)


def product_of_sums(spec: LinearFieldSpec, lam, mu, dims) -> complex:
    """E[S(lam) S(mu)] / V — no conjugate.

    Driven by the pseudo-covariance E[X_{l+h} X_l]: identically zero for
    circular fields (returned exactly), equal to r(h) for real ones.
    """
    box = as_dims(dims, spec.dim)
    lamv = as_frequency(lam, spec.dim).as_array()
    muv = as_frequency(mu, spec.dim).as_array()
    if not spec.is_real:
        return 0j
    total = 0j
    for h, r in _clipped_lags(spec, box.v).items():
        term = r * np.exp(-1j * np.dot(h, lamv))
        for hs, vs, ls, ms in zip(h, box.v, lamv, muv):
            start = max(1, 1 - hs)
            term *= _geometric_phase_sum(start, ls + ms, vs - abs(hs))
        total += term
    return complex(total / box.volume)


@dataclass(frozen=True)
class ExpectationRow:
    index: int
    dims: tuple[int, ...]
    sup_err: float


@dataclass(frozen=True)
class ExpectationReport:
    """Sup-norm gap between E I and f along a dims sequence, on a frequency grid."""

    rows: tuple[ExpectationRow, ...]
    lambda_grid_size: int

    def sup_errors(self) -> list[float]:
        return [row.sup_err for row in self.rows]


def uniform_convergence_report(spec: LinearFieldSpec, dims_sequence,
                               lambda_grid_size: int = 128) -> ExpectationReport:
    """sup over a uniform frequency grid of |E I(lam) - f(lam)|, per dims.

    The grid puts ``lambda_grid_size`` equispaced points per axis on
    (-pi, pi] (full tensor grid in dimension d).
    """
    n_grid = int(lambda_grid_size)
    if n_grid < 1:
        raise ValueError("lambda_grid_size must be >= 1")
    rows = []
    for index, dims in enumerate(dims_sequence, start=1):
        box = as_dims(dims, spec.dim)
        axis = -np.pi + 2.0 * np.pi * np.arange(1, n_grid + 1) / n_grid
        worst = 0.0
        for lam in np.stack(np.meshgrid(*([axis] * spec.dim), indexing="ij"),
                            axis=-1).reshape(-1, spec.dim):
            gap = abs(expected_periodogram_exact(spec, lam, box)
                      - spectral_density(spec, lam))
            if gap > worst:
                worst = gap
        rows.append(ExpectationRow(index=index, dims=box.v, sup_err=worst))
    return ExpectationReport(rows=tuple(rows), lambda_grid_size=n_grid)
