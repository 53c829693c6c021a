"""Modulated sums and periodograms over rectangular boxes.

For a sample on a (possibly shifted) box and a torus frequency lam,

    S(lam) = sum_k exp(-i k.lam) X_k      (k runs over absolute indices)
    I(lam) = |S(lam)|^2 / V               (V = box volume)

Sums are taken by direct summation — never an FFT — because the
frequencies of interest are off the Fourier grid.  Accumulation happens
in double precision with numpy's pairwise reduction.
"""

from __future__ import annotations

import numpy as np

from .domain import BoxDims, Frequency, as_frequency
from .fieldgen import FieldSample

__all__ = [
    "BoxDims",
    "Frequency",
    "modulated_sum",
    "periodogram",
    "periodogram_vector",
    "phase_grid",
]


def phase_grid(sample_or_coords, lam) -> np.ndarray:
    """exp(-i k.lam) over the box, as a flat (volume,) complex array.

    Accepts a FieldSample or a list of per-axis absolute coordinate arrays.
    The grid is the outer product of per-axis phase vectors, flattened in C
    order to match ``values.ravel()``.
    """
    if isinstance(sample_or_coords, FieldSample):
        coords = sample_or_coords.axis_coords()
    else:
        coords = [np.asarray(c, dtype=np.int64) for c in sample_or_coords]
    freq = as_frequency(lam, len(coords))
    grid = np.ones((1,) * len(coords), dtype=np.complex128)
    for s, (c, w) in enumerate(zip(coords, freq)):
        axis_phase = np.exp(-1j * w * c.astype(np.float64))
        shape = (1,) * s + (len(c),) + (1,) * (len(coords) - 1 - s)
        grid = grid * axis_phase.reshape(shape)
    return grid.ravel()


def modulated_sum(sample: FieldSample, lam) -> complex:
    """S(lam) = sum over the box of exp(-i k.lam) X_k, absolute indices."""
    phases = phase_grid(sample, lam)
    return complex(np.dot(sample.values.ravel(), phases))


def periodogram(sample: FieldSample, lam) -> float:
    """I(lam) = |S(lam)|^2 / volume; nonnegative, invariant to box shifts in law."""
    s = modulated_sum(sample, lam)
    return (s.real * s.real + s.imag * s.imag) / sample.dims.volume


def periodogram_vector(sample: FieldSample, freqs) -> list[tuple[complex, float]]:
    """(S, I) pairs for several frequencies of one sample.

    Equals [(modulated_sum(sample, f), periodogram(sample, f)) for f in freqs]
    exactly; the phase grids are just built once each.
    """
    out = []
    flat = sample.values.ravel()
    vol = sample.dims.volume
    for lam in freqs:
        s = complex(np.dot(flat, phase_grid(sample, lam)))
        out.append((s, (s.real * s.real + s.imag * s.imag) / vol))
    return out


def batched_modulated_sums(values: np.ndarray, coords, freqs) -> np.ndarray:
    """S for a batch of realizations, shape (R, len(freqs)).

    ``values`` has shape (R, v_1, ..., v_d) and ``coords`` are the per-axis
    absolute coordinates.  Row r equals the per-sample ``modulated_sum``
    bit-for-bit: each entry is the same ``np.dot`` over the same flat layout.
    """
    freqs = list(freqs)
    n_rep = values.shape[0]
    flat = values.reshape(n_rep, -1)
    out = np.empty((n_rep, len(freqs)), dtype=np.complex128)
    for j, lam in enumerate(freqs):
        phases = phase_grid(coords, lam)
        for r in range(n_rep):
            out[r, j] = np.dot(flat[r], phases)
    return out
