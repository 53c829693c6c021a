"""Shared value types: rectangular index boxes and torus frequencies.

Index boxes live on the d-dimensional integer lattice.  A box of dims
``v = (v_1, ..., v_d)`` anchored at shift ``w`` is the set of lattice
points ``k`` with ``w_j + 1 <= k_j <= w_j + v_j``.  Frequencies live on
the d-torus, one coordinate per lattice axis, each in ``(-pi, pi]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BoxDims:
    """Side lengths of a rectangular index box; ``volume`` is their product."""

    v: tuple[int, ...]

    def __post_init__(self):
        if len(self.v) == 0:
            raise ValueError("box must have at least one axis")
        for side in self.v:
            if not isinstance(side, (int, np.integer)) or isinstance(side, bool):
                raise ValueError(f"box sides must be integers, got {side!r}")
            if side < 1:
                raise ValueError(f"box sides must be >= 1, got {side}")
        object.__setattr__(self, "v", tuple(int(side) for side in self.v))

    @property
    def dim(self) -> int:
        return len(self.v)

    @property
    def volume(self) -> int:
        return math.prod(self.v)

    def __iter__(self):
        return iter(self.v)

    def __len__(self):
        return len(self.v)

    def __getitem__(self, i):
        return self.v[i]


@dataclass(frozen=True)
class Frequency:
    """A point on the d-torus with every coordinate in (-pi, pi]."""

    coords: tuple[float, ...]

    def __post_init__(self):
        if len(self.coords) == 0:
            raise ValueError("frequency must have at least one coordinate")
        coords = tuple(float(c) for c in self.coords)
        for c in coords:
            if not (-math.pi < c <= math.pi):
                raise ValueError(
                    f"frequency coordinate {c} outside (-pi, pi]"
                )
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)


def as_dims(dims, dim: int | None = None) -> BoxDims:
    """Coerce a BoxDims or a plain int sequence, optionally checking its dimension."""
    box = dims if isinstance(dims, BoxDims) else BoxDims(tuple(dims))
    if dim is not None and box.dim != dim:
        raise ValueError(f"expected {dim}-dimensional box, got {box.dim}")
    return box


def as_frequency(lam, dim: int | None = None) -> Frequency:
    """Coerce a Frequency or a plain float sequence, optionally checking its dimension."""
    freq = lam if isinstance(lam, Frequency) else Frequency(tuple(lam))
    if dim is not None and freq.dim != dim:
        raise ValueError(f"expected {dim}-dimensional frequency, got {freq.dim}")
    return freq


def as_shift(shift, dim: int) -> tuple[int, ...]:
    """Coerce an integer shift vector of the given dimension (default zeros)."""
    if shift is None:
        return (0,) * dim
    out = tuple(int(w) for w in shift)
    if len(out) != dim:
        raise ValueError(f"expected {dim}-dimensional shift, got {len(out)}")
    return out
