import math

import numpy as np
import pytest

from specfield.domain import BoxDims
from specfield.fieldgen import (CIRCULAR_GAUSSIAN, REAL_GAUSSIAN,
                                LinearFieldSpec, autocovariance,
                                autocovariance_table, first_axis_ma1, generate,
                                generate_batch, replication_seeds,
                                spec_from_json, spec_to_json, spectral_density,
                                white_noise)

# finite tap sums evaluated two ways differ only by rounding
CONSISTENCY_TOL = 1e-10


def lag_sum_density(spec, lam):
    """Oracle: f(lam) = sum_h r(h) exp(-i h.lam) over the full lag support."""
    total = 0j
    for h, r in autocovariance_table(spec).items():
        total += r * np.exp(-1j * np.dot(h, lam))
    return total


def brute_autocovariance(spec, h):
    """Oracle: r(h) = sigma^2 sum_t a_t conj(a_{t-h}) by direct dictionary walk."""
    total = 0j
    for t, at in spec.taps.items():
        shifted = tuple(ti - hi for ti, hi in zip(t, h))
        if shifted in spec.taps:
            total += at * np.conj(spec.taps[shifted])
    return spec.innovation_std ** 2 * total


def ma1_real(std=1.0):
    return LinearFieldSpec(dim=1, taps={(0,): 1.0, (1,): 1.0},
                           innovation_kind=REAL_GAUSSIAN, innovation_std=std)


def test_iid_density_is_flat():
    spec = white_noise(2, CIRCULAR_GAUSSIAN, 1.0)
    for lam in [(0.0, 0.0), (1.0, -2.0), (math.pi, math.pi)]:
        assert spectral_density(spec, lam) == pytest.approx(1.0, abs=1e-15)


def test_ma1_density_endpoints():
    spec = ma1_real()
    assert spectral_density(spec, (0.0,)) == pytest.approx(4.0, abs=1e-12)
    assert spectral_density(spec, (math.pi,)) == pytest.approx(0.0, abs=1e-12)


def test_density_matches_lag_sum_oracle():
    spec = ma1_real()
    # 64 evenly spaced frequencies inside (-pi, pi]
    for lam in -math.pi + 2 * math.pi * np.arange(1, 65) / 64:
        oracle = lag_sum_density(spec, (lam,))
        assert abs(oracle.imag) < CONSISTENCY_TOL
        assert abs(spectral_density(spec, (lam,)) - oracle.real) < CONSISTENCY_TOL


def test_density_matches_lag_sum_oracle_random_specs():
    rng = np.random.default_rng(42)
    for _ in range(10):
        d = int(rng.integers(1, 3))
        taps = {}
        for _ in range(int(rng.integers(1, 5))):
            lag = tuple(int(x) for x in rng.integers(-2, 3, size=d))
            taps[lag] = complex(rng.normal(), rng.normal())
        spec = LinearFieldSpec(dim=d, taps=taps,
                               innovation_kind=CIRCULAR_GAUSSIAN,
                               innovation_std=float(rng.uniform(0.5, 2.0)))
        lam = tuple(rng.uniform(-math.pi, math.pi, size=d))
        oracle = lag_sum_density(spec, lam)
        assert abs(spectral_density(spec, lam) - oracle.real) < CONSISTENCY_TOL
        assert abs(oracle.imag) < CONSISTENCY_TOL


def test_autocovariance_iid():
    spec = white_noise(3, REAL_GAUSSIAN, 1.5)
    assert autocovariance(spec, (0, 0, 0)) == pytest.approx(2.25)
    assert autocovariance(spec, (1, 0, 0)) == 0
    assert autocovariance(spec, (0, -2, 5)) == 0


def test_autocovariance_ma1_values():
    spec = ma1_real()
    assert autocovariance(spec, (0,)) == pytest.approx(2.0)
    assert autocovariance(spec, (1,)) == pytest.approx(1.0)
    assert autocovariance(spec, (2,)) == 0


def test_autocovariance_conjugate_symmetry():
    rng = np.random.default_rng(9)
    for _ in range(20):
        d = int(rng.integers(1, 4))
        taps = {tuple(int(x) for x in rng.integers(-2, 3, size=d)):
                complex(rng.normal(), rng.normal())
                for _ in range(int(rng.integers(1, 6)))}
        spec = LinearFieldSpec(dim=d, taps=taps,
                               innovation_kind=CIRCULAR_GAUSSIAN,
                               innovation_std=1.0)
        h = tuple(int(x) for x in rng.integers(-3, 4, size=d))
        neg = tuple(-x for x in h)
        assert autocovariance(spec, neg) == pytest.approx(
            np.conj(autocovariance(spec, h)), abs=1e-14)
        assert autocovariance(spec, h) == pytest.approx(
            brute_autocovariance(spec, h), abs=1e-13)


def test_autocovariance_table_covers_support():
    spec = ma1_real()
    table = autocovariance_table(spec)
    assert set(table) == {(-1,), (0,), (1,)}
    assert table[(0,)] == pytest.approx(2.0)
    assert table[(-1,)] == pytest.approx(1.0)


def test_zero_std_gives_zero_field():
    spec = LinearFieldSpec(dim=2, taps={(0, 0): 1.0},
                           innovation_kind=REAL_GAUSSIAN, innovation_std=0.0)
    sample = generate(spec, (5, 4), seed=123)
    assert np.all(sample.values == 0)


def test_generation_is_deterministic():
    spec = first_axis_ma1(2, CIRCULAR_GAUSSIAN, 1.0, 0.7)
    a = generate(spec, (6, 7), seed=99)
    b = generate(spec, (6, 7), seed=99)
    assert np.array_equal(a.values, b.values)
    c = generate(spec, (6, 7), seed=100)
    assert not np.array_equal(a.values, c.values)


def test_real_kind_has_zero_imaginary_part():
    spec = ma1_real()
    sample = generate(spec, (32,), seed=5)
    assert np.all(sample.values.imag == 0)


def test_shifted_box_is_subarray_of_enlarged_box():
    """Innovations are functions of the absolute index, so a shifted box read
    equals the corresponding window of a bigger unshifted read."""
    spec = first_axis_ma1(2, CIRCULAR_GAUSSIAN, 1.0, 0.5)
    seed = 2024
    big = generate(spec, (12, 10), shift=None, seed=seed)
    shifted = generate(spec, (5, 6), shift=(3, 2), seed=seed)
    # box with shift w covers absolute coords w+1 .. w+v; the unshifted box
    # starts at 1, so the window is offset by the shift
    window = big.values[3:3 + 5, 2:2 + 6]
    assert np.array_equal(shifted.values, window)


def test_shifted_box_negative_shift():
    spec = white_noise(1, REAL_GAUSSIAN, 1.0)
    seed = 7
    wide = generate(spec, (20,), shift=(-10,), seed=seed)
    narrow = generate(spec, (4,), shift=(-3,), seed=seed)
    assert np.array_equal(narrow.values, wide.values[7:11])


def test_batch_rows_match_single_generation():
    spec = first_axis_ma1(2, REAL_GAUSSIAN, 1.3, -0.4)
    seeds = replication_seeds(31415, 5)
    batch = generate_batch(spec, (8, 9), None, seeds)
    assert batch.shape == (5, 8, 9)
    for i, s in enumerate(seeds):
        single = generate(spec, (8, 9), seed=int(s))
        assert np.array_equal(batch[i], single.values)


def test_replication_seeds_distinct_and_stable():
    a = replication_seeds(1, 100)
    b = replication_seeds(1, 100)
    assert np.array_equal(a, b)
    assert len(set(int(x) for x in a)) == 100
    offset = replication_seeds(1, 90, offset=10)
    assert np.array_equal(a[10:], offset)


def test_monte_carlo_moments_iid():
    """Pooled mean within 3 sigma/sqrt(R*V) of 0, |X|^2 mean within 5% of
    sigma^2, for the circular iid field on a 64x64 box with 200 reps."""
    spec = white_noise(2, CIRCULAR_GAUSSIAN, 1.0)
    seeds = replication_seeds(8675309, 200)
    batch = generate_batch(spec, (64, 64), None, seeds)
    pooled = batch.ravel()
    n = pooled.size
    assert abs(pooled.mean()) < 3.0 / math.sqrt(n)
    assert abs(np.mean(np.abs(pooled) ** 2) - 1.0) < 0.05


def test_monte_carlo_autocovariance_ma1():
    # empirical lag-1 covariance over a long row against the exact r(1)
    spec = ma1_real()
    seeds = replication_seeds(5150, 50)
    batch = generate_batch(spec, (4096,), None, seeds)
    r0 = np.mean(np.abs(batch) ** 2)
    r1 = np.mean(batch[:, 1:] * np.conj(batch[:, :-1])).real
    n = batch[:, 1:].size
    assert abs(r0 - 2.0) < 5 * 2.0 / math.sqrt(n) * 3  # loose 3-sigma-ish gate
    assert abs(r1 - 1.0) < 5 * 2.0 / math.sqrt(n) * 3


def test_beyond_support_is_uncorrelated():
    spec = ma1_real()
    seeds = replication_seeds(77, 50)
    batch = generate_batch(spec, (4096,), None, seeds)
    # lag 2 exceeds the MA(1) support diameter, so correlation is a mean of
    # n i.i.d.-ish products with null expectation
    r2 = np.mean(batch[:, 2:] * np.conj(batch[:, :-2])).real
    n = batch[:, 2:].size
    assert abs(r2) < 3 * 2.5 / math.sqrt(n)


def test_json_round_trip():
    spec = LinearFieldSpec(dim=2,
                           taps={(0, 0): 1 + 2j, (1, -1): -0.5j},
                           innovation_kind=CIRCULAR_GAUSSIAN,
                           innovation_std=0.75)
    again = spec_from_json(spec_to_json(spec))
    assert again == spec
    sample = generate(spec, (4, 4), seed=3)
    sample2 = generate(again, (4, 4), seed=3)
    assert np.array_equal(sample.values, sample2.values)


def test_spec_validation():
    with pytest.raises(ValueError):
        LinearFieldSpec(dim=1, taps={}, innovation_kind=REAL_GAUSSIAN,
                        innovation_std=1.0)
    with pytest.raises(ValueError):
        # complex tap under the real innovation kind
        LinearFieldSpec(dim=1, taps={(0,): 1j}, innovation_kind=REAL_GAUSSIAN,
                        innovation_std=1.0)
    with pytest.raises(ValueError):
        LinearFieldSpec(dim=1, taps={(0, 0): 1.0},
                        innovation_kind=REAL_GAUSSIAN, innovation_std=1.0)
    with pytest.raises(ValueError):
        LinearFieldSpec(dim=1, taps={(0,): 1.0},
                        innovation_kind="uniform", innovation_std=1.0)
    with pytest.raises(ValueError):
        LinearFieldSpec(dim=1, taps={(0,): 1.0},
                        innovation_kind=REAL_GAUSSIAN, innovation_std=-1.0)


def test_dependence_range():
    assert white_noise(2, REAL_GAUSSIAN, 1.0).dependence_range == 0
    assert ma1_real().dependence_range == 1
    spec = LinearFieldSpec(dim=2, taps={(0, 0): 1.0, (3, -1): 2.0},
                           innovation_kind=REAL_GAUSSIAN, innovation_std=1.0)
    assert spec.dependence_range == 3


def test_sample_metadata():
    spec = ma1_real()
    sample = generate(spec, (6,), shift=(4,), seed=11)
    assert sample.dims == BoxDims((6,))
    assert sample.shift == (4,)
    assert sample.seed == 11
    coords = sample.axis_coords()
    assert list(coords[0]) == [5, 6, 7, 8, 9, 10]
