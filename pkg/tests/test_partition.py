from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np
import pytest

import logicast.partition as partition
from logicast.bitcodec import BitReader, BitWriter, elias_delta_length
from logicast.errors import (
    DomainError,
    DuplicateColumns,
    SearchExhausted,
    TruncatedStream,
)
from logicast.partition import (
    FREE,
    SharedRandomness,
    TernaryVector,
    binary_entropy,
    cheaper_side,
    cw_check,
    cw_matrix,
    lambda_fn,
    linear_decode,
    linear_encode,
    naive_decode,
    naive_encode,
    random_decode,
    random_encode,
    rho,
    shannon_partition_bounds,
    total_distortion,
)
from logicast.randomness import MASK64, draw, draw_array


# ---------------------------------------------------------------- references

def _h(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def _lam(a: float, b: float) -> float:
    if a == 0.0 or b == 0.0:
        return 0.0
    return (a + b) * _h(a / (a + b))


def _splitmix64_reference(seed: int, k: int) -> int:
    """Textbook splitmix64: k-th output of the stream started at `seed`."""
    z = (seed + (k + 1) * 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def _tv(text: str) -> TernaryVector:
    return TernaryVector.from_string(text)


def _reader(bits) -> BitReader:
    w = BitWriter()
    for bit in bits:
        w.write_bit(bit)
    return BitReader(w.to_bytes())


def _random_tv(rng: random.Random, n: int, p_free=0.5) -> TernaryVector:
    vals = [
        FREE if rng.random() < p_free else rng.randrange(2)
        for _ in range(n)
    ]
    return TernaryVector(vals)


# ------------------------------------------------------------------- the prng

def test_draw_matches_reference_splitmix64():
    rng = random.Random(3)
    for _ in range(200):
        seed = rng.getrandbits(64)
        k = rng.getrandbits(50)
        assert draw(seed, k) == _splitmix64_reference(seed, k)


def test_draw_array_matches_scalar():
    rng = random.Random(4)
    seed = rng.getrandbits(64)
    keys = np.array([rng.getrandbits(52) for _ in range(500)], dtype=np.uint64)
    vec = draw_array(seed, keys)
    assert vec.dtype == np.uint64
    for k, w in zip(keys.tolist(), vec.tolist()):
        assert w == _splitmix64_reference(seed, k)


# -------------------------------------------------------------------- vectors

def test_ternary_vector_construction():
    x = TernaryVector([0, 1, 2, 0])
    assert x.n == 4
    assert list(x.psi()) == [0, 1, 3]
    assert x.to_string() == "01*0"
    assert TernaryVector.from_string("0⊗1*") == TernaryVector([0, 2, 1, 2])


def test_ternary_vector_validation():
    with pytest.raises(DomainError):
        TernaryVector([])
    with pytest.raises(DomainError):
        TernaryVector([0, 3])
    with pytest.raises(DomainError):
        TernaryVector.from_string("01q")


def test_ternary_vector_immutable():
    x = TernaryVector([0, 1, 2])
    with pytest.raises(ValueError):
        x.entries[0] = 1


def test_rho_table():
    assert rho(0, 1) == 1
    assert rho(1, 0) == 1
    assert rho(0, 0) == 0
    assert rho(1, 1) == 0
    assert rho(FREE, 0) == 0
    assert rho(FREE, 1) == 0


def test_total_distortion():
    x = _tv("01*1")
    assert total_distortion(x, np.array([0, 1, 0, 1], dtype=np.uint8)) == 0
    assert total_distortion(x, np.array([1, 1, 1, 0], dtype=np.uint8)) == 2


# ------------------------------------------------------------------ lambda_fn

def test_lambda_known_values():
    assert lambda_fn(0.25, 0.25) == pytest.approx(0.5, abs=1e-12)
    assert lambda_fn(0.0, 0.3) == 0.0
    assert lambda_fn(0.3, 0.0) == 0.0
    assert lambda_fn(0.1, 0.4) == pytest.approx(0.360964, abs=1e-6)


def test_lambda_matches_closed_form():
    rng = random.Random(11)
    for _ in range(300):
        a = rng.uniform(0, 0.8)
        b = rng.uniform(0, 1.0 - a)
        assert lambda_fn(a, b) == pytest.approx(_lam(a, b), abs=1e-12)


def test_lambda_rejects_negatives():
    with pytest.raises(DomainError):
        lambda_fn(-0.1, 0.2)
    with pytest.raises(DomainError):
        lambda_fn(0.1, -0.2)


def test_lambda_symmetry_concavity_monotonicity():
    rng = random.Random(13)
    for _ in range(200):
        a = rng.uniform(0.01, 0.6)
        b = rng.uniform(0.01, min(0.6, 0.99 - a))
        assert lambda_fn(a, b) == pytest.approx(lambda_fn(b, a), abs=1e-12)
        a2 = rng.uniform(0.01, 0.5)
        b2 = rng.uniform(0.01, min(0.5, 0.99 - a2))
        mid = lambda_fn((a + a2) / 2, (b + b2) / 2)
        assert mid >= (lambda_fn(a, b) + lambda_fn(a2, b2)) / 2 - 1e-12
        bump = rng.uniform(0.005, 0.2)
        assert lambda_fn(a + bump, b) > lambda_fn(a, b)
        assert lambda_fn(a, b + bump) > lambda_fn(a, b)


def test_lambda_below_entropy_of_mixture():
    rng = random.Random(17)
    for _ in range(300):
        a = rng.uniform(0.02, 0.9)
        b = rng.uniform(0.02, max(0.021, 0.95 - a))
        if a + b >= 1.0:
            continue
        lam = rng.random()
        assert lambda_fn(a, b) < _h(lam * a + (1 - lam) * b)


# ---------------------------------------------------------------- naive codec

def test_naive_worked_example():
    x = _tv("0**")
    bits = naive_encode(x, "A")
    # size header elias(1+1), then the rank of {0} in 2 bits
    assert bits == [0, 1, 0, 0, 0, 0]
    y = naive_decode(_reader(bits), 3, "A")
    assert list(y) == [0, 1, 1]
    assert total_distortion(x, y) == 0


def test_naive_empty_side():
    x = _tv("***")
    assert naive_encode(x, "A") == [1]
    y = naive_decode(_reader([1]), 3, "A")
    assert list(y) == [1, 1, 1]
    yb = naive_decode(_reader(naive_encode(x, "B")), 3, "B")
    assert list(yb) == [0, 0, 0]


def test_naive_roundtrip_random():
    rng = random.Random(23)
    for _ in range(150):
        n = rng.randrange(1, 40)
        x = _random_tv(rng, n)
        side = rng.choice(["A", "B"])
        bits = naive_encode(x, side)
        reader = _reader(bits)
        y = naive_decode(reader, n, side)
        assert reader.bits_read == len(bits)
        assert total_distortion(x, y) == 0


def test_naive_bad_side_and_truncation():
    x = _tv("01*")
    with pytest.raises(DomainError):
        naive_encode(x, "C")
    bits = naive_encode(_tv("0101*1"), "B")
    with pytest.raises(TruncatedStream):
        naive_decode(BitReader(bytes([bits[0] << 7])), 6, "B")


def test_cheaper_side():
    assert cheaper_side(_tv("001*")) == "B"
    assert cheaper_side(_tv("011*")) == "A"
    assert cheaper_side(_tv("01**")) in ("A", "B")


# --------------------------------------------------------------- random codec

def test_random_codec_free_only():
    shared = SharedRandomness.for_law(99, 0.25, 0.25)
    x = _tv("********")
    bits = random_encode(x, 0.25, 0.25, shared)
    assert bits == [1]
    y = random_decode(_reader(bits), 8, shared)
    assert y.shape == (8,)
    assert total_distortion(x, y) == 0


def test_random_codec_roundtrip_and_determinism():
    rng = random.Random(31)
    for trial in range(40):
        n = rng.randrange(1, 22)
        x = _random_tv(rng, n, p_free=0.7)
        shared = SharedRandomness.for_law(1000 + trial, 0.25, 0.25)
        bits = random_encode(x, 0.25, 0.25, shared)
        assert bits == random_encode(x, 0.25, 0.25, shared)
        reader = _reader(bits)
        y = random_decode(reader, n, shared)
        assert reader.bits_read == len(bits)
        assert total_distortion(x, y) == 0


def test_random_codec_requires_positive_law():
    shared = SharedRandomness.for_law(5, 0.25, 0.25)
    with pytest.raises(DomainError):
        random_encode(_tv("01"), 0.0, 0.5, shared)
    with pytest.raises(DomainError):
        random_encode(_tv("01"), 0.5, 0.0, shared)


def test_random_codec_search_exhaustion(monkeypatch):
    monkeypatch.setattr(partition, "J_MAX", 8)
    rng = random.Random(37)
    x = TernaryVector([rng.randrange(2) for _ in range(26)])
    shared = SharedRandomness.for_law(7, 0.5, 0.5)
    with pytest.raises(SearchExhausted):
        random_encode(x, 0.5, 0.5, shared)


def test_random_codec_mean_length_smoke():
    # at n=16, p_a=p_b=0.25 the long-run mean is below 17 bits
    lengths = []
    rng = random.Random(41)
    for trial in range(30):
        x = TernaryVector(
            [
                0 if rng.random() < 0.25 else (1 if rng.random() < 1 / 3 else FREE)
                for _ in range(16)
            ]
        )
        shared = SharedRandomness.for_law(5000 + trial, 0.25, 0.25)
        lengths.append(len(random_encode(x, 0.25, 0.25, shared)))
    assert sum(lengths) / len(lengths) < 25.0


# --------------------------------------------------------------- linear codec

def _read_elias(bits):
    from logicast.bitcodec import elias_delta_decode

    return elias_delta_decode(bits)


def test_linear_codec_free_only():
    shared = SharedRandomness.for_law(71, 0.5, 0.5)
    x = _tv("****")
    bits = linear_encode(x, shared)
    assert bits == [1, 0]
    y = linear_decode(_reader(bits), 4, shared)
    assert list(y) == [0, 0, 0, 0]


def test_linear_codec_homogeneous():
    shared = SharedRandomness.for_law(72, 0.5, 0.5)
    x = _tv("0000")
    bits = linear_encode(x, shared)
    assert bits == [1, 0]
    y = linear_decode(_reader(bits), 4, shared)
    assert total_distortion(x, y) == 0


def test_linear_codec_roundtrip_random():
    rng = random.Random(43)
    for trial in range(60):
        n = rng.randrange(1, 200)
        x = _random_tv(rng, n, p_free=rng.uniform(0.2, 0.9))
        shared = SharedRandomness.for_law(9000 + trial, 0.5, 0.5)
        bits = linear_encode(x, shared)
        assert bits == linear_encode(x, shared)
        j, used = _read_elias(bits)
        assert len(bits) == used + j
        reader = _reader(bits)
        y = linear_decode(reader, n, shared)
        assert reader.bits_read == len(bits)
        assert total_distortion(x, y) == 0


def test_linear_codec_j_close_to_psi():
    rng = random.Random(47)
    excesses = []
    for trial in range(40):
        x = _random_tv(rng, 64, p_free=0.5)
        shared = SharedRandomness.for_law(400 + trial, 0.5, 0.5)
        bits = linear_encode(x, shared)
        j, _ = _read_elias(bits)
        excess = j - len(x.psi())
        assert excess <= 40
        excesses.append(max(excess, 0))
    assert sum(excesses) / len(excesses) <= 6.0


# ---------------------------------------------------- constant-weight columns

WEIGHT2_4X6 = [
    [0, 0, 0, 1, 1, 1],
    [0, 1, 1, 0, 1, 0],
    [1, 0, 1, 1, 0, 0],
    [1, 1, 0, 0, 0, 1],
]


def test_cw_check_reference_matrix():
    assert cw_check(WEIGHT2_4X6) is True


def test_cw_matrix_construction():
    mat = cw_matrix(4, 6, 2)
    assert mat.shape == (4, 6)
    assert all(int(mat[:, c].sum()) == 2 for c in range(6))
    cols = {tuple(mat[:, c]) for c in range(6)}
    assert len(cols) == 6
    assert cw_check(mat) is True


def test_cw_matrix_exhausts_columns():
    with pytest.raises(DuplicateColumns):
        cw_matrix(4, 7, 2)
    with pytest.raises(DomainError):
        cw_matrix(3, 1, 4)


def test_cw_check_duplicate_columns_fail():
    mat = [
        [1, 1, 0],
        [1, 1, 1],
        [0, 0, 1],
    ]
    assert cw_check(mat) is False


def test_cw_check_unequal_weights_rejected():
    with pytest.raises(DomainError):
        cw_check([[1, 1], [0, 1]])


def test_cw_check_random_weight2_sets():
    rng = random.Random(53)
    full = cw_matrix(5, 10, 2)
    for _ in range(25):
        picked = sorted(rng.sample(range(10), 6))
        sub = full[:, picked]
        assert cw_check(sub) is True


# --------------------------------------------------------------------- bounds

def test_bounds_worked_example():
    lower, upper = shannon_partition_bounds(4096, 0.1, 0.1)
    assert lower == pytest.approx(0.2, abs=1e-12)
    lam = 0.2
    expect = lam + (2 * math.log2(4096 * lam) + 3) / 4096
    assert upper == pytest.approx(expect, abs=1e-12)


def test_bounds_edges_and_domain():
    with pytest.raises(DomainError):
        shannon_partition_bounds(100, 0.7, 0.5)
    with pytest.raises(DomainError):
        shannon_partition_bounds(100, -0.1, 0.5)
    with pytest.raises(DomainError):
        shannon_partition_bounds(0, 0.1, 0.1)
    lower, upper = shannon_partition_bounds(64, 0.0, 0.3)
    assert lower == 0.0
    assert 0.0 <= upper <= 3 / 64 + 1e-12


def test_bounds_gap_vanishes():
    gaps = []
    for n in (1 << 8, 1 << 12, 1 << 16, 1 << 22):
        lower, upper = shannon_partition_bounds(n, 0.15, 0.2)
        assert upper >= lower
        gaps.append(upper - lower)
    assert gaps == sorted(gaps, reverse=True)
    assert gaps[-1] < 1e-4


def test_binary_entropy():
    assert binary_entropy(0.5) == pytest.approx(1.0, abs=1e-12)
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.2) == pytest.approx(0.721928, abs=1e-6)
    with pytest.raises(DomainError):
        binary_entropy(1.2)


def test_shared_randomness_for_law():
    shared = SharedRandomness.for_law(42, 0.25, 0.25)
    assert shared.bias == Fraction(1, 2)
    assert shared.seed == 42
    with pytest.raises(DomainError):
        SharedRandomness(1, Fraction(3, 2))
