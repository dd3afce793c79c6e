"""Monte-Carlo harness for the transmission protocols.

Statements are drawn from i.i.d. point-membership laws, pushed through a
protocol round trip, checked against the scenario's correctness contract,
and the measured payload rates are compared with the analytic bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .algset import AlgSet, entails, reconstruct, zeros
from .errors import ContractViolation, DomainError
from .partition import binary_entropy, lambda_fn
from .poly import PolySet
from .protocols import (
    t1_decode,
    t1_encode,
    t2_decode,
    t2_encode,
    t3_decode,
    t3_encode,
    t4_decode,
    t4_encode,
    t5_decode,
    t5_encode,
)
from .randomness import derive_seed, draw_array


def _check_prob(name: str, p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {p}")


@dataclass(frozen=True)
class Single:
    """Each point lands in Z(s) independently with probability p_s."""

    p_s: float

    def __post_init__(self) -> None:
        _check_prob("p_s", self.p_s)


@dataclass(frozen=True)
class Nested:
    """Coupled pair with Z(s) inside Z(q), marginal densities p_s <= p_q.

    For the conditional scenarios t2/t3 the outer set plays the shared
    background r, so p_q is the background density there.
    """

    p_s: float
    p_q: float

    def __post_init__(self) -> None:
        _check_prob("p_s", self.p_s)
        _check_prob("p_q", self.p_q)
        if self.p_s > self.p_q:
            raise DomainError("inner density p_s may not exceed outer density p_q")


@dataclass(frozen=True)
class Conditional:
    """Nested pair whose densities switch on membership in an independent Z(r)."""

    p_r: float
    p_s_in: float
    p_q_in: float
    p_s_out: float
    p_q_out: float

    def __post_init__(self) -> None:
        _check_prob("p_r", self.p_r)
        _check_prob("p_s_in", self.p_s_in)
        _check_prob("p_q_in", self.p_q_in)
        _check_prob("p_s_out", self.p_s_out)
        _check_prob("p_q_out", self.p_q_out)
        if self.p_s_in > self.p_q_in:
            raise DomainError("p_s_in may not exceed p_q_in")
        if self.p_s_out > self.p_q_out:
            raise DomainError("p_s_out may not exceed p_q_out")


LawSpec = Single | Nested | Conditional

_LAW_FOR = {
    "t1": Single,
    "t2": Nested,
    "t3": Nested,
    "t4": Nested,
    "t5": Conditional,
}


def _member(words: np.ndarray, p: float) -> np.ndarray:
    """Membership mask: the point is in iff its word falls below p * 2**64."""
    if p <= 0.0:
        return np.zeros(words.shape, dtype=bool)
    if p >= 1.0:
        return np.ones(words.shape, dtype=bool)
    return words < np.uint64(int(p * 2.0**64))


def sample(
    law: LawSpec, m: int, seed: int
) -> tuple[tuple[AlgSet, ...], tuple[PolySet, ...]]:
    """Draw one instance of the law over the 2**m points.

    Sets come inner first: Single -> (Z(s),), Nested -> (Z(s), Z(q)),
    Conditional -> (Z(s), Z(q), Z(r)).  Coupling via a shared word per point
    keeps the nesting exact, not just in expectation.  The second element is
    the matching statements, recovered from the sets.
    """
    keys = np.arange(1 << m, dtype=np.uint64)
    if isinstance(law, Single):
        words = draw_array(seed, keys)
        masks = (_member(words, law.p_s),)
    elif isinstance(law, Nested):
        words = draw_array(seed, keys)
        masks = (_member(words, law.p_s), _member(words, law.p_q))
    elif isinstance(law, Conditional):
        r_mask = _member(draw_array(derive_seed(seed, 0), keys), law.p_r)
        w = draw_array(derive_seed(seed, 1), keys)
        s_mask = np.where(r_mask, _member(w, law.p_s_in), _member(w, law.p_s_out))
        q_mask = np.where(r_mask, _member(w, law.p_q_in), _member(w, law.p_q_out))
        masks = (s_mask, q_mask, r_mask)
    else:
        raise DomainError(f"unknown law {law!r}")
    sets = tuple(AlgSet.from_bool_array(m, mk) for mk in masks)
    return sets, tuple(reconstruct(a) for a in sets)


# ------------------------------------------------------------------ trials

def _validate_combo(scenario: str, law: LawSpec, codec: str | None) -> None:
    if scenario not in _LAW_FOR:
        raise DomainError(f"unknown scenario {scenario!r}")
    want = _LAW_FOR[scenario]
    if not isinstance(law, want):
        raise DomainError(
            f"scenario {scenario} takes a {want.__name__} law, "
            f"got {type(law).__name__}"
        )
    if scenario in ("t4", "t5"):
        if codec not in ("random", "linear"):
            raise DomainError("scenarios t4/t5 need codec 'random' or 'linear'")
    elif codec is not None:
        raise DomainError(f"scenario {scenario} does not take a partition codec")


def _one_trial(
    scenario: str, law: LawSpec, m: int, trial_seed: int, codec: str | None
) -> int:
    """Sample, encode, decode, enforce the contract; return payload bits."""
    sets, stmts = sample(law, m, trial_seed)
    if scenario == "t1":
        (za,) = sets
        (s,) = stmts
        tx = t1_encode(s, seed=trial_seed, p_s=law.p_s)
        if zeros(t1_decode(tx)) != za:
            raise ContractViolation("t1 reconstruction differs from the source")
    elif scenario == "t2":
        (zs, _), (s, r) = sets, stmts
        tx = t2_encode(s, r, seed=trial_seed, p_s=law.p_s, p_r=law.p_q)
        if zeros(t2_decode(tx, r)) != zs:
            raise ContractViolation("t2 reconstruction differs from the source")
    elif scenario == "t3":
        (zs, _), (s, r) = sets, stmts
        tx = t3_encode(s, r, seed=trial_seed, p_s=law.p_s, p_r=law.p_q)
        d = t3_decode(tx, r)
        if zeros(d.union(r)) != zs:
            raise ContractViolation("difference plus background misses the source")
        for w in d:
            if entails(r, PolySet.of(m, [w])):
                raise ContractViolation(
                    "difference member already follows from the background"
                )
    elif scenario == "t4":
        (zs, zq), (s, q) = sets, stmts
        tx = t4_encode(s, q, codec=codec, seed=trial_seed, p_s=law.p_s, p_q=law.p_q)
        zhat = zeros(t4_decode(tx))
        if not (zs.issubset(zhat) and zhat.issubset(zq)):
            raise ContractViolation("t4 estimate escapes the sandwich")
    else:
        (zs, zq, _), (s, q, r) = sets, stmts
        tx = t5_encode(
            s,
            q,
            r,
            codec=codec,
            seed=trial_seed,
            conditionals=(law.p_s_in, law.p_q_in, law.p_s_out, law.p_q_out),
        )
        zhat = zeros(t5_decode(tx, r))
        if not (zs.issubset(zhat) and zhat.issubset(zq)):
            raise ContractViolation("t5 estimate escapes the sandwich")
    return len(tx.payload)


# ------------------------------------------------------------------ bounds

def _elias_overhead(k: float, c: float) -> float:
    """Worst-case bits spent on the self-delimiting length prefix."""
    k = max(k, 2.0)
    lg = max(math.log2(k), 1.0)
    return lg + 2.0 * math.log2(lg) + c


def _analytic_bounds(
    scenario: str, law: LawSpec, m: int, codec: str | None
) -> tuple[float, float]:
    """Per-point converse and achievability bounds for the given setting.

    t1 and t2/t3 pay an entropy term plus the enumeration preamble.  The
    partition scenarios pay Lambda from below; from above they pay the
    codebook-index cost, per side for t5, with the codec's own overhead.
    """
    n = float(1 << m)
    if scenario == "t1":
        lo = binary_entropy(law.p_s)
        return lo, lo + _elias_overhead(law.p_s * n, 4.0) / n
    if scenario in ("t2", "t3"):
        p_r = law.p_q
        cond = min(1.0, law.p_s / p_r) if p_r > 0.0 else 0.0
        lo = p_r * binary_entropy(cond)
        return lo, lo + _elias_overhead(law.p_s * n, 4.0) / n
    if scenario == "t4":
        sides = ((1.0, law.p_s, 1.0 - law.p_q),)
    else:
        sides = (
            (law.p_r, law.p_s_in, 1.0 - law.p_q_in),
            (1.0 - law.p_r, law.p_s_out, 1.0 - law.p_q_out),
        )
    lo = 0.0
    up = 0.0
    for w, a, b in sides:
        if w <= 0.0:
            continue
        lam = lambda_fn(a, b)
        lo += w * lam
        if codec == "linear":
            up += w * (a + b) + _elias_overhead(w * n * (a + b) + 2.0, 5.0) / n
        else:
            nl = w * n * lam
            lg = math.log2(nl) if nl > 1.0 else 0.0
            up += w * lam + (2.0 * lg + 3.0) / n
    return lo, up


@dataclass(frozen=True)
class RateReport:
    """Measured rate of one scenario/law cell next to its analytic bounds.

    Rates are payload bits per point; the constant 24-byte header is not
    counted.  Violation flags compare the sample mean against a bound with
    three standard errors of slack.
    """

    scenario: str
    law: LawSpec
    m: int
    codec: str | None
    trials: int
    mean_rate: float
    std_rate: float
    lower_bound: float
    upper_bound: float
    lower_violation: bool
    upper_violation: bool

    @property
    def gap(self) -> float:
        return self.mean_rate - self.lower_bound

    def lines(self) -> list[str]:
        return [
            f"scenario={self.scenario}",
            f"law={self.law!r}",
            f"m={self.m}",
            f"n={1 << self.m}",
            f"codec={self.codec or 'none'}",
            f"trials={self.trials}",
            f"mean_rate={self.mean_rate:.6f}",
            f"std_rate={self.std_rate:.6f}",
            f"lower_bound={self.lower_bound:.6f}",
            f"upper_bound={self.upper_bound:.6f}",
            f"gap={self.gap:.6f}",
            f"lower_violation={'yes' if self.lower_violation else 'no'}",
            f"upper_violation={'yes' if self.upper_violation else 'no'}",
        ]

    def to_text(self) -> str:
        return "\n".join(self.lines()) + "\n"


def run_trials(
    scenario: str,
    law: LawSpec,
    m: int,
    trials: int = 100,
    codec: str | None = None,
    seed: int = 0,
) -> RateReport:
    """Measure the mean payload rate of a scenario over seeded trials.

    Each trial gets the child seed derive_seed(seed, index), so reports are
    reproducible and trials are independent.  Every round trip is checked
    against the scenario's contract; a breach raises ContractViolation
    rather than polluting the average.
    """
    _validate_combo(scenario, law, codec)
    if trials < 1:
        raise DomainError("trials must be positive")
    n = 1 << m
    rates = []
    for t in range(trials):
        bits = _one_trial(scenario, law, m, derive_seed(seed, t), codec)
        rates.append(bits / n)
    mean = math.fsum(rates) / trials
    if trials > 1:
        var = math.fsum((x - mean) ** 2 for x in rates) / (trials - 1)
    else:
        var = 0.0
    std = math.sqrt(var)
    lo, up = _analytic_bounds(scenario, law, m, codec)
    slack = 3.0 * std / math.sqrt(trials) + 1e-12
    return RateReport(
        scenario=scenario,
        law=law,
        m=m,
        codec=codec,
        trials=trials,
        mean_rate=mean,
        std_rate=std,
        lower_bound=lo,
        upper_bound=up,
        lower_violation=mean < lo - slack,
        upper_violation=mean > up + slack,
    )


def bounds_table(
    scenario: str, law: LawSpec, m: int, codec: str | None = None
) -> RateReport:
    """Analytic bounds only, packaged as a trial-free report."""
    _validate_combo(scenario, law, codec)
    lo, up = _analytic_bounds(scenario, law, m, codec)
    nan = float("nan")
    return RateReport(
        scenario=scenario,
        law=law,
        m=m,
        codec=codec,
        trials=0,
        mean_rate=nan,
        std_rate=nan,
        lower_bound=lo,
        upper_bound=up,
        lower_violation=False,
        upper_violation=False,
    )


def sweep_lambda_vs_naive(
    grid: Iterable[tuple[float, float]], n: int = 4096
) -> str:
    """CSV comparing the one-sided naive rates, the linear codec and Lambda.

    One row per (p_a, p_b) grid point: the naive cost of either side alone
    (its binary entropy), the linear codec's finite-n rate, and the optimal
    Lambda.  Points must stay inside the simplex p_a + p_b <= 1.
    """
    rows = ["p_a,p_b,h_a,h_b,linear_rate,lambda"]
    for p_a, p_b in grid:
        if not (0.0 <= p_a and 0.0 <= p_b and p_a + p_b <= 1.0):
            raise DomainError(f"({p_a}, {p_b}) lies outside the simplex")
        lam = lambda_fn(p_a, p_b)
        lin = (p_a + p_b) + _elias_overhead(n * (p_a + p_b) + 2.0, 5.0) / n
        rows.append(
            f"{p_a:.6f},{p_b:.6f},{binary_entropy(p_a):.6f},"
            f"{binary_entropy(p_b):.6f},{lin:.6f},{lam:.6f}"
        )
    return "\n".join(rows) + "\n"


# Scenario/law cells exercised by default: enough trials to pin the mean
# without making the suite crawl.  The random codec row stays tiny because
# its codebook scan is exponential in the constraint count.
DEFAULT_MATRIX = (
    ("t1", Single(0.2), 12, None, 200),
    ("t2", Nested(0.125, 0.5), 12, None, 100),
    ("t3", Nested(0.15, 0.5), 7, None, 50),
    ("t4", Nested(0.25, 0.75), 12, "linear", 100),
    ("t4", Nested(0.25, 0.75), 4, "random", 100),
    ("t5", Conditional(0.5, 0.25, 0.75, 0.25, 0.75), 12, "linear", 50),
)
