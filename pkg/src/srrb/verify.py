"""Desk-scale verification suites behind the ``verify`` command.

Each suite checks a family of distributional facts the analysis relies on
against an independent oracle: exact enumeration for the expectation
inequalities, Gauss-Legendre quadrature for the discrete Beta tail
identity, and prefix-count recounts for the sliding-window bookkeeping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distmath import (
    beta_tail,
    binomial_cdf,
    binomial_pmf,
    expected_inverse_tail_binomial,
    expected_inverse_tail_pb,
    pb_pmf,
    roos_tv_bound,
    tv_distance,
)
from .policies import (
    BetaSlidingWindowTS,
    GaussianSlidingWindowTS,
    SlidingWindowUCB,
)

__all__ = [
    "CheckResult",
    "SuiteResult",
    "identities_suite",
    "lemmas_suite",
    "windows_suite",
    "run_suites",
    "SUITES",
]


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float  # worst residual/margin observed (sign convention per check)
    threshold: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: worst={self.worst:.3e} (threshold {self.threshold:.1e}) {self.detail}"


@dataclass
class SuiteResult:
    name: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


def _beta_tail_quadrature(alpha: int, beta: int, ys: np.ndarray) -> np.ndarray:
    """P(Beta(alpha, beta) > y) by Gauss-Legendre quadrature, vectorized
    over thresholds.

    The density is a polynomial of degree alpha + beta - 2, so a 64-node
    rule on [y, 1] is exact up to rounding for alpha + beta <= 128.
    """
    half = 0.5 * (1.0 - ys)[:, None]
    x = half * (_GL_NODES + 1.0) + ys[:, None]
    w = half * _GL_WEIGHTS
    log_norm = math.lgamma(alpha + beta) - math.lgamma(alpha) - math.lgamma(beta)
    dens = np.exp(log_norm + (alpha - 1) * np.log(x) + (beta - 1) * np.log1p(-x))
    return (w * dens).sum(axis=1)


def identities_suite() -> SuiteResult:
    """Discrete Beta tail against continuous quadrature, plus the binomial
    edge identities."""
    suite = SuiteResult("identities")

    worst = 0.0
    worst_at = ""
    ys = np.arange(0.05, 0.951, 0.05)
    for alpha in range(1, 51):
        for beta in range(1, 51):
            oracle = _beta_tail_quadrature(alpha, beta, ys)
            for y, rhs in zip(ys, oracle):
                lhs = beta_tail(alpha, beta, float(y))
                res = abs(lhs - rhs)
                if res > worst:
                    worst = res
                    worst_at = f"alpha={alpha} beta={beta} y={y:.2f}"
    suite.checks.append(
        CheckResult(
            "beta-tail identity vs quadrature",
            worst <= 1e-10,
            worst,
            1e-10,
            f"at {worst_at}",
        )
    )

    worst = 0.0
    for j in range(0, 40):
        for y in (0.1, 0.35, 0.6, 0.9):
            res = abs(binomial_cdf(j + 1, y, 0) - (1.0 - y) ** (j + 1))
            worst = max(worst, res)
    suite.checks.append(
        CheckResult("binomial cdf at zero equals (1-y)^(j+1)", worst <= 1e-13, worst, 1e-13)
    )
    return suite


def _lemma_chain_check(rng: np.random.Generator, vectors_per_j: int = 200) -> CheckResult:
    """E[1/tail] ordering: Poisson-Binomial below the mean-matched binomial,
    itself below every binomial with smaller success probability.

    Exact enumeration over all success counts; violations measured in
    relative terms.
    """
    worst = -math.inf
    worst_at = ""
    ys = np.arange(0.1, 0.91, 0.1)
    for j in range(1, 11):
        for _ in range(vectors_per_j):
            probs = rng.uniform(0.02, 0.98, size=j)
            mean = float(probs.mean())
            for y in ys:
                e_pb = expected_inverse_tail_pb(probs, float(y))
                e_mean = expected_inverse_tail_binomial(j, mean, float(y))
                rel = (e_pb - e_mean) / e_mean
                if rel > worst:
                    worst, worst_at = rel, f"j={j} y={y:.1f} (pb vs mean)"
                prev = e_mean
                for frac in (0.75, 0.5, 0.25, 0.05):
                    e_x = expected_inverse_tail_binomial(j, frac * mean, float(y))
                    rel = (prev - e_x) / e_x
                    if rel > worst:
                        worst, worst_at = rel, f"j={j} y={y:.1f} x={frac:.2f}*mean"
                    prev = e_x
    return CheckResult(
        "inverse-tail expectation ordering (exact enumeration)",
        worst <= 1e-9,
        worst,
        1e-9,
        f"worst margin at {worst_at}",
    )


def _roos_dominance_check(rng: np.random.Generator, cases: int = 500) -> CheckResult:
    """The order-0 Krawtchouk bound must dominate the exact TV distance."""
    worst = -math.inf
    for _ in range(cases):
        n = int(rng.integers(1, 13))
        probs = rng.uniform(0.05, 0.95, size=n)
        # the mean-matched reference needs n >= 2: with a single prob it
        # degenerates to comparing a distribution with itself
        if n >= 2 and rng.random() < 0.5:
            mu = float(probs.mean())
        else:
            mu = float(rng.uniform(0.05, 0.95))
        exact = tv_distance(pb_pmf(probs), binomial_pmf(n, mu))
        bound = roos_tv_bound(probs, mu)
        worst = max(worst, exact - bound)
    return CheckResult("TV bound dominates exact TV", worst <= 0.0, worst, 0.0)


def _binomial_dominance_check() -> CheckResult:
    """First-order stochastic dominance of Binomial(n, p') over
    Binomial(n, p) for p' >= p, checked CDF-wise; plus CDF monotonicity in
    the trial count."""
    worst = -math.inf
    ps = np.arange(0.05, 0.96, 0.15)
    for n in (1, 2, 5, 17, 40):
        for a in ps:
            for k in range(-1, n):
                # CDF is non-decreasing in the threshold
                diff = binomial_cdf(n, float(a), k) - binomial_cdf(n, float(a), k + 1)
                worst = max(worst, diff - 1e-14)
            for b in ps:
                if b < a:
                    continue
                for k in range(-1, n + 1):
                    # larger p -> smaller CDF
                    diff = binomial_cdf(n, float(b), k) - binomial_cdf(n, float(a), k)
                    worst = max(worst, diff - 1e-14)
        for m in (n + 1, n + 3):
            for p in ps:
                for q in ps:
                    if q > p:
                        continue
                    for k in range(0, n + 1):
                        # more trials and larger p -> smaller CDF
                        diff = binomial_cdf(m, float(p), k) - binomial_cdf(n, float(q), k)
                        worst = max(worst, diff - 1e-14)
    return CheckResult("binomial stochastic dominance (k, p and n)", worst <= 0.0, worst, 0.0)


def _beta_ordering_check() -> CheckResult:
    """Beta tails grow with alpha and shrink with beta."""
    worst = -math.inf
    ys = (0.1, 0.3, 0.5, 0.7, 0.9)
    for alpha in range(1, 30, 3):
        for beta in range(1, 30, 3):
            for y in ys:
                base = beta_tail(alpha, beta, y)
                worst = max(worst, base - beta_tail(alpha + 1, beta, y) - 1e-14)
                worst = max(worst, beta_tail(alpha, beta + 1, y) - base - 1e-14)
    return CheckResult("beta tail ordering in alpha/beta", worst <= 0.0, worst, 0.0)


def lemmas_suite(seed: int = 2024_06, vectors_per_j: int = 200, roos_cases: int = 500) -> SuiteResult:
    suite = SuiteResult("lemmas")
    rng = np.random.default_rng(seed)
    suite.checks.append(_lemma_chain_check(rng, vectors_per_j))
    suite.checks.append(_roos_dominance_check(rng, roos_cases))
    suite.checks.append(_binomial_dominance_check())
    suite.checks.append(_beta_ordering_check())
    return suite


def recount_window_stats(pulls, rewards, num_arms: int, window: int):
    """Independent recount of windowed counts and sums for every round.

    Returns (counts, sums) of shape (T+1, K): row t holds the statistics
    visible when round t+1 is selected, i.e. over rounds
    [max(t+1-window, 1), t].  Built from one-hot prefix sums of the full
    history, entirely outside the policy code.
    """
    pulls = np.asarray(pulls)
    rewards = np.asarray(rewards, dtype=float)
    horizon = pulls.size
    one_hot = np.zeros((horizon + 1, num_arms))
    one_hot[np.arange(1, horizon + 1), pulls] = 1.0
    gains = np.zeros((horizon + 1, num_arms))
    gains[np.arange(1, horizon + 1), pulls] = rewards
    count_prefix = one_hot.cumsum(axis=0)
    gain_prefix = gains.cumsum(axis=0)
    t = np.arange(horizon + 1)
    lo = np.maximum(t - window, 0)
    counts = count_prefix[t] - count_prefix[lo]
    sums = gain_prefix[t] - gain_prefix[lo]
    return counts.astype(np.int64), sums


def windows_suite(
    seed: int = 77,
    traces: int = 100,
    num_arms: int = 5,
    horizon: int = 2000,
    windows=(1, 7, 64, 2000),
) -> SuiteResult:
    """Replay random traces through each windowed policy and demand exact
    agreement between its internal statistics and the recount.

    Rewards are random multiples of 1/1024 so that float accumulation is
    exact and equality is meaningful bit for bit.
    """
    suite = SuiteResult("windows")
    rng = np.random.default_rng(seed)
    mismatches = 0
    checked = 0
    for trace in range(traces):
        window = int(windows[trace % len(windows)])
        pulls = rng.integers(0, num_arms, size=horizon)
        binary = rng.integers(0, 2, size=horizon).astype(float)
        dyadic = rng.integers(0, 1025, size=horizon) / 1024.0
        policy_rng = np.random.default_rng(seed + trace)
        candidates = [
            (BetaSlidingWindowTS(num_arms, horizon, window, 0, policy_rng), binary),
            (
                GaussianSlidingWindowTS(num_arms, horizon, window, 0, policy_rng),
                dyadic,
            ),
            (SlidingWindowUCB(num_arms, horizon, window, policy_rng), dyadic),
        ]
        policy, rewards = candidates[trace % len(candidates)]
        counts_oracle, sums_oracle = recount_window_stats(pulls, rewards, num_arms, window)
        for t in range(1, horizon + 1):
            policy.update(int(pulls[t - 1]), float(rewards[t - 1]), t)
            checked += 1
            if not (
                np.array_equal(policy.window_counts, counts_oracle[t])
                and np.array_equal(policy.window_sums, sums_oracle[t])
            ):
                mismatches += 1
    suite.checks.append(
        CheckResult(
            "window statistics equal recounts",
            mismatches == 0,
            float(mismatches),
            0.0,
            f"{checked} round-level comparisons",
        )
    )
    return suite


SUITES = {
    "identities": identities_suite,
    "lemmas": lemmas_suite,
    "windows": windows_suite,
}


def run_suites(names) -> list[SuiteResult]:
    out = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; options: {sorted(SUITES)} or 'all'")
        out.append(SUITES[name]())
    return out
