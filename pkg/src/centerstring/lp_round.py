"""Restricted center optimization: LP relaxation, rounding, enumeration.

Given an anchor string fixed on an agreement set Q, the remaining free
positions P are optimized either exhaustively (small P) or through the
fractional LP followed by randomized rounding or derandomization by
conditional expectations with exact Poisson-binomial tail probabilities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from ._seeds import MASK64
from .core import (
    PositionSet,
    Seq,
    StringInstance,
    compose,
    cost_string,
    hamming,
    restrict,
)
from .errors import BudgetExceeded, DomainError, EstimatorAtLeastOne, NumericalFailure

LP_TOLERANCE = 1e-9
DEFAULT_ENUM_BUDGET = 1 << 20
_ENUM_CHUNK = 1 << 14

_ROUNDING_MODES = ("randomized", "derandomized", "auto")


@dataclass(frozen=True)
class RoundingConfig:
    """Knobs for the rounding stage of the restricted solve."""

    mode: str = "auto"
    trials: int = 32
    epsilon_prime: float = 0.5
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.mode not in _ROUNDING_MODES:
            raise DomainError(f"mode must be one of {_ROUNDING_MODES}")
        if self.trials < 1:
            raise DomainError("trials must be >= 1")
        if not 0.0 < self.epsilon_prime <= 1.0:
            raise DomainError("epsilon_prime must be in (0, 1]")


@dataclass(frozen=True)
class RestrictedProblem:
    """Center optimization over free positions P with the anchor fixed on Q."""

    inst: StringInstance
    P: PositionSet
    Q: PositionSet
    anchor: Seq
    fixed_costs: tuple[int, ...]


@dataclass(frozen=True)
class FractionalCenter:
    """Fractional per-position symbol weights plus the LP objective."""

    problem: RestrictedProblem
    weights: tuple[tuple[float, ...], ...]
    objective: float


def build_restricted(inst: StringInstance, anchor: Seq, q: PositionSet) -> RestrictedProblem:
    """Fix anchor on q and precompute each string's cost on q."""
    anchor_q = restrict(anchor, q)
    fixed = tuple(hamming(restrict(s, q), anchor_q) for s in inst.strings)
    return RestrictedProblem(inst, q.complement(), q, anchor, fixed)


def _restricted_rows(p: RestrictedProblem) -> np.ndarray:
    """(n, |P|) matrix of the instance strings restricted to P."""
    idx = np.array(p.P.positions, dtype=np.intp)
    rows = np.array([s.data for s in p.inst.strings], dtype=np.int16)
    return rows[:, idx] if len(idx) else rows[:, :0]


def solve_lp(p: RestrictedProblem) -> FractionalCenter:
    """Optimal fractional solution of the 0-1 model's LP relaxation.

    Variables are the objective d plus one weight per (position, symbol);
    any exact LP method over these |P|*|alphabet|+1 variables and n+|P|
    rows qualifies, HiGHS via scipy is used here.
    """
    np_ = len(p.P)
    if np_ < 1:
        raise DomainError("solve_lp needs at least one free position")
    k = p.inst.alphabet.size
    n = p.inst.n
    rows = _restricted_rows(p)

    nvars = 1 + np_ * k
    # one simplex constraint per position
    a_eq = np.zeros((np_, nvars))
    for j in range(np_):
        a_eq[j, 1 + j * k:1 + (j + 1) * k] = 1.0
    b_eq = np.ones(np_)
    # one mismatch budget constraint per string: sum chi*x - d <= -fixed_i
    a_ub = np.zeros((n, nvars))
    a_ub[:, 0] = -1.0
    for i in range(n):
        for j in range(np_):
            for a in range(k):
                if rows[i, j] != a:
                    a_ub[i, 1 + j * k + a] = 1.0
    b_ub = -np.array(p.fixed_costs, dtype=float)

    c = np.zeros(nvars)
    c[0] = 1.0
    bounds = [(0, None)] + [(0.0, 1.0)] * (np_ * k)
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if not res.success:
        raise NumericalFailure(f"LP solver failed: {res.message}")

    # round the objective up to the tolerance grid so solver slack can never
    # fake infeasibility in later bound checks
    objective = max(0.0, math.ceil(res.fun / LP_TOLERANCE) * LP_TOLERANCE)

    w = np.clip(res.x[1:].reshape(np_, k), 0.0, 1.0)
    w /= w.sum(axis=1, keepdims=True)
    return FractionalCenter(p, tuple(tuple(float(x) for x in row) for row in w), float(objective))


def sample_patch(frac: FractionalCenter, rng: np.random.Generator) -> tuple[int, ...]:
    """One independent per-position draw from the fractional weights."""
    w = np.array(frac.weights)
    cum = np.cumsum(w, axis=1)
    cum[:, -1] = 1.0
    u = rng.random(w.shape[0])
    idx = (u[:, None] >= cum).sum(axis=1)
    return tuple(int(v) for v in idx)


def _patch_cost(p: RestrictedProblem, patch: Sequence[int]) -> int:
    rows = _restricted_rows(p)
    arr = np.array(patch, dtype=np.int16)
    mism = (rows != arr).sum(axis=1) if len(patch) else np.zeros(p.inst.n, dtype=int)
    return int((mism + np.array(p.fixed_costs)).max())


def round_randomized(frac: FractionalCenter, cfg: RoundingConfig) -> Seq:
    """Best of cfg.trials independent rounding draws; ties keep the lowest trial.

    Trial t uses the derived seed rng_seed + t, so parallel evaluation of
    trials would reproduce the serial result.
    """
    p = frac.problem
    best_patch: tuple[int, ...] | None = None
    best_cost = -1
    for t in range(cfg.trials):
        rng = np.random.default_rng((cfg.rng_seed + t) & MASK64)
        patch = sample_patch(frac, rng)
        cost = _patch_cost(p, patch)
        if best_patch is None or cost < best_cost:
            best_patch, best_cost = patch, cost
    return Seq(p.inst.alphabet, best_patch)


def round_derandomized(frac: FractionalCenter, p: RestrictedProblem, epsilon_prime: float) -> Seq:
    """Fix positions left to right, minimizing the exact failure estimator.

    The estimator is the sum over strings of the Poisson-binomial tail
    probability that the string's final cost exceeds objective +
    epsilon_prime*|P|.  Whenever the estimator starts below 1 the returned
    patch is certified to satisfy that bound for every string.
    """
    if not 0.0 < epsilon_prime <= 1.0:
        raise DomainError("epsilon_prime must be in (0, 1]")
    np_ = len(p.P)
    n = p.inst.n
    k = p.inst.alphabet.size
    rows = _restricted_rows(p)
    w = np.array(frac.weights)  # (|P|, k)
    if np_ == 0:
        return Seq(p.inst.alphabet, ())

    bound = frac.objective + epsilon_prime * np_
    # violation for string i means final count >= k_i
    thresholds = np.array(
        [math.floor(bound - f + 1e-12) + 1 for f in p.fixed_costs], dtype=np.int64
    )

    # per-string mismatch probability at each position under the weights
    q = 1.0 - w[np.arange(np_)[None, :], rows]  # (n, |P|)

    # tails[j][i, t] = Pr[#mismatches of string i over positions j.. >= t]
    tails: list[np.ndarray] = [np.empty(0)] * (np_ + 1)
    pmf = np.zeros((n, np_ + 1))
    pmf[:, 0] = 1.0
    tails[np_] = np.flip(np.cumsum(np.flip(pmf, axis=1), axis=1), axis=1)
    for j in range(np_ - 1, -1, -1):
        qj = q[:, j][:, None]
        nxt = pmf * (1.0 - qj)
        nxt[:, 1:] += pmf[:, :-1] * qj
        pmf = nxt
        tails[j] = np.flip(np.cumsum(np.flip(pmf, axis=1), axis=1), axis=1)

    def tail_lookup(j: int, t_needed: np.ndarray) -> np.ndarray:
        remaining = np_ - j
        clamped = np.clip(t_needed, 0, np_)
        vals = tails[j][np.arange(len(t_needed)), clamped]
        return np.where(t_needed <= 0, 1.0, np.where(t_needed > remaining, 0.0, vals))

    estimator = float(tail_lookup(0, thresholds).sum())
    if estimator >= 1.0:
        raise EstimatorAtLeastOne(
            f"failure estimator {estimator:.6f} >= 1 for epsilon_prime={epsilon_prime}"
        )

    choices: list[int] = []
    accrued = np.zeros(n, dtype=np.int64)
    symbols = np.arange(k, dtype=np.int16)
    for j in range(np_):
        chi = (rows[:, j][:, None] != symbols[None, :]).astype(np.int64)  # (n, k)
        best_key = None
        best_sym = 0
        for a in range(k):
            t_needed = thresholds - accrued - chi[:, a]
            score = float(tail_lookup(j + 1, t_needed).sum())
            key = (score, -w[j, a], a)
            if best_key is None or key < best_key:
                best_key, best_sym = key, a
        choices.append(best_sym)
        accrued += chi[:, best_sym]
    return Seq(p.inst.alphabet, tuple(choices))


def enumerate_small_P(p: RestrictedProblem, budget: int = DEFAULT_ENUM_BUDGET) -> Seq:
    """Exact optimizer of the restricted problem by sweeping all patches.

    Candidates are enumerated in lexicographic alphabet order, so the
    returned minimizer is the lexicographically smallest one.
    """
    k = p.inst.alphabet.size
    np_ = len(p.P)
    total = k ** np_
    if total > budget:
        raise BudgetExceeded(f"{k}^{np_} = {total} patches exceed budget {budget}")
    if np_ == 0:
        return Seq(p.inst.alphabet, ())

    rows = _restricted_rows(p)
    fixed = np.array(p.fixed_costs, dtype=np.int64)
    best_cost = None
    best_id = -1
    for lo in range(0, total, _ENUM_CHUNK):
        hi = min(lo + _ENUM_CHUNK, total)
        ids = np.arange(lo, hi, dtype=np.int64)
        digits = np.empty((hi - lo, np_), dtype=np.int16)
        rem = ids.copy()
        for j in range(np_ - 1, -1, -1):
            digits[:, j] = rem % k
            rem //= k
        costs = ((digits[:, None, :] != rows[None, :, :]).sum(axis=2) + fixed[None, :]).max(axis=1)
        local = int(np.argmin(costs))
        if best_cost is None or costs[local] < best_cost:
            best_cost = int(costs[local])
            best_id = lo + local
    digits = []
    rem = best_id
    for _ in range(np_):
        digits.append(rem % k)
        rem //= k
    return Seq(p.inst.alphabet, tuple(reversed(digits)))


def enumeration_threshold(n: int, epsilon_prime: float) -> float:
    """Free-position count below which exhaustive enumeration is used."""
    return 4.0 * math.log(n) / (epsilon_prime * epsilon_prime)


def solve_restricted(
    p: RestrictedProblem,
    cfg: RoundingConfig,
    enum_budget: int = DEFAULT_ENUM_BUDGET,
) -> tuple[Seq, int]:
    """Solve the restricted problem and return (full-length center, its cost).

    Dispatch: below the enumeration threshold the patch is found exactly;
    otherwise the LP is solved and rounded per cfg.mode (auto attempts the
    derandomized rounding and falls back to randomized when the estimator
    starts at >= 1).
    """
    np_ = len(p.P)
    if np_ == 0 or np_ < enumeration_threshold(p.inst.n, cfg.epsilon_prime):
        patch = enumerate_small_P(p, budget=enum_budget)
    else:
        frac = solve_lp(p)
        if cfg.mode == "randomized":
            patch = round_randomized(frac, cfg)
        elif cfg.mode == "derandomized":
            patch = round_derandomized(frac, p, cfg.epsilon_prime)
        else:
            try:
                patch = round_derandomized(frac, p, cfg.epsilon_prime)
            except EstimatorAtLeastOne:
                patch = round_randomized(frac, cfg)
    center = compose(p.anchor, patch, p.P)
    return center, cost_string(p.inst, center)


def with_seed(cfg: RoundingConfig, seed: int) -> RoundingConfig:
    return replace(cfg, rng_seed=seed)
