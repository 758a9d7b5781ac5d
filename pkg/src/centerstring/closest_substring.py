"""Closest Substring solvers.

Two pipelines share the window-tuple enumeration: the small-radius path
sweeps every patch over the tuple's free positions, while the sampling
path guesses the center on a random position multiset R, selects one
window per input string by a scaled proxy score, and hands the selected
windows to the restricted LP machinery.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from typing import Iterator, Sequence

import numpy as np

from ._seeds import derive_seed
from .core import (
    CenterSolution,
    PositionSet,
    Seq,
    StringInstance,
    SubstringInstance,
    _window_matrix,
    agreement_positions,
    compose,
    cost_substring,
    restrict,
)
from .errors import BudgetExceeded, DomainError, LengthMismatch
from .lp_round import (
    DEFAULT_ENUM_BUDGET,
    RoundingConfig,
    build_restricted,
    solve_restricted,
    with_seed,
)

_SUBSTRING_MODES = ("small_d", "sampling", "auto")
_PATCH_CHUNK = 1 << 12


@dataclass(frozen=True)
class SubstringConfig:
    r: int = 2
    epsilon: float = 1.0
    rounding: RoundingConfig = RoundingConfig()
    y_budget: int = 1 << 16
    mode: str = "auto"
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.r < 2:
            raise DomainError("subset size r must be >= 2")
        if not 0.0 < self.epsilon <= 1.0:
            raise DomainError("epsilon must be in (0, 1]")
        if self.y_budget < 1:
            raise DomainError("y_budget must be >= 1")
        if self.mode not in _SUBSTRING_MODES:
            raise DomainError(f"mode must be one of {_SUBSTRING_MODES}")


@dataclass(frozen=True)
class WindowTuple:
    """r window picks with distinct strings; repeats of a string collapse
    to one pick, mirroring the rule that two windows chosen from the same
    string must be identical.  The first pick is the anchor."""

    picks: tuple[tuple[int, int], ...]  # (string index, offset), sorted
    windows: tuple[Seq, ...]

    @property
    def anchor(self) -> Seq:
        return self.windows[0]


def enumerate_window_tuples(inst: SubstringInstance, r: int) -> Iterator[WindowTuple]:
    """All window tuples in deterministic order: support size ascending,
    then string subsets and offsets lexicographically."""
    l = inst.window
    counts = [len(s) - l + 1 for s in inst.strings]
    for k in range(1, min(r, inst.n) + 1):
        for subset in itertools.combinations(range(inst.n), k):
            for offsets in itertools.product(*(range(counts[i]) for i in subset)):
                picks = tuple(zip(subset, offsets))
                windows = tuple(inst.strings[i].window(o, l) for i, o in picks)
                yield WindowTuple(picks, windows)


def _trivial_window_candidates(
    inst: SubstringInstance, strings: Sequence[int]
) -> Iterator[Seq]:
    l = inst.window
    for i in strings:
        s = inst.strings[i]
        for off in range(len(s) - l + 1):
            yield s.window(off, l)


def _max_min_window_costs(inst: SubstringInstance, cands: np.ndarray) -> np.ndarray:
    """Radius of each candidate row: max over strings of min window distance."""
    costs = np.zeros(len(cands), dtype=np.int64)
    for s in inst.strings:
        wins = _window_matrix(s, inst.window)
        mism = (cands[:, None, :] != wins[None, :, :]).sum(axis=2).min(axis=1)
        np.maximum(costs, mism, out=costs)
    return costs


def _sweep_patches(
    inst: SubstringInstance, anchor: Seq, p: PositionSet
) -> tuple[int, Seq]:
    """Best compose(anchor, x, p) over all patches x, lexicographic ties."""
    k = inst.alphabet.size
    np_ = len(p)
    total = k ** np_
    base = np.array(anchor.data, dtype=np.int16)
    pos = np.array(p.positions, dtype=np.intp)
    best_cost = None
    best_id = -1
    for lo in range(0, total, _PATCH_CHUNK):
        hi = min(lo + _PATCH_CHUNK, total)
        ids = np.arange(lo, hi, dtype=np.int64)
        cands = np.tile(base, (hi - lo, 1))
        if np_:
            digits = np.empty((hi - lo, np_), dtype=np.int16)
            rem = ids.copy()
            for j in range(np_ - 1, -1, -1):
                digits[:, j] = rem % k
                rem //= k
            cands[:, pos] = digits
        costs = _max_min_window_costs(inst, cands)
        local = int(np.argmin(costs))
        if best_cost is None or costs[local] < best_cost:
            best_cost = int(costs[local])
            best_id = lo + local
    digits = []
    rem = best_id
    for _ in range(np_):
        digits.append(rem % k)
        rem //= k
    patch = Seq(inst.alphabet, tuple(reversed(digits)))
    return best_cost, compose(anchor, patch, p)


# candidate = (radius, enumeration rank, center)
_Candidate = tuple[int, int, Seq]


def solve_small_substring(
    inst: SubstringInstance, cfg: SubstringConfig = SubstringConfig()
) -> CenterSolution:
    """Exhaustive-patch substring solver, ratio at most 1 + 1/(2r-1).

    Intended for small optimal radius, where the free-position sets stay
    logarithmic; a tuple whose patch count exceeds cfg.y_budget aborts
    with BudgetExceeded.
    """
    k = inst.alphabet.size
    best: _Candidate | None = None
    rank = 0

    def consider(cost: int, center: Seq) -> None:
        nonlocal best, rank
        cand = (cost, rank, center)
        rank += 1
        if best is None or (cand[0], cand[1]) < (best[0], best[1]):
            best = cand

    for center in _trivial_window_candidates(inst, range(inst.n)):
        consider(cost_substring(inst, center)[0], center)

    for wt in enumerate_window_tuples(inst, cfg.r):
        q = agreement_positions(wt.windows)
        p = q.complement()
        if k ** len(p) > cfg.y_budget:
            raise BudgetExceeded(
                f"|P|={len(p)} needs {k}^{len(p)} patches, over budget {cfg.y_budget}"
            )
        cost, center = _sweep_patches(inst, wt.anchor, p)
        consider(cost, center)

    assert best is not None
    radius, _, center = best
    radius, offsets = cost_substring(inst, center)
    return CenterSolution(center, radius, offsets)


def sample_size(epsilon: float, n: int, m: int) -> int:
    """Number of random positions to draw: ceil((4/eps^2) * ln(n*m)).

    Natural log, matching the exp(-eps^2|R|/2) tail the size must defeat.
    """
    if not 0.0 < epsilon <= 1.0:
        raise DomainError("epsilon must be in (0, 1]")
    if n < 1 or m < 1:
        raise DomainError("n and m must be >= 1")
    return math.ceil(4.0 / (epsilon * epsilon) * math.log(n * m))


def select_windows(
    inst: SubstringInstance,
    y: Seq,
    r_sample: PositionSet,
    anchor_q: Seq,
    q: PositionSet,
) -> list[Seq]:
    """Per input string, the window minimizing
    d(y, w|_R) * |P|/|R| + d(anchor_q, w|_Q), scored in exact rational
    arithmetic; ties go to the smallest offset.  With an empty R the score
    reduces to the Q term alone.
    """
    if len(y) != len(r_sample):
        raise LengthMismatch(f"|y|={len(y)} vs |R|={len(r_sample)}")
    l = q.frame
    p_size = l - len(set(q.positions))
    r_size = len(r_sample)
    r_idx = np.array(r_sample.positions, dtype=np.intp)
    q_idx = np.array(q.positions, dtype=np.intp)
    y_arr = np.array(y.data, dtype=np.int16)
    aq_arr = np.array(anchor_q.data, dtype=np.int16)

    chosen: list[Seq] = []
    for s in inst.strings:
        wins = _window_matrix(s, l)
        d_q = (wins[:, q_idx] != aq_arr).sum(axis=1) if len(q_idx) else np.zeros(len(wins), dtype=np.int64)
        if r_size:
            d_r = (wins[:, r_idx] != y_arr).sum(axis=1)
            # compare d_r*|P|/|R| + d_q exactly via the |R|-scaled integers
            scores = d_r.astype(np.int64) * p_size + d_q.astype(np.int64) * r_size
        else:
            scores = d_q.astype(np.int64)
        off = int(np.argmin(scores))
        chosen.append(s.window(off, l))
    return chosen


def _draw_sample(p: PositionSet, size: int, seed: int) -> PositionSet:
    """Multiset of `size` positions drawn with replacement from p; when the
    requested size reaches |p| (or is 0), fall back to exhaustive p."""
    if size <= 0 or size >= len(p):
        return PositionSet(p.positions, p.frame, multiset=True)
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, len(p), size=size)
    drawn = sorted(p.positions[i] for i in idx)
    return PositionSet(tuple(drawn), p.frame, multiset=True)


def _min_feasible_epsilon(n: int, m: int, k: int, y_budget: int) -> float:
    """Smallest epsilon whose sample fits the y enumeration budget."""
    max_r = max(1, math.floor(math.log(y_budget) / math.log(k)))
    return math.sqrt(4.0 * math.log(n * m) / max_r)


def solve_closest_substring(
    inst: SubstringInstance,
    cfg: SubstringConfig = SubstringConfig(),
    enum_budget: int = DEFAULT_ENUM_BUDGET,
) -> CenterSolution:
    """Sampling-based substring solver, ratio 1 + 1/(2r-1) + 3*epsilon*r
    with high probability.

    For every window tuple, a position multiset R is drawn once from the
    free positions (seeded per tuple); every center guess y on R selects
    one window per string, and the restricted LP pipeline (solved within
    error epsilon*|P|) produces a candidate center.  All windows of the
    first string are also tried directly.
    """
    k = inst.alphabet.size
    l = inst.window
    n = inst.n
    m_max = max(len(s) for s in inst.strings)
    best: _Candidate | None = None
    rank = 0

    def consider(cost: int, center: Seq) -> None:
        nonlocal best, rank
        cand = (cost, rank, center)
        rank += 1
        if best is None or (cand[0], cand[1]) < (best[0], best[1]):
            best = cand

    for center in _trivial_window_candidates(inst, [0]):
        consider(cost_substring(inst, center)[0], center)

    r_formula = sample_size(cfg.epsilon, n, m_max)
    # the LP stage must stay within error epsilon*|P| overall
    rounding = replace(cfg.rounding, epsilon_prime=cfg.epsilon)

    for wt in enumerate_window_tuples(inst, cfg.r):
        q = agreement_positions(wt.windows)
        p = q.complement()
        r_sample = _draw_sample(p, r_formula, derive_seed(cfg.rng_seed, "sample", wt.picks))
        if k ** len(r_sample) > cfg.y_budget:
            eps_min = _min_feasible_epsilon(n, m_max, k, cfg.y_budget)
            raise BudgetExceeded(
                f"|R|={len(r_sample)} needs {k}^{len(r_sample)} guesses, over budget "
                f"{cfg.y_budget}; epsilon >= {eps_min:.4f} would fit"
            )
        anchor_q = restrict(wt.anchor, q)
        memo: dict[tuple[tuple[int, ...], ...], Seq] = {}
        for y_digits in itertools.product(range(k), repeat=len(r_sample)):
            y = Seq(inst.alphabet, y_digits)
            selected = select_windows(inst, y, r_sample, anchor_q, q)
            key = tuple(t.data for t in selected)
            center = memo.get(key)
            if center is None:
                sub_inst = StringInstance(inst.alphabet, tuple(selected))
                problem = build_restricted(sub_inst, wt.anchor, q)
                seed = derive_seed(cfg.rng_seed, "round", wt.picks, key)
                center, _ = solve_restricted(
                    problem, with_seed(rounding, seed), enum_budget=enum_budget
                )
                memo[key] = center
            consider(cost_substring(inst, center)[0], center)

    assert best is not None
    radius, _, center = best
    radius, offsets = cost_substring(inst, center)
    return CenterSolution(center, radius, offsets)


def best_trivial_radius(inst: SubstringInstance) -> int:
    """Radius of the best input window used directly as the center."""
    return min(
        cost_substring(inst, c)[0] for c in _trivial_window_candidates(inst, range(inst.n))
    )


def solve_substring(
    inst: SubstringInstance,
    cfg: SubstringConfig = SubstringConfig(),
    enum_budget: int = DEFAULT_ENUM_BUDGET,
) -> CenterSolution:
    """Mode dispatcher: small_d, sampling, or the auto gate.

    Auto runs the exhaustive path when the best trivial candidate already
    certifies a radius at most log2 of the input size, the regime where
    that path is polynomial, and the sampling path otherwise.
    """
    if cfg.mode == "small_d":
        return solve_small_substring(inst, cfg)
    if cfg.mode == "sampling":
        return solve_closest_substring(inst, cfg, enum_budget=enum_budget)
    total_symbols = sum(len(s) for s in inst.strings)
    if best_trivial_radius(inst) <= math.log2(max(2, total_symbols)):
        return solve_small_substring(inst, cfg)
    return solve_closest_substring(inst, cfg, enum_budget=enum_budget)
