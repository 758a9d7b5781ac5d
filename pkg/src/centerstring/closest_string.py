"""Closest String solver: r-subset agreement decomposition + restricted solve.

Every r-element subset of the inputs fixes its agreement positions from
the subset and optimizes the rest; every input string is also tried as a
center directly.  The best candidate wins with deterministic tie-breaks.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

from ._seeds import derive_seed
from .core import CenterSolution, Seq, StringInstance, agreement_positions, cost_string
from .errors import DomainError
from .lp_round import (
    DEFAULT_ENUM_BUDGET,
    RoundingConfig,
    build_restricted,
    solve_restricted,
    with_seed,
)


@dataclass(frozen=True)
class ClosestStringConfig:
    r: int = 2
    rounding: RoundingConfig = RoundingConfig()
    parallel: bool = False
    # also evaluate every subset member as the anchor; the members agree on
    # the whole agreement set, so this cannot change the result, but it is
    # kept selectable for completeness
    try_all_anchors: bool = False

    def __post_init__(self) -> None:
        if self.r < 2:
            raise DomainError("subset size r must be >= 2")


def subset_candidates(inst: StringInstance, r: int) -> Iterator[tuple[int, ...]]:
    """All strictly increasing r-tuples of string indices, lexicographic."""
    if r > inst.n:
        raise DomainError(f"r={r} exceeds the number of strings n={inst.n}")
    return itertools.combinations(range(inst.n), r)


# candidate = (radius, step_rank, center); ties prefer lower radius, then
# direct input centers over subset-derived ones, then the smaller center
_Candidate = tuple[int, int, Seq]


def _candidate_key(c: _Candidate) -> tuple[int, int, tuple[int, ...]]:
    return (c[0], c[1], c[2].data)


def _subset_work(
    inst: StringInstance,
    subset: tuple[int, ...],
    cfg: ClosestStringConfig,
    enum_budget: int,
) -> list[_Candidate]:
    ts = [inst.strings[i] for i in subset]
    q = agreement_positions(ts)
    seed = derive_seed(cfg.rounding.rng_seed, "subset", subset)
    rounding = with_seed(cfg.rounding, seed)
    anchors = subset if cfg.try_all_anchors else subset[:1]
    out: list[_Candidate] = []
    for anchor_idx in anchors:
        p = build_restricted(inst, inst.strings[anchor_idx], q)
        center, cost = solve_restricted(p, rounding, enum_budget=enum_budget)
        out.append((cost, 1, center))
    return out


def solve_closest_string(
    inst: StringInstance,
    cfg: ClosestStringConfig = ClosestStringConfig(),
    enum_budget: int = DEFAULT_ENUM_BUDGET,
) -> CenterSolution:
    """Approximate center string with ratio at most 1 + 1/(2r-1) + r*eps'.

    r is clamped to n for small instances.  Deterministic for a fixed
    (instance, config) pair, also under parallel subset evaluation.
    """
    r = min(cfg.r, inst.n)
    candidates: list[_Candidate] = [
        (cost_string(inst, s), 0, s) for s in inst.strings
    ]

    subsets = list(subset_candidates(inst, r))
    if cfg.parallel and len(subsets) > 1:
        with ThreadPoolExecutor() as pool:
            results = pool.map(
                lambda sub: _subset_work(inst, sub, cfg, enum_budget), subsets
            )
            for chunk in results:
                candidates.extend(chunk)
    else:
        for sub in subsets:
            candidates.extend(_subset_work(inst, sub, cfg, enum_budget))

    radius, _, center = min(candidates, key=_candidate_key)
    return CenterSolution(center, radius, (0,) * inst.n)
