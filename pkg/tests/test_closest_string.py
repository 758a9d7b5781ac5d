"""Closest String solver: examples, oracle sandwiches, determinism."""

import itertools

import numpy as np
import pytest

from centerstring import (
    BINARY,
    ClosestStringConfig,
    RoundingConfig,
    Seq,
    StringInstance,
    agreement_positions,
    cost_string,
    exact_closest_string,
    solve_closest_string,
    subset_candidates,
)
from centerstring.errors import DomainError


def binst(*texts):
    return StringInstance.from_texts(BINARY, texts)


def random_instance(rng, n, m):
    return StringInstance(
        BINARY,
        tuple(Seq(BINARY, tuple(int(v) for v in rng.integers(0, 2, m))) for _ in range(n)),
    )


class TestSubsetCandidates:
    def test_examples(self):
        assert list(subset_candidates(binst("0", "0", "0"), 2)) == [(0, 1), (0, 2), (1, 2)]
        assert list(subset_candidates(binst("0", "0"), 2)) == [(0, 1)]
        assert len(list(subset_candidates(binst("0", "0", "0", "0"), 3))) == 4

    def test_r_above_n_rejected(self):
        with pytest.raises(DomainError):
            list(subset_candidates(binst("0", "1"), 3))


class TestSolveClosestString:
    def test_identical_strings(self):
        from centerstring import DNA

        inst = StringInstance.from_texts(DNA, ["ACGT", "ACGT", "ACGT"])
        sol = solve_closest_string(inst, ClosestStringConfig(r=2))
        assert sol.center.text == "ACGT" and sol.radius == 0
        assert sol.witnesses == (0, 0, 0)

    def test_three_string_example(self):
        sol = solve_closest_string(binst("000", "011", "101"), ClosestStringConfig(r=2))
        assert sol.radius == 1

    def test_two_string_example(self):
        sol = solve_closest_string(binst("00", "11"), ClosestStringConfig(r=2))
        assert sol.radius == 1

    def test_r_clamped_to_small_n(self):
        sol = solve_closest_string(binst("01", "10"), ClosestStringConfig(r=5))
        assert sol.radius == 1

    def test_radius_is_recomputed_cost(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            inst = random_instance(rng, int(rng.integers(2, 6)), int(rng.integers(3, 11)))
            sol = solve_closest_string(inst, ClosestStringConfig(r=2))
            assert sol.radius == cost_string(inst, sol.center)

    def test_never_worse_than_best_input_center(self):
        rng = np.random.default_rng(37)
        for _ in range(30):
            inst = random_instance(rng, int(rng.integers(2, 6)), int(rng.integers(3, 11)))
            sol = solve_closest_string(inst, ClosestStringConfig(r=2))
            assert sol.radius <= min(cost_string(inst, s) for s in inst.strings)

    def test_oracle_sandwich_binary(self):
        rng = np.random.default_rng(43)
        for _ in range(40):
            n = int(rng.integers(2, 6))
            m = int(rng.integers(3, 11))
            inst = random_instance(rng, n, m)
            opt = exact_closest_string(inst).radius
            for r in (2, 3):
                cfg = ClosestStringConfig(
                    r=r, rounding=RoundingConfig(epsilon_prime=0.5, rng_seed=1)
                )
                sol = solve_closest_string(inst, cfg)
                assert opt <= sol.radius
                # Theorem bound with epsilon = r * epsilon_prime
                bound = (1 + 1 / (2 * r - 1) + r * 0.5) * opt
                assert sol.radius <= bound + 1e-9

    def test_free_positions_bounded_by_r_times_optimum(self):
        # every r-subset's disagreement set is within r * d_opt
        rng = np.random.default_rng(47)
        for _ in range(20):
            inst = random_instance(rng, 4, 8)
            opt = exact_closest_string(inst).radius
            for r in (2, 3):
                for sub in subset_candidates(inst, r):
                    q = agreement_positions([inst.strings[i] for i in sub])
                    assert inst.m - len(q) <= r * opt

    def test_parallel_matches_serial(self):
        rng = np.random.default_rng(53)
        for _ in range(10):
            inst = random_instance(rng, 4, 8)
            cfg_serial = ClosestStringConfig(r=2, parallel=False)
            cfg_par = ClosestStringConfig(r=2, parallel=True)
            assert solve_closest_string(inst, cfg_serial) == solve_closest_string(inst, cfg_par)

    def test_all_anchors_flag_is_result_neutral(self):
        # subset members agree on the whole agreement set, so the anchor
        # choice cannot change any candidate
        rng = np.random.default_rng(59)
        for _ in range(10):
            inst = random_instance(rng, 4, 8)
            a = solve_closest_string(inst, ClosestStringConfig(r=2, try_all_anchors=False))
            b = solve_closest_string(inst, ClosestStringConfig(r=2, try_all_anchors=True))
            assert a == b

    def test_deterministic(self):
        inst = binst("01010101", "10101010", "00110011", "11001100")
        cfg = ClosestStringConfig(r=2, rounding=RoundingConfig(rng_seed=7))
        assert solve_closest_string(inst, cfg) == solve_closest_string(inst, cfg)
