"""Instance ingestion (JSON/FASTA), planted-instance generation, the
benchmark harness and the command line interface.

JSON schema:
    {"alphabet": "...", "strings": [...], "L": optional int,
     "planted": optional {"center": "...", "d": int, "offsets": [...]}}
FASTA: `>`-header records, sequence lines concatenated, symbols upper-cased;
the alphabet is the sorted distinct symbol set unless supplied explicitly.

CSV columns of the bench report:
    instance,seed,algo,r,epsilon,radius,oracle,ratio,ms,status
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .closest_string import ClosestStringConfig, solve_closest_string
from .closest_substring import (
    SubstringConfig,
    solve_closest_substring,
    solve_small_substring,
    solve_substring,
)
from .core import Alphabet, CenterSolution, Seq, StringInstance, SubstringInstance
from .errors import CenterStringError, DomainError
from .exact import DEFAULT_EXACT_BUDGET, exact_closest_string, exact_closest_substring
from .lp_round import RoundingConfig

ALGOS = ("exact", "string", "small", "sampling")


@dataclass(frozen=True)
class PlantedMeta:
    center: str
    d: int
    offsets: tuple[int, ...]


@dataclass(frozen=True)
class InstanceFile:
    """Parsed instance payload, format-independent."""

    alphabet: str
    strings: tuple[str, ...]
    window: int | None = None
    planted: PlantedMeta | None = None

    @classmethod
    def parse_json(cls, text: str, alphabet: str | None = None) -> "InstanceFile":
        obj = json.loads(text)
        if not isinstance(obj, dict) or "strings" not in obj:
            raise DomainError("JSON instance must be an object with a 'strings' list")
        strings = tuple(str(s) for s in obj["strings"])
        alpha = alphabet or obj.get("alphabet") or _infer_alphabet(strings)
        planted = None
        if obj.get("planted") is not None:
            p = obj["planted"]
            planted = PlantedMeta(str(p["center"]), int(p["d"]), tuple(int(o) for o in p["offsets"]))
        window = obj.get("L")
        return cls(alpha, strings, None if window is None else int(window), planted)

    @classmethod
    def parse_fasta(cls, text: str, alphabet: str | None = None) -> "InstanceFile":
        strings: list[str] = []
        current: list[str] | None = None
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith(">"):
                if current is not None:
                    strings.append("".join(current))
                current = []
            else:
                if current is None:
                    current = []  # headerless FASTA body: one record
                current.append(line.upper())
        if current is not None:
            strings.append("".join(current))
        if not strings:
            raise DomainError("no sequences found in FASTA input")
        alpha = alphabet or _infer_alphabet(tuple(strings))
        return cls(alpha, tuple(strings))

    @classmethod
    def load(cls, path: str | Path, fmt: str = "auto", alphabet: str | None = None) -> "InstanceFile":
        text = Path(path).read_text()
        if fmt == "auto":
            fmt = "json" if str(path).endswith(".json") or text.lstrip().startswith("{") else "fasta"
        if fmt == "json":
            return cls.parse_json(text, alphabet)
        if fmt == "fasta":
            return cls.parse_fasta(text, alphabet)
        raise DomainError(f"unknown format {fmt!r}")

    def emit_json(self) -> str:
        obj: dict = {"alphabet": self.alphabet, "strings": list(self.strings)}
        if self.window is not None:
            obj["L"] = self.window
        if self.planted is not None:
            obj["planted"] = {
                "center": self.planted.center,
                "d": self.planted.d,
                "offsets": list(self.planted.offsets),
            }
        return json.dumps(obj, indent=2) + "\n"

    def to_instance(self) -> StringInstance | SubstringInstance:
        alpha = Alphabet.of(self.alphabet)
        if self.window is None:
            return StringInstance.from_texts(alpha, self.strings)
        return SubstringInstance.from_texts(alpha, self.strings, self.window)

    def as_substring_instance(self) -> SubstringInstance:
        """View with an explicit window; a whole-string instance gets L=m."""
        alpha = Alphabet.of(self.alphabet)
        window = self.window if self.window is not None else len(self.strings[0])
        return SubstringInstance.from_texts(alpha, self.strings, window)


def _infer_alphabet(strings: Sequence[str]) -> str:
    symbols = set({c for s in strings for c in s})
    # an alphabet needs two symbols even if the input only uses one
    for filler in "01AB":
        if len(symbols) >= 2:
            break
        symbols.add(filler)
    return "".join(sorted(symbols))


def generate_planted(
    alphabet: str, n: int, m: int, l: int, d: int, seed: int
) -> tuple[SubstringInstance, PlantedMeta]:
    """Random strings, each carrying a copy of a random center mutated in
    exactly d positions and planted at a random offset.  The instance
    optimum is therefore at most d.  Fully determined by the seed.
    """
    alpha = Alphabet.of(alphabet)
    k = alpha.size
    if n < 1 or m < 1 or l < 1:
        raise DomainError("n, m, L must all be >= 1")
    if l > m:
        raise DomainError(f"L={l} exceeds string length m={m}")
    if not 0 <= d <= l:
        raise DomainError(f"d={d} must lie in [0, L]")
    rng = np.random.default_rng(seed)
    center = rng.integers(0, k, size=l)
    strings: list[Seq] = []
    offsets: list[int] = []
    for _ in range(n):
        arr = rng.integers(0, k, size=m)
        off = int(rng.integers(0, m - l + 1))
        mutant = center.copy()
        if d:
            pos = rng.choice(l, size=d, replace=False)
            shift = rng.integers(1, k, size=d)
            mutant[pos] = (mutant[pos] + shift) % k
        arr[off:off + l] = mutant
        strings.append(Seq(alpha, tuple(int(v) for v in arr)))
        offsets.append(off)
    inst = SubstringInstance(alpha, tuple(strings), l)
    center_seq = Seq(alpha, tuple(int(v) for v in center))
    return inst, PlantedMeta(center_seq.text, d, tuple(offsets))


def planted_instance_file(
    alphabet: str, n: int, m: int, l: int, d: int, seed: int
) -> InstanceFile:
    inst, meta = generate_planted(alphabet, n, m, l, d, seed)
    return InstanceFile(alphabet, tuple(s.text for s in inst.strings), l, meta)


@dataclass(frozen=True)
class BenchRow:
    instance: str
    seed: int
    algo: str
    r: int | None
    epsilon: float | None
    radius: int | None
    oracle: int | None
    ratio: str
    ms: str
    status: str


@dataclass
class BenchReport:
    rows: list[BenchRow]
    bounds_ok: bool

    FIELDS = ("instance", "seed", "algo", "r", "epsilon", "radius", "oracle", "ratio", "ms", "status")

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.FIELDS)
        for row in self.rows:
            writer.writerow([
                row.instance,
                row.seed,
                row.algo,
                "" if row.r is None else row.r,
                "" if row.epsilon is None else f"{row.epsilon:g}",
                "" if row.radius is None else row.radius,
                "" if row.oracle is None else row.oracle,
                row.ratio,
                row.ms,
                row.status,
            ])
        return buf.getvalue()

    def to_table(self) -> str:
        grid = [list(self.FIELDS)]
        for line in self.to_csv().splitlines()[1:]:
            grid.append(next(csv.reader([line])))
        widths = [max(len(r[c]) if c < len(r) else 0 for r in grid) for c in range(len(self.FIELDS))]
        return "\n".join(
            "  ".join(str(cell).ljust(w) for cell, w in zip(row, widths)).rstrip()
            for row in grid
        )


def _ratio_bound(algo: str, r: int, epsilon: float, epsilon_prime: float) -> Fraction:
    """Declared worst-case radius/optimum ratio per algorithm."""
    base = 1 + Fraction(1, 2 * r - 1)
    if algo == "exact":
        return Fraction(1)
    if algo == "string":
        return base + Fraction(epsilon_prime) * r
    if algo == "small":
        return base
    if algo == "sampling":
        return base + 3 * Fraction(epsilon) * r
    raise DomainError(f"unknown algorithm {algo!r}")


def _within_bound(radius: int, oracle: int, bound: Fraction) -> bool:
    if oracle == 0:
        return radius == 0
    return radius <= math.ceil(bound * oracle)


def _format_ratio(radius: int, oracle: int | None) -> str:
    if oracle is None:
        return ""
    if oracle == 0:
        return "1.0000" if radius == 0 else "inf"
    return f"{radius / oracle:.4f}"


def _run_algo(
    algo: str,
    f: InstanceFile,
    *,
    r: int,
    epsilon: float,
    epsilon_prime: float,
    trials: int,
    seed: int,
    budget: int,
) -> CenterSolution:
    rounding = RoundingConfig(mode="auto", trials=trials, epsilon_prime=epsilon_prime, rng_seed=seed)
    if algo == "exact":
        inst = f.to_instance()
        if isinstance(inst, StringInstance):
            return exact_closest_string(inst, budget=budget)
        return exact_closest_substring(inst, budget=budget)
    if algo == "string":
        inst = f.to_instance()
        if isinstance(inst, SubstringInstance):
            if any(len(s) != inst.window for s in inst.strings):
                raise DomainError("the whole-string solver needs L equal to every string length")
            inst = StringInstance(inst.alphabet, inst.strings)
        return solve_closest_string(inst, ClosestStringConfig(r=r, rounding=rounding))
    cfg = SubstringConfig(
        r=r, epsilon=epsilon, rounding=rounding,
        mode="small_d" if algo == "small" else "sampling", rng_seed=seed,
    )
    sub = f.as_substring_instance()
    if algo == "small":
        return solve_small_substring(sub, cfg)
    if algo == "sampling":
        return solve_closest_substring(sub, cfg)
    raise DomainError(f"unknown algorithm {algo!r}")


def _oracle_radius(f: InstanceFile, budget: int) -> int | None:
    try:
        inst = f.to_instance()
        if isinstance(inst, StringInstance):
            return exact_closest_string(inst, budget=budget).radius
        return exact_closest_substring(inst, budget=budget).radius
    except CenterStringError:
        return None


def run_bench(
    suite: Sequence[InstanceFile | tuple[str, InstanceFile]],
    algos: Sequence[str],
    *,
    r: int = 2,
    epsilon: float = 1.0,
    epsilon_prime: float = 0.5,
    trials: int = 32,
    seed: int = 0,
    oracle_budget: int = DEFAULT_EXACT_BUDGET,
    parallel: bool = False,
    timing: bool = True,
) -> BenchReport:
    """Run each algorithm on each instance and collect a CSV-able report.

    Suite items are InstanceFile objects, optionally labeled as
    (name, InstanceFile) pairs.  Rows keep suite order regardless of
    completion order; per-instance failures become status rows instead of
    aborting the suite.  With timing=False the ms column is left blank so
    reports are byte-stable.
    """
    labeled = [
        item if isinstance(item, tuple) else (f"instance{i}", item)
        for i, item in enumerate(suite)
    ]

    def work(item: tuple[str, InstanceFile]) -> list[BenchRow]:
        name, f = item
        oracle = _oracle_radius(f, oracle_budget)
        rows: list[BenchRow] = []
        for algo in algos:
            eps_col: float | None
            eps_col = {"string": epsilon_prime, "sampling": epsilon, "small": None, "exact": None}[algo]
            r_col = None if algo == "exact" else r
            t0 = time.perf_counter()
            try:
                sol = _run_algo(
                    algo, f, r=r, epsilon=epsilon, epsilon_prime=epsilon_prime,
                    trials=trials, seed=seed, budget=oracle_budget,
                )
            except CenterStringError as exc:
                rows.append(BenchRow(name, seed, algo, r_col, eps_col, None, oracle, "", "",
                                     f"error: {exc}"))
                continue
            ms = f"{(time.perf_counter() - t0) * 1000.0:.3f}" if timing else ""
            rows.append(BenchRow(
                name, seed, algo, r_col, eps_col, sol.radius, oracle,
                _format_ratio(sol.radius, oracle), ms, "ok",
            ))
        return rows

    if parallel and len(labeled) > 1:
        with ThreadPoolExecutor() as pool:
            per_instance = list(pool.map(work, labeled))
    else:
        per_instance = [work(item) for item in labeled]

    rows = [row for chunk in per_instance for row in chunk]
    bounds_ok = True
    for row in rows:
        if row.status != "ok" or row.oracle is None or row.radius is None:
            continue
        bound = _ratio_bound(row.algo, r, epsilon, epsilon_prime)
        if not _within_bound(row.radius, row.oracle, bound):
            bounds_ok = False
    return BenchReport(rows, bounds_ok)


def _solution_json(sol: CenterSolution, algo: str, params: dict) -> str:
    # offsets are rendered 1-based to match the usual paper conventions
    obj = {
        "algo": algo,
        "center": sol.center.text,
        "radius": sol.radius,
        "offsets_1based": [o + 1 for o in sol.witnesses],
        "params": params,
    }
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _add_common_flags(sub: argparse.ArgumentParser, *, substring: bool) -> None:
    sub.add_argument("--r", type=int, default=2, help="subset size (default 2)")
    sub.add_argument("--epsilon-prime", type=float, default=0.5,
                     help="rounding accuracy epsilon' (default 0.5)")
    if substring:
        sub.add_argument("--epsilon", type=float, default=1.0,
                         help="sampling accuracy epsilon (default 1.0)")
    sub.add_argument("--trials", type=int, default=32, help="randomized rounding trials")
    sub.add_argument("--seed", type=int, default=0, help="master 64-bit seed")
    sub.add_argument("--budget", type=int, default=DEFAULT_EXACT_BUDGET,
                     help="candidate budget for exhaustive sweeps")
    sub.add_argument("--format", choices=("auto", "json", "fasta"), default="auto")
    sub.add_argument("--alphabet", default=None, help="explicit alphabet override")
    sub.add_argument("--out", default=None, help="write the result here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="centerstring",
        description="Center-string solvers under Hamming distance",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("solve-string", help="approximate Closest String")
    p.add_argument("file")
    _add_common_flags(p, substring=False)
    p.add_argument("--mode", choices=("randomized", "derandomized", "auto"), default="auto",
                   help="rounding mode")
    p.add_argument("--parallel", action="store_true")
    p.add_argument("--all-anchors", action="store_true",
                   help="try every subset member as the anchor")

    p = subs.add_parser("solve-substring", help="approximate Closest Substring")
    p.add_argument("file")
    _add_common_flags(p, substring=True)
    p.add_argument("--L", type=int, default=None, help="window length (required for FASTA)")
    p.add_argument("--mode", choices=("small_d", "sampling", "auto"), default="auto",
                   help="algorithm selection")
    p.add_argument("--rounding-mode", choices=("randomized", "derandomized", "auto"),
                   default="auto")
    p.add_argument("--y-budget", type=int, default=1 << 16,
                   help="cap on center guesses per window tuple")

    p = subs.add_parser("exact", help="exact oracle (exponential time)")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=DEFAULT_EXACT_BUDGET)
    p.add_argument("--branch-and-bound", action="store_true",
                   help="prefix-pruned search instead of the plain sweep")
    p.add_argument("--format", choices=("auto", "json", "fasta"), default="auto")
    p.add_argument("--alphabet", default=None)
    p.add_argument("--L", type=int, default=None)
    p.add_argument("--out", default=None)

    p = subs.add_parser("gen", help="generate a planted instance (JSON)")
    p.add_argument("--alphabet", default="01")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = subs.add_parser("bench", help="run algorithms over instance files")
    p.add_argument("files", nargs="+")
    p.add_argument("--algos", default="exact,string,small,sampling",
                   help=f"comma-separated subset of {','.join(ALGOS)}")
    _add_common_flags(p, substring=True)
    p.add_argument("--parallel", action="store_true")
    p.add_argument("--no-timing", action="store_true",
                   help="blank the ms column for byte-stable reports")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except CenterStringError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _load(args: argparse.Namespace) -> InstanceFile:
    f = InstanceFile.load(args.file, fmt=args.format, alphabet=args.alphabet)
    if getattr(args, "L", None) is not None:
        f = InstanceFile(f.alphabet, f.strings, args.L, f.planted)
    return f


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "solve-string":
        f = _load(args)
        inst = f.to_instance()
        if isinstance(inst, SubstringInstance):
            inst = StringInstance(inst.alphabet, inst.strings)
        rounding = RoundingConfig(mode=args.mode, trials=args.trials,
                                  epsilon_prime=args.epsilon_prime, rng_seed=args.seed)
        cfg = ClosestStringConfig(r=args.r, rounding=rounding, parallel=args.parallel,
                                  try_all_anchors=args.all_anchors)
        sol = solve_closest_string(inst, cfg, enum_budget=args.budget)
        _emit(_solution_json(sol, "string", {
            "r": args.r, "epsilon_prime": args.epsilon_prime,
            "epsilon": args.r * args.epsilon_prime, "seed": args.seed,
        }), args.out)
        return 0

    if args.command == "solve-substring":
        f = _load(args)
        if f.window is None:
            raise DomainError("window length missing: provide --L or a JSON 'L' field")
        rounding = RoundingConfig(mode=args.rounding_mode, trials=args.trials,
                                  epsilon_prime=args.epsilon_prime, rng_seed=args.seed)
        cfg = SubstringConfig(r=args.r, epsilon=args.epsilon, rounding=rounding,
                              y_budget=args.y_budget, mode=args.mode, rng_seed=args.seed)
        sol = solve_substring(f.as_substring_instance(), cfg, enum_budget=args.budget)
        _emit(_solution_json(sol, f"substring/{args.mode}", {
            "r": args.r, "epsilon": args.epsilon, "seed": args.seed,
        }), args.out)
        return 0

    if args.command == "exact":
        f = _load(args)
        inst = f.to_instance()
        if isinstance(inst, StringInstance):
            sol = exact_closest_string(inst, budget=args.budget,
                                       branch_and_bound=args.branch_and_bound)
        else:
            sol = exact_closest_substring(inst, budget=args.budget)
        _emit(_solution_json(sol, "exact", {"budget": args.budget}), args.out)
        return 0

    if args.command == "gen":
        f = planted_instance_file(args.alphabet, args.n, args.m, args.L, args.d, args.seed)
        _emit(f.emit_json(), args.out)
        return 0

    if args.command == "bench":
        suite = [
            (Path(path).name, InstanceFile.load(path, fmt=args.format, alphabet=args.alphabet))
            for path in args.files
        ]
        algos = [a.strip() for a in args.algos.split(",") if a.strip()]
        for a in algos:
            if a not in ALGOS:
                raise DomainError(f"unknown algorithm {a!r}; choose from {','.join(ALGOS)}")
        report = run_bench(
            suite, algos, r=args.r, epsilon=args.epsilon, epsilon_prime=args.epsilon_prime,
            trials=args.trials, seed=args.seed, oracle_budget=args.budget,
            parallel=args.parallel, timing=not args.no_timing,
        )
        if args.out:
            Path(args.out).write_text(report.to_csv())
        print(report.to_table())
        return 0 if report.bounds_ok else 1

    raise DomainError(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
