"""Strings, alphabets, Hamming geometry and position-set algebra.

Positions are 0-based throughout the library; only the CLI renders them
1-based.  All types are immutable after construction, all operations are
pure functions, so everything here is safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    AlphabetMismatch,
    DomainError,
    EmptyInput,
    FrameMismatch,
    LengthMismatch,
    SizeMismatch,
    WindowTooLong,
)


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of distinct single-character symbols."""

    symbols: tuple[str, ...]
    _lookup: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.symbols) < 2:
            raise DomainError("alphabet needs at least 2 symbols")
        for s in self.symbols:
            if not isinstance(s, str) or len(s) != 1:
                raise DomainError(f"alphabet symbols must be single characters, got {s!r}")
        if len(set(self.symbols)) != len(self.symbols):
            raise DomainError("alphabet symbols must be distinct")
        object.__setattr__(self, "_lookup", {s: i for i, s in enumerate(self.symbols)})

    @classmethod
    def of(cls, symbols: str | Iterable[str]) -> "Alphabet":
        return cls(tuple(symbols))

    @property
    def size(self) -> int:
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self._lookup[symbol]
        except KeyError:
            raise AlphabetMismatch(f"symbol {symbol!r} not in alphabet {''.join(self.symbols)!r}") from None

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._lookup


BINARY = Alphabet.of("01")
DNA = Alphabet.of("ACGT")


@dataclass(frozen=True)
class Seq:
    """Immutable symbol string stored as alphabet indices."""

    alphabet: Alphabet
    data: tuple[int, ...]

    def __post_init__(self) -> None:
        k = self.alphabet.size
        for v in self.data:
            if not 0 <= v < k:
                raise DomainError(f"symbol index {v} out of range for alphabet size {k}")

    @classmethod
    def from_text(cls, alphabet: Alphabet, text: str) -> "Seq":
        return cls(alphabet, tuple(alphabet.index(c) for c in text))

    @property
    def text(self) -> str:
        return "".join(self.alphabet.symbols[v] for v in self.data)

    def window(self, offset: int, length: int) -> "Seq":
        if offset < 0 or offset + length > len(self.data):
            raise DomainError(f"window [{offset}, {offset + length}) outside sequence of length {len(self.data)}")
        return Seq(self.alphabet, self.data[offset:offset + length])

    def __len__(self) -> int:
        return len(self.data)

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class PositionSet:
    """Sorted 0-based positions inside a frame; optionally a multiset."""

    positions: tuple[int, ...]
    frame: int
    multiset: bool = False

    def __post_init__(self) -> None:
        if self.frame < 0:
            raise DomainError("frame must be nonnegative")
        prev = -1
        for p in self.positions:
            if not 0 <= p < self.frame:
                raise DomainError(f"position {p} outside frame {self.frame}")
            if p < prev or (p == prev and not self.multiset):
                raise DomainError("positions must be sorted, strictly increasing for a plain set")
            prev = p

    @classmethod
    def of(cls, positions: Iterable[int], frame: int, multiset: bool = False) -> "PositionSet":
        return cls(tuple(sorted(positions)), frame, multiset)

    def complement(self) -> "PositionSet":
        present = set(self.positions)
        return PositionSet(tuple(p for p in range(self.frame) if p not in present), self.frame)

    def __len__(self) -> int:
        return len(self.positions)

    def __iter__(self) -> Iterator[int]:
        return iter(self.positions)

    def __contains__(self, p: int) -> bool:
        return p in self.positions


@dataclass(frozen=True)
class StringInstance:
    """n strings of one common length m over one alphabet."""

    alphabet: Alphabet
    strings: tuple[Seq, ...]

    def __post_init__(self) -> None:
        if not self.strings:
            raise EmptyInput("instance needs at least one string")
        m = len(self.strings[0])
        if m < 1:
            raise DomainError("strings must be nonempty")
        for s in self.strings:
            if s.alphabet != self.alphabet:
                raise AlphabetMismatch("all strings must share the instance alphabet")
            if len(s) != m:
                raise LengthMismatch("all strings must have equal length")

    @classmethod
    def from_texts(cls, alphabet: Alphabet, texts: Sequence[str]) -> "StringInstance":
        return cls(alphabet, tuple(Seq.from_text(alphabet, t) for t in texts))

    @property
    def n(self) -> int:
        return len(self.strings)

    @property
    def m(self) -> int:
        return len(self.strings[0])


@dataclass(frozen=True)
class SubstringInstance:
    """n strings (lengths may differ) plus a target window length L."""

    alphabet: Alphabet
    strings: tuple[Seq, ...]
    window: int

    def __post_init__(self) -> None:
        if not self.strings:
            raise EmptyInput("instance needs at least one string")
        if self.window < 1:
            raise DomainError("window length must be >= 1")
        for s in self.strings:
            if s.alphabet != self.alphabet:
                raise AlphabetMismatch("all strings must share the instance alphabet")
            if len(s) < self.window:
                raise WindowTooLong(f"window {self.window} exceeds a string of length {len(s)}")

    @classmethod
    def from_texts(cls, alphabet: Alphabet, texts: Sequence[str], window: int) -> "SubstringInstance":
        return cls(alphabet, tuple(Seq.from_text(alphabet, t) for t in texts), window)

    @property
    def n(self) -> int:
        return len(self.strings)


@dataclass(frozen=True)
class CenterSolution:
    """A center string, its achieved radius and per-input window offsets.

    Offsets are always 0 for the whole-string problem.  The radius is the
    recomputed cost of the center, never a stale bound.
    """

    center: Seq
    radius: int
    witnesses: tuple[int, ...]


@lru_cache(maxsize=8192)
def _as_array(s: Seq) -> np.ndarray:
    arr = np.array(s.data, dtype=np.int16)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=1024)
def _strings_matrix(inst: StringInstance) -> np.ndarray:
    mat = np.array([s.data for s in inst.strings], dtype=np.int16)
    mat.setflags(write=False)
    return mat


@lru_cache(maxsize=4096)
def _window_matrix(s: Seq, length: int) -> np.ndarray:
    """All length-`length` windows of `s`, one row per offset."""
    arr = _as_array(s)
    mat = np.lib.stride_tricks.sliding_window_view(arr, length)
    mat.setflags(write=False)
    return mat


def _check_same_alphabet(a: Seq, b: Seq) -> None:
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch("sequences use different alphabets")


def hamming(a: Seq, b: Seq) -> int:
    """Number of positions where a and b differ."""
    _check_same_alphabet(a, b)
    if len(a) != len(b):
        raise LengthMismatch(f"length {len(a)} vs {len(b)}")
    if not a.data:
        return 0
    return int((_as_array(a) != _as_array(b)).sum())


def restrict(s: Seq, t: PositionSet) -> Seq:
    """The subsequence of s at t's positions, honoring multiplicity."""
    if t.frame != len(s):
        raise FrameMismatch(f"position frame {t.frame} vs sequence length {len(s)}")
    return Seq(s.alphabet, tuple(s.data[j] for j in t.positions))


def agreement_positions(ts: Sequence[Seq]) -> PositionSet:
    """Positions where all given equal-length sequences carry the same symbol."""
    if not ts:
        raise EmptyInput("need at least one sequence")
    m = len(ts[0])
    for s in ts[1:]:
        _check_same_alphabet(ts[0], s)
        if len(s) != m:
            raise LengthMismatch("sequences must have equal length")
    if len(ts) == 1:
        return PositionSet(tuple(range(m)), m)
    mat = np.array([s.data for s in ts], dtype=np.int16)
    agree = (mat == mat[0]).all(axis=0)
    return PositionSet(tuple(int(j) for j in np.flatnonzero(agree)), m)


def compose(base: Seq, patch: Seq, p: PositionSet) -> Seq:
    """A copy of base overwritten with patch at the positions of p."""
    if p.multiset:
        raise DomainError("compose requires a plain position set")
    if p.frame != len(base):
        raise FrameMismatch(f"position frame {p.frame} vs base length {len(base)}")
    if len(patch) != len(p):
        raise SizeMismatch(f"patch length {len(patch)} vs position set size {len(p)}")
    _check_same_alphabet(base, patch)
    out = list(base.data)
    for j, v in zip(p.positions, patch.data):
        out[j] = v
    return Seq(base.alphabet, tuple(out))


def cost_string(inst: StringInstance, center: Seq) -> int:
    """Max Hamming distance from center to the instance strings."""
    _check_same_alphabet(inst.strings[0], center)
    if len(center) != inst.m:
        raise LengthMismatch(f"center length {len(center)} vs instance length {inst.m}")
    mat = _strings_matrix(inst)
    return int((mat != _as_array(center)).sum(axis=1).max())


def cost_substring(inst: SubstringInstance, center: Seq) -> tuple[int, tuple[int, ...]]:
    """Max over strings of the min distance from center to any length-L window.

    Returns (radius, per-string offsets); window ties break toward the
    smallest offset.
    """
    _check_same_alphabet(inst.strings[0], center)
    if len(center) != inst.window:
        raise LengthMismatch(f"center length {len(center)} vs window {inst.window}")
    carr = _as_array(center)
    radius = 0
    offsets = []
    for s in inst.strings:
        dists = (_window_matrix(s, inst.window) != carr).sum(axis=1)
        off = int(np.argmin(dists))  # first occurrence = smallest offset
        offsets.append(off)
        radius = max(radius, int(dists[off]))
    return radius, tuple(offsets)


def rho0_diagnostic(ts: Sequence[Seq], d_ref: int) -> Fraction:
    """Max pairwise Hamming distance divided by a reference radius."""
    if d_ref <= 0:
        raise DomainError("d_ref must be positive")
    worst = 0
    for i in range(len(ts)):
        for j in range(i + 1, len(ts)):
            worst = max(worst, hamming(ts[i], ts[j]))
    return Fraction(worst, d_ref)
