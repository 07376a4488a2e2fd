"""Frequency-slot unit algebra.

Units are integer indexes on a grid ``0..omega-1``.  A contiguous block of
units is a :class:`CU` with *inclusive* endpoints, and an arbitrary set of
units is a :class:`SpectrumSet` stored as its ordered list of maximal runs.
"""
from __future__ import annotations

from typing import Iterable, Iterator, NamedTuple, Optional, Sequence, Tuple


class SpectrumError(ValueError):
    """Raised when an allocation would corrupt a spectrum ledger."""


class CU(NamedTuple):
    """Contiguous units ``[lo, hi]``, both ends inclusive."""

    lo: int
    hi: int

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def includes(self, other: "CU") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __str__(self) -> str:
        return f"{self.lo}-{self.hi}"


def cu_includes(outer: CU, inner: CU) -> bool:
    return outer.lo <= inner.lo and inner.hi <= outer.hi


def make_cu(lo: int, hi: int) -> CU:
    if lo < 0 or hi < lo:
        raise SpectrumError(f"invalid CU [{lo}, {hi}]")
    return CU(int(lo), int(hi))


def _normalize(runs: Iterable[Tuple[int, int]]) -> Tuple[CU, ...]:
    out = []
    for lo, hi in sorted(runs):
        if hi < lo:
            continue
        if out and lo <= out[-1][1] + 1:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return tuple(CU(lo, hi) for lo, hi in out)


class SpectrumSet:
    """An immutable set of units kept as strictly increasing maximal runs.

    Consecutive runs ``r``, ``r'`` always satisfy ``r.hi + 1 < r'.lo``.
    """

    __slots__ = ("runs",)

    def __init__(self, runs: Iterable[Tuple[int, int]] = ()):
        runs = list(runs)
        for lo, hi in runs:
            if lo < 0 or hi < lo:
                raise SpectrumError(f"invalid run [{lo}, {hi}]")
        self.runs: Tuple[CU, ...] = _normalize(runs)

    @classmethod
    def _trusted(cls, runs: Tuple[CU, ...]) -> "SpectrumSet":
        obj = cls.__new__(cls)
        obj.runs = runs
        return obj

    @classmethod
    def full(cls, omega: int) -> "SpectrumSet":
        if omega < 1:
            return cls()
        return cls._trusted((CU(0, omega - 1),))

    @classmethod
    def from_units(cls, units: Iterable[int]) -> "SpectrumSet":
        return cls((u, u) for u in units)

    @classmethod
    def parse(cls, text: str) -> "SpectrumSet":
        """Parse the text form, e.g. ``"0-1,3-5"``; a bare ``"7"`` means ``7-7``."""
        text = text.strip()
        if not text:
            return cls()
        runs = []
        for part in text.split(","):
            part = part.strip()
            lo, sep, hi = part.partition("-")
            try:
                runs.append((int(lo), int(hi) if sep else int(lo)))
            except ValueError:
                raise SpectrumError(f"malformed spectrum run {part!r}") from None
        return cls(runs)

    def to_text(self) -> str:
        return ",".join(str(r) for r in self.runs)

    def to_json(self) -> list:
        return [[r.lo, r.hi] for r in self.runs]

    @classmethod
    def from_json(cls, pairs: Sequence[Sequence[int]]) -> "SpectrumSet":
        return cls((int(lo), int(hi)) for lo, hi in pairs)

    def units(self) -> Iterator[int]:
        for lo, hi in self.runs:
            yield from range(lo, hi + 1)

    def __len__(self) -> int:
        return sum(hi - lo + 1 for lo, hi in self.runs)

    def __bool__(self) -> bool:
        return bool(self.runs)

    def __iter__(self) -> Iterator[CU]:
        return iter(self.runs)

    def __eq__(self, other) -> bool:
        if isinstance(other, SpectrumSet):
            return self.runs == other.runs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.runs)

    def __repr__(self) -> str:
        return f"SpectrumSet({self.to_text()!r})"

    def contains_cu(self, c: CU) -> bool:
        return any(lo <= c.lo and c.hi <= hi for lo, hi in self.runs)

    def __and__(self, other: "SpectrumSet") -> "SpectrumSet":
        return intersect(self, other)

    def clip(self, c: CU) -> Tuple[CU, ...]:
        """Maximal runs of ``self`` restricted to ``c``."""
        lo_c, hi_c = c
        out = []
        for lo, hi in self.runs:
            if hi < lo_c:
                continue
            if lo > hi_c:
                break
            out.append(CU(lo if lo > lo_c else lo_c, hi if hi < hi_c else hi_c))
        return tuple(out)


def intersect(a: SpectrumSet, b: SpectrumSet) -> SpectrumSet:
    ra, rb = a.runs, b.runs
    i = j = 0
    out = []
    while i < len(ra) and j < len(rb):
        lo = max(ra[i].lo, rb[j].lo)
        hi = min(ra[i].hi, rb[j].hi)
        if lo <= hi:
            out.append(CU(lo, hi))
        if ra[i].hi < rb[j].hi:
            i += 1
        else:
            j += 1
    # overlapping pieces of two maximal run lists are already non-adjacent
    return SpectrumSet._trusted(tuple(out))


def maximal_runs(s: SpectrumSet) -> list:
    return list(s.runs)


def first_fit(s: SpectrumSet, k: int) -> Optional[CU]:
    """Lowest-indexed block of ``k`` units inside ``s``, or ``None``."""
    if k < 1:
        raise SpectrumError("first_fit needs k >= 1")
    for lo, hi in s.runs:
        if hi - lo + 1 >= k:
            return CU(lo, lo + k - 1)
    return None


def subtract(s: SpectrumSet, c: CU) -> SpectrumSet:
    """Remove ``c`` from ``s``; ``c`` must be wholly available."""
    out = []
    found = False
    for lo, hi in s.runs:
        if lo <= c.lo and c.hi <= hi:
            found = True
            if lo < c.lo:
                out.append(CU(lo, c.lo - 1))
            if c.hi < hi:
                out.append(CU(c.hi + 1, hi))
        else:
            out.append(CU(lo, hi))
    if not found:
        raise SpectrumError(f"cannot subtract {c} from {s.to_text() or '{}'}: not available")
    return SpectrumSet._trusted(tuple(out))


def add(s: SpectrumSet, c: CU) -> SpectrumSet:
    """Return ``c`` to ``s``; ``c`` must be disjoint from ``s``."""
    for lo, hi in s.runs:
        if lo <= c.hi and c.lo <= hi:
            raise SpectrumError(f"cannot add {c} to {s.to_text()}: already available")
    return SpectrumSet._trusted(_normalize(list(s.runs) + [tuple(c)]))
