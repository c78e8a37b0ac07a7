"""Bounded multisets over a finite ordered domain.

An M-set is stored as a tuple of counts aligned with its space's domain, so
equality and hashing are pointwise by construction.
"""

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Literal, Mapping

from src.utils import (
    BudgetExceededError,
    NotASubsetError,
    ParseError,
    SpaceMismatchError,
)

DEFAULT_ENUM_BUDGET = 1_000_000

# symbols may be any text the literal form can delimit
_SYMBOL = re.compile(r"[^\s,{}/]+")
_TERM = re.compile(r"\s*([0-9]+)\s*/\s*([^\s,{}/]+)\s*")

CombineOp = Literal["union", "intersect", "add", "subtract"]
PowerKind = Literal["all", "whole", "full"]


@dataclass(frozen=True)
class MSpace:
    """The universe [X]^w: a fixed domain order and a multiplicity bound."""

    domain: tuple[str, ...]
    w: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "domain", tuple(self.domain))
        if not self.domain:
            raise ValueError("domain must be non-empty")
        if len(set(self.domain)) != len(self.domain):
            raise ValueError(f"domain has duplicate symbols: {self.domain}")
        for symbol in self.domain:
            if not isinstance(symbol, str) or _SYMBOL.fullmatch(symbol) is None:
                raise ValueError(
                    f"domain symbol {symbol!r} must be non-empty and free of "
                    "whitespace and the characters ,{}/"
                )
        if self.w < 1:
            raise ValueError(f"multiplicity bound must be >= 1, got {self.w}")

    @cached_property
    def _positions(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.domain)}

    def position(self, symbol: str) -> int:
        try:
            return self._positions[symbol]
        except KeyError:
            raise KeyError(f"symbol {symbol!r} not in domain {self.domain}") from None

    def empty(self) -> "MSet":
        return MSet(self, (0,) * len(self.domain))

    def top(self) -> "MSet":
        return MSet(self, (self.w,) * len(self.domain))

    def mset(self, counts: Mapping[str, int] | None = None, **kwargs: int) -> "MSet":
        """Build an M-set from a symbol -> count mapping; absent symbols count 0."""
        merged = dict(counts or {}, **kwargs)
        vector = [0] * len(self.domain)
        for symbol, count in merged.items():
            vector[self.position(symbol)] = count
        return MSet(self, tuple(vector))

    def parse(self, text: str) -> "MSet":
        return parse_mset(text, self)


@dataclass(frozen=True)
class MSet:
    space: MSpace
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if len(self.counts) != len(self.space.domain):
            raise ValueError(
                f"count vector of length {len(self.counts)} for a domain of "
                f"size {len(self.space.domain)}"
            )
        for symbol, count in zip(self.space.domain, self.counts):
            if not 0 <= count <= self.space.w:
                raise ValueError(
                    f"count {count} for {symbol!r} outside [0, {self.space.w}]"
                )

    def count(self, symbol: str) -> int:
        return self.counts[self.space.position(symbol)]

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(x for x, c in zip(self.space.domain, self.counts) if c > 0)

    def is_empty(self) -> bool:
        return not any(self.counts)

    def __le__(self, other: "MSet") -> bool:
        _check_space(self, other)
        return all(a <= b for a, b in zip(self.counts, other.counts))

    def __ge__(self, other: "MSet") -> bool:
        return other <= self

    def __or__(self, other: "MSet") -> "MSet":
        return combine("union", self, other)

    def __and__(self, other: "MSet") -> "MSet":
        return combine("intersect", self, other)

    def __add__(self, other: "MSet") -> "MSet":
        return combine("add", self, other)

    def __sub__(self, other: "MSet") -> "MSet":
        return combine("subtract", self, other)

    def items(self) -> Iterator[tuple[str, int]]:
        """Non-zero (symbol, count) pairs in domain order."""
        return ((x, c) for x, c in zip(self.space.domain, self.counts) if c > 0)

    def to_json(self) -> dict[str, int]:
        return dict(self.items())

    def __str__(self) -> str:
        return "{" + ", ".join(f"{c}/{x}" for x, c in self.items()) + "}"

    def __repr__(self) -> str:
        return f"MSet({self})"


def canonical_key(m: MSet) -> tuple[int, ...]:
    return m.counts


def canonical_family(members: Iterable[MSet]) -> tuple[MSet, ...]:
    """Deduplicate and sort by count vector in domain order."""
    return tuple(sorted(set(members), key=canonical_key))


def _check_space(a: MSet, b: MSet) -> None:
    if a.space != b.space:
        raise SpaceMismatchError(
            f"M-sets from different spaces: {a.space} vs {b.space}"
        )


def combine(op: CombineOp, a: MSet, b: MSet) -> MSet:
    _check_space(a, b)
    w = a.space.w
    if op == "union":
        counts = tuple(max(x, y) for x, y in zip(a.counts, b.counts))
    elif op == "intersect":
        counts = tuple(min(x, y) for x, y in zip(a.counts, b.counts))
    elif op == "add":
        # saturating: the sum never leaves [X]^w
        counts = tuple(min(w, x + y) for x, y in zip(a.counts, b.counts))
    elif op == "subtract":
        counts = tuple(max(x - y, 0) for x, y in zip(a.counts, b.counts))
    else:
        raise ValueError(f"unknown M-set operation {op!r}")
    return MSet(a.space, counts)


def union_all(members: Iterable[MSet], space: MSpace) -> MSet:
    counts = [0] * len(space.domain)
    for m in members:
        counts = [max(x, y) for x, y in zip(counts, m.counts)]
    return MSet(space, tuple(counts))


def intersection_all(members: Iterable[MSet], top: MSet) -> MSet:
    """Pointwise min of the members; the empty collection meets to ``top``."""
    counts = list(top.counts)
    for m in members:
        counts = [min(x, y) for x, y in zip(counts, m.counts)]
    return MSet(top.space, tuple(counts))


@dataclass(frozen=True)
class SubRelation:
    is_sub: bool
    is_whole: bool
    is_partial_whole: bool
    is_full: bool


def classify_sub(n: MSet, m: MSet) -> SubRelation:
    _check_space(n, m)
    is_sub = n <= m
    on_support = [(cn, cm) for cn, cm in zip(n.counts, m.counts) if cn > 0]
    # "for every / for some x in N" ranges over the support of N
    is_whole = is_sub and all(cn == cm for cn, cm in on_support)
    is_partial_whole = is_sub and any(cn == cm for cn, cm in on_support)
    is_full = is_sub and set(n.support) == set(m.support)
    return SubRelation(is_sub, is_whole, is_partial_whole, is_full)


def complement_in(n: MSet, m: MSet) -> MSet:
    """M-complement of N inside M, i.e. M minus N."""
    if not n <= m:
        raise NotASubsetError(f"{n} is not a sub-M-set of {m}")
    return MSet(m.space, tuple(cm - cn for cn, cm in zip(n.counts, m.counts)))


def _power_ranges(m: MSet, kind: PowerKind) -> list[Iterable[int]]:
    if kind == "all":
        return [range(c + 1) for c in m.counts]
    if kind == "whole":
        return [(0, c) if c > 0 else (0,) for c in m.counts]
    if kind == "full":
        return [range(1, c + 1) if c > 0 else (0,) for c in m.counts]
    raise ValueError(f"unknown power family {kind!r}")


def power_cardinality(m: MSet, kind: PowerKind = "all") -> int:
    return math.prod(len(list(r)) for r in _power_ranges(m, kind))


def enumerate_power(
    m: MSet, kind: PowerKind = "all", budget: int = DEFAULT_ENUM_BUDGET
) -> tuple[MSet, ...]:
    """P(M), PW(M) or PF(M), in canonical order."""
    size = power_cardinality(m, kind)
    if size > budget:
        raise BudgetExceededError(f"power family {kind} of {m}", size, budget)
    # itertools.product varies the last coordinate fastest, which is exactly
    # lexicographic order on count vectors
    return tuple(
        MSet(m.space, counts) for counts in itertools.product(*_power_ranges(m, kind))
    )


def parse_mset(text: str, space: MSpace) -> MSet:
    """Parse the canonical text form ``{5/a, 2/b}``; ``{}`` and ``φ`` are empty."""
    stripped = text.strip()
    if stripped in ("φ", "phi"):
        return space.empty()
    offset = len(text) - len(text.lstrip())
    if not (stripped.startswith("{") and stripped.endswith("}")):
        raise ParseError(f"expected '{{...}}' in M-set literal {text!r}", 1, offset + 1)
    body = stripped[1:-1]
    counts: dict[str, int] = {}
    if body.strip():
        position = offset + 2
        for term in body.split(","):
            match = _TERM.fullmatch(term)
            if match is None:
                msg = f"bad term {term.strip()!r}, expected 'count/symbol'"
                raise ParseError(msg, 1, position)
            count, symbol = int(match.group(1)), match.group(2)
            if symbol not in space.domain:
                msg = f"symbol {symbol!r} not in domain {list(space.domain)}"
                raise ParseError(msg, 1, position)
            if symbol in counts:
                raise ParseError(f"symbol {symbol!r} listed twice", 1, position)
            if count > space.w:
                msg = f"count {count} for {symbol!r} exceeds w={space.w}"
                raise ParseError(msg, 1, position)
            counts[symbol] = count
            position += len(term) + 1
    return space.mset(counts)


def mset_from_json(obj: object, space: MSpace, where: str = "M-set") -> MSet:
    """Build an M-set from its JSON object; errors name ``where`` as the key path."""
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object mapping symbol -> count, got {obj!r}")
    for symbol, count in obj.items():
        key = f"{where}.{symbol}"
        if symbol not in space.domain:
            raise ParseError(f"{key}: symbol not in domain {list(space.domain)}")
        if isinstance(count, bool) or not isinstance(count, int):
            raise ParseError(f"{key}: count must be an integer, got {count!r}")
        if not 0 <= count <= space.w:
            raise ParseError(f"{key}: count {count} must be in [0, {space.w}]")
    return space.mset(obj)
