"""Words, macro sets, and exact minimal-representation lengths.

Two ambient monoids are supported: the free abelian monoid on n generators
(words are multiplicity vectors) and the free monoid on n generators (words
are letter sequences).  A macro set adjoins named shorthands for longer
words; the central quantity is the minimal number of generators-plus-macros
needed to write a word.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import reduce
from operator import mul

DEFAULT_LATTICE_BUDGET = 10**8


class Kind(Enum):
    FREE_ABELIAN = "abelian"
    FREE = "free"


@dataclass(frozen=True)
class MonoidKind:
    kind: Kind
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"need at least one generator, got n={self.n}")

    @property
    def is_abelian(self) -> bool:
        return self.kind is Kind.FREE_ABELIAN


def abelian(n: int) -> MonoidKind:
    return MonoidKind(Kind.FREE_ABELIAN, n)


def free(n: int) -> MonoidKind:
    return MonoidKind(Kind.FREE, n)


@dataclass(frozen=True)
class Word:
    """A monoid element: multiplicities if abelian, letters if free."""

    monoid: MonoidKind
    data: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.monoid.is_abelian:
            if len(self.data) != self.monoid.n:
                raise ValueError(
                    f"expected {self.monoid.n} multiplicities, got {len(self.data)}"
                )
            if any(m < 0 for m in self.data):
                raise ValueError("multiplicities must be non-negative")
        else:
            if any(not 0 <= a < self.monoid.n for a in self.data):
                raise ValueError(f"letters must lie in [0, {self.monoid.n})")

    @staticmethod
    def from_multiplicities(mults: tuple[int, ...] | list[int], n: int | None = None) -> Word:
        mults = tuple(mults)
        return Word(abelian(n if n is not None else len(mults)), mults)

    @staticmethod
    def from_letters(letters: tuple[int, ...] | list[int], n: int) -> Word:
        return Word(free(n), tuple(letters))

    def g_length(self) -> int:
        if self.monoid.is_abelian:
            return sum(self.data)
        return len(self.data)

    def concat(self, other: Word) -> Word:
        if other.monoid != self.monoid:
            raise ValueError("cannot combine words from different monoids")
        if self.monoid.is_abelian:
            return Word(self.monoid, tuple(a + b for a, b in zip(self.data, other.data)))
        return Word(self.monoid, self.data + other.data)

    def is_identity(self) -> bool:
        return self.g_length() == 0


def g_length(w: Word) -> int:
    """Length of w over the primitive generators alone."""
    return w.g_length()


def ball_size(monoid: MonoidKind, r: int) -> int:
    """Exact number of words of length at most r."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    n = monoid.n
    if monoid.is_abelian:
        return math.comb(r + n, n)
    if n == 1:
        return r + 1
    return (n ** (r + 1) - 1) // (n - 1)


@dataclass(frozen=True)
class Macro:
    """A named shorthand for a word of primitive length at least 2."""

    name: str
    definition: Word

    def __post_init__(self) -> None:
        if self.definition.g_length() < 2:
            raise ValueError(
                f"macro {self.name!r} has length {self.definition.g_length()}; "
                "a length-1 macro duplicates a primitive"
            )


class MacroSet:
    """An ordered collection of macros over one ambient monoid."""

    def __init__(self, monoid: MonoidKind, macros: list[Macro] | tuple[Macro, ...] = ()):
        self.monoid = monoid
        self.macros = tuple(macros)
        seen_names: set[str] = set()
        seen_defs: set[tuple[int, ...]] = set()
        for m in self.macros:
            if m.definition.monoid != monoid:
                raise ValueError(f"macro {m.name!r} lives in a different monoid")
            if m.name in seen_names:
                raise ValueError(f"duplicate macro name {m.name!r}")
            if m.definition.data in seen_defs:
                raise ValueError(f"duplicate macro definition for {m.name!r}")
            seen_names.add(m.name)
            seen_defs.add(m.definition.data)
        self._by_name = {m.name: m for m in self.macros}
        self._by_def = {m.definition.data: m for m in self.macros}
        self._trie: dict | None = None

    def __len__(self) -> int:
        return len(self.macros)

    def __iter__(self):
        return iter(self.macros)

    def get(self, name: str) -> Macro:
        return self._by_name[name]

    def find(self, name: str) -> Macro | None:
        return self._by_name.get(name)

    def macro_for_word(self, w: Word) -> Macro | None:
        return self._by_def.get(w.data)

    def contains_letters(self, letters: tuple[int, ...]) -> bool:
        return letters in self._by_def

    def with_macro(self, m: Macro) -> MacroSet:
        return MacroSet(self.monoid, self.macros + (m,))

    def trie(self) -> dict:
        """Prefix tree over free-monoid definitions; leaf key None marks a macro."""
        if self.monoid.is_abelian:
            raise ValueError("tries index free-monoid macro sets only")
        if self._trie is None:
            root: dict = {}
            for m in self.macros:
                node = root
                for a in m.definition.data:
                    node = node.setdefault(a, {})
                node[None] = m.name
            self._trie = root
        return self._trie


class LatticeBudgetError(Exception):
    """The abelian length DP would exceed its lattice-point budget."""

    def __init__(self, required: int, budget: int):
        super().__init__(f"DP needs {required} lattice points, budget is {budget}")
        self.required = required
        self.budget = budget


def _abelian_generators(
    M: MacroSet, bound: tuple[int, ...], exclude: str | None
) -> list[tuple[tuple[int, ...], str | None]]:
    """Generator vectors dominated by `bound`, paired with macro names (None = primitive)."""
    n = len(bound)
    gens: list[tuple[tuple[int, ...], str | None]] = []
    for i in range(n):
        if bound[i] >= 1:
            unit = tuple(1 if j == i else 0 for j in range(n))
            gens.append((unit, None))
    for m in M:
        if m.name == exclude:
            continue
        v = m.definition.data
        if all(a <= b for a, b in zip(v, bound)):
            gens.append((v, m.name))
    return gens


def _box_min_counts(
    bound: tuple[int, ...],
    gens: list[tuple[tuple[int, ...], str | None]],
    budget: int,
) -> list[int]:
    """Minimal generator counts for every lattice point dominated by `bound`.

    Flat row-major array over the box prod(bound_i + 1); unreachable points
    (possible only when some coordinate has no unit generator) stay at a
    sentinel larger than any true count.
    """
    dims = tuple(b + 1 for b in bound)
    size = reduce(mul, dims, 1)
    if size > budget:
        raise LatticeBudgetError(size, budget)
    strides = [0] * len(dims)
    acc = 1
    for i in range(len(dims) - 1, -1, -1):
        strides[i] = acc
        acc *= dims[i]
    offsets = [sum(v[i] * strides[i] for i in range(len(dims))) for v, _ in gens]
    vecs = [v for v, _ in gens]

    INF = size + 1
    dist = [INF] * size
    dist[0] = 0
    coord = [0] * len(dims)
    for idx in range(1, size):
        # advance row-major coordinates
        for axis in range(len(dims) - 1, -1, -1):
            coord[axis] += 1
            if coord[axis] < dims[axis]:
                break
            coord[axis] = 0
        best = INF
        for v, off in zip(vecs, offsets):
            ok = True
            for i, vi in enumerate(v):
                if coord[i] < vi:
                    ok = False
                    break
            if ok:
                cand = dist[idx - off]
                if cand < best:
                    best = cand
        if best < INF:
            dist[idx] = best + 1
    return dist


def gprime_length_abelian(
    w: Word,
    M: MacroSet,
    exclude: str | None = None,
    budget: int = DEFAULT_LATTICE_BUDGET,
) -> int:
    """Minimal generator count for w over primitives plus macros.

    `exclude` drops one macro by name (used for wrapped lengths).  Unbounded
    multi-dimensional coin change over the sublattice dominated by w; raises
    LatticeBudgetError if that box exceeds `budget` points.
    """
    if not w.monoid.is_abelian:
        raise ValueError("gprime_length_abelian needs a free abelian word")
    if M.monoid != w.monoid:
        raise ValueError("word and macro set live in different monoids")
    if w.is_identity():
        return 0
    gens = _abelian_generators(M, w.data, exclude)
    dist = _box_min_counts(w.data, gens, budget)
    return dist[-1]


def _free_matches_from(letters: tuple[int, ...], start: int, trie: dict):
    """Yield (end, name) for every macro matching letters[start:end]."""
    node = trie
    for i in range(start, len(letters)):
        node = node.get(letters[i])
        if node is None:
            return
        name = node.get(None)
        if name is not None:
            yield i + 1, name


def gprime_length_free(
    w: Word,
    M: MacroSet,
    exclude: str | None = None,
) -> int:
    """Minimal generator count for w: shortest segmentation into letters and macros."""
    if w.monoid.is_abelian:
        raise ValueError("gprime_length_free needs a free-monoid word")
    if M.monoid != w.monoid:
        raise ValueError("word and macro set live in different monoids")
    letters = w.data
    L = len(letters)
    trie = M.trie()
    excluded = M.get(exclude).definition.data if exclude is not None else None
    INF = L + 1
    dp = [0] + [INF] * L
    for j in range(L):
        if dp[j] == INF:
            continue
        if dp[j] + 1 < dp[j + 1]:
            dp[j + 1] = dp[j] + 1  # single letter
        for end, _name in _free_matches_from(letters, j, trie):
            if excluded is not None and letters[j:end] == excluded:
                continue
            if dp[j] + 1 < dp[end]:
                dp[end] = dp[j] + 1
    return dp[L]


def gprime_length(
    w: Word,
    M: MacroSet,
    exclude: str | None = None,
    budget: int = DEFAULT_LATTICE_BUDGET,
) -> int:
    """Minimal generator count for w over primitives plus macros (either monoid)."""
    if w.monoid.is_abelian:
        return gprime_length_abelian(w, M, exclude, budget)
    return gprime_length_free(w, M, exclude)


def wrapped_length(m: Macro, M: MacroSet, budget: int = DEFAULT_LATTICE_BUDGET) -> int:
    """Minimal length of m's definition over the other generators (m itself excluded)."""
    return gprime_length(m.definition, M, exclude=m.name, budget=budget)


def _macro_depths(M: MacroSet, budget: int) -> dict[str, int]:
    """Depth of every macro, in increasing definition length.

    A macro's minimal representation (itself excluded) only ever uses macros
    of strictly smaller length: an equal-length macro would have to equal the
    definition, and definitions are unique.  So increasing-length order makes
    each depth depend only on already-computed ones.
    """
    depths: dict[str, int] = {}
    for m in sorted(M, key=lambda m: (m.definition.g_length(), m.name)):
        depths[m.name] = 1 + _best_depth_score(m.definition, M, m.name, depths, budget)
    return depths


def _best_depth_score(
    w: Word, M: MacroSet, exclude: str | None, macro_depth: dict[str, int], budget: int
) -> int:
    """Min over minimal-length representations of max macro depth used (0 = primitives only)."""
    if w.monoid.is_abelian:
        gens = _abelian_generators(M, w.data, exclude)
        dims = tuple(b + 1 for b in w.data)
        size = reduce(mul, dims, 1)
        if size > budget:
            raise LatticeBudgetError(size, budget)
        strides = [0] * len(dims)
        acc = 1
        for i in range(len(dims) - 1, -1, -1):
            strides[i] = acc
            acc *= dims[i]
        INF = size + 1
        dist = [INF] * size
        score = [INF] * size
        dist[0] = 0
        score[0] = 0
        coord = [0] * len(dims)
        items = [
            (v, sum(v[i] * strides[i] for i in range(len(dims))),
             0 if name is None else macro_depth[name])
            for v, name in gens
        ]
        for idx in range(1, size):
            for axis in range(len(dims) - 1, -1, -1):
                coord[axis] += 1
                if coord[axis] < dims[axis]:
                    break
                coord[axis] = 0
            best = INF
            best_score = INF
            for v, off, d in items:
                ok = True
                for i, vi in enumerate(v):
                    if coord[i] < vi:
                        ok = False
                        break
                if not ok:
                    continue
                prev = idx - off
                if dist[prev] >= INF:
                    continue
                cand = dist[prev] + 1
                cand_score = score[prev] if score[prev] > d else d
                if cand < best or (cand == best and cand_score < best_score):
                    best = cand
                    best_score = cand_score
            dist[idx] = best
            score[idx] = best_score
        return score[-1]

    letters = w.data
    L = len(letters)
    trie = M.trie()
    excluded = M.get(exclude).definition.data if exclude is not None else None
    INF = L + 1
    dp = [INF] * (L + 1)
    sc = [INF] * (L + 1)
    dp[0] = 0
    sc[0] = 0
    for j in range(L):
        if dp[j] >= INF:
            continue
        cand = dp[j] + 1
        if cand < dp[j + 1] or (cand == dp[j + 1] and sc[j] < sc[j + 1]):
            dp[j + 1] = cand
            sc[j + 1] = sc[j]
        for end, name in _free_matches_from(letters, j, trie):
            if excluded is not None and letters[j:end] == excluded:
                continue
            d = macro_depth[name]
            cand_score = sc[j] if sc[j] > d else d
            if cand < dp[end] or (cand == dp[end] and cand_score < sc[end]):
                dp[end] = cand
                sc[end] = cand_score
    return sc[L]


def monoid_depth(
    x: Word | Macro,
    M: MacroSet,
    budget: int = DEFAULT_LATTICE_BUDGET,
) -> int:
    """Nesting depth of x's optimal representation over primitives plus macros.

    Primitives sit at depth 0.  Otherwise the depth is 1 plus the largest
    macro depth appearing in a minimal-length representation, where ties
    between minimal representations are broken toward the smallest depth.
    A word equal to some macro's definition is that macro, so the macro
    itself is excluded from its own representations.
    """
    if isinstance(x, Macro):
        word, exclude = x.definition, x.name
        member = M.find(x.name)
        if member is None or member.definition != x.definition:
            raise ValueError(f"macro {x.name!r} is not part of the macro set")
    else:
        word = x
        owner = M.macro_for_word(word)
        exclude = owner.name if owner is not None else None
    if word.g_length() <= 1:
        return 0
    depths = _macro_depths(M, budget)
    return 1 + _best_depth_score(word, M, exclude, depths, budget)
