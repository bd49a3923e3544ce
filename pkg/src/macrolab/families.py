"""Macro-family builders for the six studied density regimes.

Five regimes materialize explicit macro sets; the probabilistic free-monoid
regime would need exponentially many macros, so it is represented lazily
with membership decided per word (periodicity test plus a seeded hash).
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

from .monoid import Macro, MacroSet, MonoidKind, Word, abelian, free

REGIMES = ("place", "waring", "double_log", "finite", "poly_free", "prob_free")


@dataclass(frozen=True)
class FamilySpec:
    """Parameters for one macro family, truncated to definitions of length <= r_max."""

    regime: str
    monoid: MonoidKind
    r_max: int
    b: int | None = None
    k: int | None = None
    c: float | None = None
    p: float | None = None
    big_b: float | None = None
    big_c: float | None = None
    seed: int | None = None
    words: tuple[Word, ...] | None = None
    sampler: str = "lex"

    def __post_init__(self) -> None:
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}")
        if self.r_max < 1:
            raise ValueError("r_max must be at least 1")

    @staticmethod
    def place_notation(b: int, n: int, r_max: int) -> FamilySpec:
        if b < 2:
            raise ValueError("place notation needs base b >= 2")
        return FamilySpec("place", abelian(n), r_max, b=b)

    @staticmethod
    def waring(k: int, n: int, r_max: int) -> FamilySpec:
        if k < 2:
            raise ValueError("power sums need exponent k >= 2")
        return FamilySpec("waring", abelian(n), r_max, k=k)

    @staticmethod
    def double_log(b: int, r_max: int) -> FamilySpec:
        if b < 2:
            raise ValueError("double-log towers need base b >= 2")
        return FamilySpec("double_log", abelian(1), r_max, b=b)

    @staticmethod
    def finite(
        words: list[Word] | tuple[Word, ...],
        r_max: int | None = None,
        monoid: MonoidKind | None = None,
    ) -> FamilySpec:
        """Explicit macro list; an empty list (no macros at all) needs `monoid`."""
        if words:
            monoid = words[0].monoid
        elif monoid is None:
            raise ValueError("an empty finite family needs an explicit monoid")
        top = max((w.g_length() for w in words), default=1)
        return FamilySpec("finite", monoid, r_max if r_max is not None else top, words=tuple(words))

    @staticmethod
    def poly_density_free(
        c: float, p: float, n: int, r_max: int, seed: int | None = None, sampler: str = "lex"
    ) -> FamilySpec:
        if c <= 0 or p < 0:
            raise ValueError("polynomial density needs c > 0 and p >= 0")
        if sampler not in ("lex", "random"):
            raise ValueError(f"unknown sampler {sampler!r}")
        if sampler == "random" and seed is None:
            raise ValueError("random sampler needs a seed")
        return FamilySpec("poly_free", free(n), r_max, c=c, p=p, seed=seed, sampler=sampler)

    @staticmethod
    def probabilistic_free(big_b: float, big_c: float, n: int, r_max: int, seed: int) -> FamilySpec:
        if big_c <= 4 * math.log(n):
            raise ValueError(f"need C > 4 ln n = {4 * math.log(n):.4f}, got {big_c}")
        if big_b < 2 * big_c:
            raise ValueError(f"need B >= 2C = {2 * big_c}, got {big_b}")
        return FamilySpec("prob_free", free(n), r_max, big_b=big_b, big_c=big_c, seed=seed)


def minimal_period(letters: tuple[int, ...] | list[int] | Word) -> int:
    """Smallest d >= 1 with w[j] == w[j+d] for all valid j (need not divide |w|)."""
    if isinstance(letters, Word):
        letters = letters.data
    L = len(letters)
    if L == 0:
        return 0
    # KMP failure function; the period is L minus the longest proper border.
    fail = [0] * L
    k = 0
    for i in range(1, L):
        while k > 0 and letters[i] != letters[k]:
            k = fail[k - 1]
        if letters[i] == letters[k]:
            k += 1
        fail[i] = k
    return L - fail[L - 1]


class LazyFreeMacroSet:
    """Membership-queried macro set: log-periodic words plus seeded random inclusions.

    A word w of length l >= 2 is a macro iff per(w) <= B ln(e + l), or a keyed
    64-bit hash of its letters falls below 1 / ln(e + l).  Membership is a pure
    function of (word, seed): repeated queries always agree, and distinct words
    are hashed independently.
    """

    def __init__(self, monoid: MonoidKind, big_b: float, big_c: float, seed: int):
        if monoid.is_abelian:
            raise ValueError("the probabilistic family lives in the free monoid")
        self.monoid = monoid
        self.big_b = big_b
        self.big_c = big_c
        self.seed = seed
        self._key = seed.to_bytes(8, "little", signed=False)

    @staticmethod
    def inclusion_probability(length: int) -> float:
        return 1.0 / math.log(math.e + length)

    def _hash_unit(self, letters: tuple[int, ...]) -> float:
        h = hashlib.blake2b(bytes(letters), key=self._key, digest_size=8)
        return int.from_bytes(h.digest(), "little") / 2.0**64

    def is_log_periodic(self, letters: tuple[int, ...]) -> bool:
        return minimal_period(letters) <= self.big_b * math.log(math.e + len(letters))

    def random_included(self, letters: tuple[int, ...]) -> bool:
        return self._hash_unit(letters) < self.inclusion_probability(len(letters))

    def contains_letters(self, letters: tuple[int, ...]) -> bool:
        if len(letters) < 2:
            return False
        if self.is_log_periodic(letters):
            return True
        return self.random_included(letters)

    def window(self, r: int) -> int:
        """Prefix window k(r) = ceil(C ln(e + r)) scanned for a halving macro."""
        return math.ceil(self.big_c * math.log(math.e + r))


def _lex_words(length: int, count: int, n: int) -> list[tuple[int, ...]]:
    """The `count` lexicographically smallest length-`length` words on n letters."""
    out: list[tuple[int, ...]] = []
    word = [0] * length
    for _ in range(count):
        out.append(tuple(word))
        # increment base-n counter; stop at the top word
        i = length - 1
        while i >= 0 and word[i] == n - 1:
            word[i] = 0
            i -= 1
        if i < 0:
            break
        word[i] += 1
    return out


def _sampled_words(length: int, count: int, n: int, rng) -> list[tuple[int, ...]]:
    """count distinct seeded-random words of the given length."""
    total = n**length
    count = min(count, total)
    chosen: set[int] = set()
    while len(chosen) < count:
        chosen.add(int(rng.integers(0, total)))
    out = []
    for code in sorted(chosen):
        letters = []
        for _ in range(length):
            letters.append(code % n)
            code //= n
        out.append(tuple(reversed(letters)))
    return out


def build_macro_family(spec: FamilySpec) -> MacroSet | LazyFreeMacroSet:
    """Materialize a family spec into a macro set (lazy for the probabilistic regime)."""
    n = spec.monoid.n
    if spec.regime == "place":
        b = spec.b
        macros = []
        for i in range(n):
            j = 1
            while b**j <= spec.r_max:
                mults = tuple(b**j if t == i else 0 for t in range(n))
                macros.append(Macro(f"b{b}e{j}_a{i + 1}", Word(spec.monoid, mults)))
                j += 1
        return MacroSet(spec.monoid, macros)

    if spec.regime == "waring":
        k = spec.k
        macros = []
        for i in range(n):
            m = 2  # m = 1 would be a primitive duplicate, which macro sets reject
            while m**k <= spec.r_max:
                mults = tuple(m**k if t == i else 0 for t in range(n))
                macros.append(Macro(f"pow{m}e{k}_a{i + 1}", Word(spec.monoid, mults)))
                m += 1
        return MacroSet(spec.monoid, macros)

    if spec.regime == "double_log":
        b = spec.b
        macros = []
        j = 0
        while b ** (b**j) <= spec.r_max:
            macros.append(Macro(f"tower{j}", Word(spec.monoid, (b ** (b**j),))))
            j += 1
        return MacroSet(spec.monoid, macros)

    if spec.regime == "finite":
        macros = [
            Macro(f"m{i}", w)
            for i, w in enumerate(spec.words)
            if w.g_length() <= spec.r_max
        ]
        return MacroSet(spec.monoid, macros)

    if spec.regime == "poly_free":
        rng = None
        if spec.sampler == "random":
            import numpy.random

            rng = numpy.random.Generator(
                numpy.random.PCG64(numpy.random.SeedSequence(spec.seed))
            )
        macros = []
        for length in range(2, spec.r_max + 1):
            count = int(spec.c * length**spec.p)
            if count <= 0:
                continue
            if spec.sampler == "lex":
                words = _lex_words(length, count, n)
            else:
                words = _sampled_words(length, count, n, rng)
            for w in words:
                name = "w" + "".join(str(a) for a in w)
                macros.append(Macro(name, Word(spec.monoid, w)))
        return MacroSet(spec.monoid, macros)

    assert spec.regime == "prob_free"
    return LazyFreeMacroSet(spec.monoid, spec.big_b, spec.big_c, spec.seed)
