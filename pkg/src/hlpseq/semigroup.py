"""Multiplicative semigroups of pairwise-coprime generators, sorted increasingly.

The sequence n_1 < n_2 < ... of all products q_1^a1 * ... * q_r^ar (a_i >= 0)
is generated exactly with arbitrary-precision integers via a min-heap merge
with duplicate suppression.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

from .errors import NonCoprime, SequenceTooShort, TooSmall


@dataclass(frozen=True)
class GeneratorSet:
    """Sorted, deduplicated, pairwise-coprime integers, each >= 2."""

    generators: tuple[int, ...]

    def __post_init__(self):
        if not self.generators:
            raise TooSmall(None)
        for q in self.generators:
            if not isinstance(q, int) or q < 2:
                raise TooSmall(q)
        gs = self.generators
        if list(gs) != sorted(set(gs)):
            object.__setattr__(self, "generators", tuple(sorted(set(gs))))
            gs = self.generators
        for i in range(len(gs)):
            for j in range(i + 1, len(gs)):
                g = math.gcd(gs[i], gs[j])
                if g > 1:
                    raise NonCoprime(gs[i], gs[j], g)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def describe(self) -> str:
        return ",".join(str(q) for q in self.generators)


def validate_generators(raw) -> GeneratorSet:
    """Normalize a raw list into a GeneratorSet, raising on coprimality/size."""
    return GeneratorSet(tuple(raw))


@dataclass(frozen=True)
class HlpSequence:
    """Complete ascending prefix of the semigroup generated by `gens`.

    With includes_one the prefix starts at 1 (all exponents zero).  For a
    single generator q the k-th term is q^(k-1) (or q^k without 1), so
    `term` and `exponent_of_index` extend past the stored prefix on demand.
    """

    terms: tuple[int, ...]
    gens: GeneratorSet
    includes_one: bool = True
    _single: int | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        q = self.gens.generators[0] if len(self.gens) == 1 else None
        object.__setattr__(self, "_single", q)

    def __len__(self):
        return len(self.terms)

    @property
    def single_generator(self) -> int | None:
        """The lone generator q, or None for multi-generator sequences."""
        return self._single

    def term(self, k: int) -> int:
        """1-based k-th semigroup element; single-generator sequences extend lazily."""
        if k < 1:
            raise SequenceTooShort(k, len(self.terms))
        if k <= len(self.terms):
            return self.terms[k - 1]
        if self._single is not None:
            return self._single ** self.exponent_of_index(k)
        raise SequenceTooShort(k, len(self.terms))

    def exponent_of_index(self, k: int) -> int:
        """For a single-generator sequence, the exponent e with n_k = q^e."""
        if self._single is None:
            raise ValueError("exponent_of_index requires a single generator")
        return k - 1 if self.includes_one else k

    def describe(self) -> str:
        tag = "" if self.includes_one else ",skip-one"
        return f"hlp({self.gens.describe()}{tag})"


def _heap_generate(gens: GeneratorSet, stop) -> list[int]:
    # stop(terms, candidate) decides when the prefix is complete.
    out: list[int] = []
    heap = [1]
    seen = {1}
    while heap:
        v = heapq.heappop(heap)
        if stop(out, v):
            break
        out.append(v)
        for q in gens:
            w = v * q
            if w not in seen:
                seen.add(w)
                heapq.heappush(heap, w)
    return out


def generate(gens: GeneratorSet, count: int, include_one: bool = True) -> HlpSequence:
    """First `count` semigroup elements in increasing order, exact at any size."""
    if count < 1:
        raise ValueError("count must be >= 1")
    want = count if include_one else count + 1
    terms = _heap_generate(gens, lambda out, v: len(out) >= want)
    if not include_one:
        terms = terms[1:]
    return HlpSequence(tuple(terms), gens, includes_one=include_one)


def generate_up_to(gens: GeneratorSet, bound: int, include_one: bool = True) -> HlpSequence:
    """All semigroup elements <= bound, increasing."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    terms = _heap_generate(gens, lambda out, v: v > bound)
    if not include_one:
        terms = terms[1:]
    return HlpSequence(tuple(terms), gens, includes_one=include_one)


def gap_profile(seq: HlpSequence, alpha: float) -> list[float]:
    """Normalized gaps t_k = (n_{k+1} - n_k) * (log n_k)^alpha / n_k for k >= 2.

    Skips k = 1 (n_1 may be 1, where log vanishes).  Boundedness of the
    profile for alpha at the almost-exponential-growth threshold is left to
    the caller to inspect.
    """
    if len(seq) < 3:
        raise ValueError("need at least 3 terms")
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    out = []
    for k in range(2, len(seq)):
        n_k = seq.terms[k - 1]
        n_next = seq.terms[k]
        # divide in exact integer space first: terms can exceed float range
        ratio = (n_next - n_k) / n_k
        out.append(ratio * math.log(n_k) ** alpha)
    return out


def factors_over(gens: GeneratorSet, n: int) -> bool:
    """True iff n factors completely over the generator set."""
    for q in gens:
        while n % q == 0:
            n //= q
    return n == 1
