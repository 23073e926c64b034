"""Permutations of the positive integers, including the block construction
that realizes any prescribed limiting variance in [||f||^2, gamma_f^2] for
sums of f(2^sigma(k) x).

The construction works in exponent space: a recursively defined strictly
increasing exponent sequence concentrates resonant (gap-1) runs at the start
of each consecutive-squares block, and the integers skipped by that sequence
are re-inserted at sparse positions gap_base^m so the result is a genuine
bijection of N whose insert count among the first N positions is O(log N).
"""

from __future__ import annotations

import math
import warnings

from .correlation import kac_variance, norm_sq
from .errors import (
    AlphaBoundary,
    DegenerateInterval,
    Duplicate,
    NonPositive,
    OutOfRange,
    PermTooShort,
)


class NegativeCoefficientsWarning(UserWarning):
    """The variance-realization construction assumes nonnegative coefficients."""


# ---------------------------------------------------------------------------
# permutation plans
# ---------------------------------------------------------------------------

class PermutationPlan:
    """Injective prefix of a bijection N -> N; values are evaluated lazily
    and never mutate once produced, so plans are safe to share."""

    kind = "abstract"
    is_identity = False

    def value(self, k: int) -> int:
        raise NotImplementedError

    def prefix(self, count: int) -> list[int]:
        return [self.value(k) for k in range(1, count + 1)]

    def materialize(self, count: int) -> list[int]:
        """Explicit (k, sigma(k)) export of the first `count` positions."""
        return self.prefix(count)

    def describe(self) -> str:
        return self.kind


class IdentityPermutation(PermutationPlan):
    kind = "identity"
    is_identity = True

    def value(self, k: int) -> int:
        if k < 1:
            raise PermTooShort(k, 0)
        return k


class ExplicitPermutation(PermutationPlan):
    """User-supplied injective prefix; evaluation beyond it raises."""

    kind = "explicit"

    def __init__(self, values):
        vals = [int(v) for v in values]
        seen = set()
        for v in vals:
            if v < 1:
                raise NonPositive(v)
            if v in seen:
                raise Duplicate(v)
            seen.add(v)
        self._values = vals

    def value(self, k: int) -> int:
        if not 1 <= k <= len(self._values):
            raise PermTooShort(k, len(self._values))
        return self._values[k - 1]

    def __len__(self):
        return len(self._values)

    def describe(self) -> str:
        return f"explicit[{len(self._values)}]"


class _IncreasingBuffer:
    """Materialized view of a strictly increasing integer stream."""

    def __init__(self, source):
        self._it = iter(source)
        self.values: list[int] = []
        self.present: set[int] = set()
        self.exhausted = False

    def _pull(self) -> bool:
        try:
            v = next(self._it)
        except StopIteration:
            self.exhausted = True
            return False
        v = int(v)
        if v < 1 or (self.values and v <= self.values[-1]):
            raise ValueError("exponent stream must be strictly increasing and positive")
        self.values.append(v)
        self.present.add(v)
        return True

    def at(self, i: int) -> int | None:
        while len(self.values) <= i and not self.exhausted:
            self._pull()
        return self.values[i] if i < len(self.values) else None

    def covers(self, v: int) -> bool:
        """Extend until the stream has passed v (or ended)."""
        while not self.exhausted and (not self.values or self.values[-1] < v):
            self._pull()
        return bool(self.values) and self.values[-1] >= v


class EmbeddedPermutation(PermutationPlan):
    """Main exponent sequence with the m-th skipped integer inserted at
    position gap_base^m; main values shift right past each insert."""

    kind = "embedded"

    def __init__(self, exponents, gap_base: int = 2, label: str = "embed"):
        if gap_base < 2:
            raise ValueError("gap_base must be >= 2")
        self._buf = _IncreasingBuffer(exponents)
        self._gap_base = gap_base
        self._label = label
        self._sigma: list[int] = []
        self._main_idx = 0
        self._next_insert = gap_base
        self._missing_cand = 1
        self.insert_count = 0

    def _next_missing(self) -> int | None:
        # walk candidates upward; a candidate is decided once the stream
        # has passed it (streams may be finite: then no further inserts)
        c = self._missing_cand
        while self._buf.covers(c):
            if c not in self._buf.present:
                self._missing_cand = c + 1
                return c
            c += 1
        self._missing_cand = c
        return None

    def _extend_to(self, k: int):
        while len(self._sigma) < k:
            pos = len(self._sigma) + 1
            if pos == self._next_insert:
                h = self._next_missing()
                self._next_insert *= self._gap_base
                if h is not None:
                    self._sigma.append(h)
                    self.insert_count += 1
                    continue
            v = self._buf.at(self._main_idx)
            if v is None:
                raise PermTooShort(k, len(self._sigma))
            self._main_idx += 1
            self._sigma.append(v)

    def value(self, k: int) -> int:
        if k < 1:
            raise PermTooShort(k, len(self._sigma))
        self._extend_to(k)
        return self._sigma[k - 1]

    def describe(self) -> str:
        return f"{self._label};gap_base={self._gap_base}"


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------

def permutation_from_list(prefix) -> ExplicitPermutation:
    """Explicit plan from pairwise-distinct positive values."""
    return ExplicitPermutation(prefix)


def identity_permutation() -> IdentityPermutation:
    return IdentityPermutation()


def alpha_for_target(f, rho_sq: float) -> float:
    """Mixing weight alpha = (rho^2 - ||f||^2) / (gamma_f^2 - ||f||^2) in [0,1]."""
    nf = norm_sq(f)
    gf = kac_variance(f)
    if _has_negative_coefficients(f):
        warnings.warn(
            "construction is only guaranteed for nonnegative coefficients",
            NegativeCoefficientsWarning,
            stacklevel=2,
        )
    width = gf - nf
    tol = 1e-12 * max(1.0, abs(gf), abs(nf))
    if abs(width) <= tol:
        if abs(rho_sq - nf) > tol:
            raise DegenerateInterval(
                f"gamma^2 = ||f||^2 = {nf}; only rho^2 = {nf} is realizable")
        return 1.0
    alpha = (rho_sq - nf) / width
    if alpha < -tol or alpha > 1.0 + tol:
        raise OutOfRange(
            f"rho^2 = {rho_sq} outside [{nf}, {gf}]")
    return min(1.0, max(0.0, alpha))


def _has_negative_coefficients(f) -> bool:
    a = getattr(f, "_a", None)
    if a is None:
        return True  # sawtooth has negative sine coefficients
    return bool((a < 0).any() or (f._b < 0).any())


def _rho_step(k: int, alpha) -> int:
    # block membership: k in Delta_i iff i^2 < k <= (i+1)^2
    i = math.isqrt(k - 1)
    if k == i * i + 1:
        return i + 1
    if k <= i * i + math.ceil(2 * i * alpha):
        return 1
    return i + 1


def rho_exponent_stream(alpha):
    """Infinite strictly increasing exponent sequence of the block recursion."""
    n = 1
    yield n
    k = 2
    while True:
        n += _rho_step(k, alpha)
        yield n
        k += 1


def rho_exponents(alpha, count: int) -> list[int]:
    """First `count` exponents: n_1 = 1; inside block {i^2+1..(i+1)^2} the
    step is i+1 at the block start, 1 on the resonant stretch
    [i^2+2, i^2+ceil(2 i alpha)], and i+1 otherwise."""
    if not 0 < alpha < 1:
        raise AlphaBoundary(alpha)
    if count < 1:
        raise ValueError("count must be >= 1")
    out = []
    for v in rho_exponent_stream(alpha):
        out.append(v)
        if len(out) == count:
            return out


def square_exponents(count: int) -> list[int]:
    """Rapidly growing exponents k^2 used at the alpha = 0 endpoint."""
    return [k * k for k in range(1, count + 1)]


def square_exponent_stream():
    k = 1
    while True:
        yield k * k
        k += 1


def embed_as_permutation(exponents, gap_base: int = 2,
                         label: str = "embed") -> PermutationPlan:
    """Bijection of N following the exponent sequence, with skipped integers
    inserted at positions gap_base^m (O(log N) inserts in any N-prefix)."""
    return EmbeddedPermutation(exponents, gap_base=gap_base, label=label)


def rho_permutation(f, rho_sq: float, gap_base: int = 2) -> PermutationPlan:
    """Plan realizing lim A_N^2 / N = rho^2 on the doubling sequence.

    alpha = 1 is the identity; alpha = 0 embeds the square exponents
    (lacunary regime); interior alpha uses the block recursion.
    """
    alpha = alpha_for_target(f, rho_sq)
    if alpha == 1.0:
        return identity_permutation()
    if alpha == 0.0:
        return embed_as_permutation(
            square_exponent_stream(), gap_base=gap_base, label="rho:alpha=0")
    return embed_as_permutation(
        rho_exponent_stream(alpha), gap_base=gap_base,
        label=f"rho:alpha={alpha:g}")
