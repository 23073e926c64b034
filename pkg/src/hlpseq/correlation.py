"""Exact inner products, norms, the Gal gcd-sum function, and the variance
functional A_N^2 of permuted dilated sums.

All quantities are integrals over one period of products of mean-zero
periodic functions evaluated at integer dilations.  For trigonometric
polynomials everything reduces to exact coefficient matching; for the
sawtooth {x} - 1/2 the Landau identity (1/12) gcd/lcm applies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import polygamma

from .errors import InvalidFunction, Unsupported

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# periodic functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrigPolynomial:
    """Finite trigonometric polynomial sum a_j cos(2 pi j x) + b_j sin(2 pi j x).

    Coefficient tuples are 1-based: cos[0] is a_1.  No constant term exists,
    so the mean over a period is zero by construction.
    """

    cos: tuple[float, ...] = ()
    sin: tuple[float, ...] = ()
    _a: np.ndarray = field(default=None, repr=False, compare=False)
    _b: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "cos", tuple(float(c) for c in self.cos))
        object.__setattr__(self, "sin", tuple(float(c) for c in self.sin))
        d = max(len(self.cos), len(self.sin))
        if d < 1:
            raise InvalidFunction("trig polynomial needs degree >= 1")
        a = np.zeros(d)
        b = np.zeros(d)
        a[: len(self.cos)] = self.cos
        b[: len(self.sin)] = self.sin
        if not (np.any(a != 0.0) or np.any(b != 0.0)):
            raise InvalidFunction("all coefficients are zero")
        object.__setattr__(self, "_a", a)
        object.__setattr__(self, "_b", b)

    @property
    def degree(self) -> int:
        return len(self._a)

    def evaluate(self, x) -> np.ndarray:
        """Pointwise values; input is reduced mod 1 before evaluation."""
        t = np.mod(np.asarray(x, dtype=float), 1.0)
        out = np.zeros_like(t)
        for j in range(self.degree):
            aj = self._a[j]
            bj = self._b[j]
            if aj:
                out += aj * np.cos(TWO_PI * (j + 1) * t)
            if bj:
                out += bj * np.sin(TWO_PI * (j + 1) * t)
        return out

    def descriptor(self) -> str:
        parts = []
        if any(c != 0 for c in self._a):
            parts.append("cos:" + ",".join(_fmt(c) for c in self._a))
        if any(c != 0 for c in self._b):
            parts.append("sin:" + ",".join(_fmt(c) for c in self._b))
        return ";".join(parts)


def _fmt(c: float) -> str:
    return repr(int(c)) if c == int(c) else repr(c)


class TruncatedSawtooth(TrigPolynomial):
    """Degree-d truncation of the sawtooth series: b_j = -1/(pi j), j <= d."""

    def __init__(self, d: int):
        if d < 1:
            raise InvalidFunction("truncation degree must be >= 1")
        sin = tuple(-1.0 / (math.pi * j) for j in range(1, d + 1))
        super().__init__(cos=(), sin=sin)
        object.__setattr__(self, "truncation", d)

    def descriptor(self) -> str:
        return f"sawtooth:{self.truncation}"


@dataclass(frozen=True)
class Sawtooth:
    """The centered fractional part {x} - 1/2, with exact Landau arithmetic."""

    def evaluate(self, x) -> np.ndarray:
        return np.mod(np.asarray(x, dtype=float), 1.0) - 0.5

    def descriptor(self) -> str:
        return "sawtooth"


SAWTOOTH = Sawtooth()

# any of the three variants
PeriodicFunction = TrigPolynomial | Sawtooth


# ---------------------------------------------------------------------------
# norms and inner products
# ---------------------------------------------------------------------------

def norm_sq(f: PeriodicFunction) -> float:
    """Squared L2 norm over one period."""
    if isinstance(f, Sawtooth):
        return 1.0 / 12.0
    return 0.5 * float(np.dot(f._a, f._a) + np.dot(f._b, f._b))


def sawtooth_inner_fraction(m: int, n: int) -> Fraction:
    """Landau identity as an exact rational: gcd(m,n) / (12 lcm(m,n))."""
    return Fraction(math.gcd(m, n) ** 2, 12 * m * n)


def inner_product(f: PeriodicFunction, m: int, n: int) -> float:
    """Integral of f(mx) f(nx) over one period, exact per variant."""
    if m < 1 or n < 1:
        raise ValueError("dilations must be >= 1")
    if isinstance(f, Sawtooth):
        return float(sawtooth_inner_fraction(m, n))
    g = math.gcd(m, n)
    mp = m // g
    np_ = n // g
    d = f.degree
    t_max = d // max(mp, np_)
    if t_max < 1:
        return 0.0
    # frequencies j m = j' n match exactly when j = t n', j' = t m'
    a = f._a
    b = f._b
    a1 = a[np_ - 1 : np_ * t_max : np_]
    a2 = a[mp - 1 : mp * t_max : mp]
    b1 = b[np_ - 1 : np_ * t_max : np_]
    b2 = b[mp - 1 : mp * t_max : mp]
    return 0.5 * float(np.dot(a1, a2) + np.dot(b1, b2))


def sawtooth_tail_inner(J: int, m: int, n: int) -> float:
    """Inner product of the sawtooth tail (coefficients with j > J) at m, n."""
    if J < 0:
        raise ValueError("J must be >= 0")
    g = math.gcd(m, n)
    mp = m // g
    np_ = n // g
    t0 = J // min(mp, np_) + 1
    # sum_{t >= t0} 1/t^2 = psi'(t0)
    return float(polygamma(1, t0)) / (2.0 * math.pi**2 * mp * np_)


def sawtooth_tail_variance(J: int, terms) -> float:
    """Variance of the J-tail of the sawtooth over the given distinct terms."""
    terms = list(terms)
    total = 0.0
    for i, mi in enumerate(terms):
        total += sawtooth_tail_inner(J, mi, mi)
        for mj in terms[i + 1 :]:
            total += 2.0 * sawtooth_tail_inner(J, mi, mj)
    return total


# ---------------------------------------------------------------------------
# Gal function
# ---------------------------------------------------------------------------

_PAIR_BLOCK = 4 * 10**7  # matrix entries per chunk in the vectorized paths


def _check_terms(terms) -> list[int]:
    terms = [int(t) for t in terms]
    if not terms:
        raise ValueError("empty term list")
    if any(t < 1 for t in terms):
        raise ValueError("terms must be positive")
    if len(set(terms)) != len(terms):
        raise ValueError("terms must be distinct")
    return terms


def gal_function(terms) -> float:
    """Sum over 1 <= i <= j <= N of gcd(m_i, m_j)/lcm(m_i, m_j), diagonal included."""
    terms = _check_terms(terms)
    n = len(terms)
    if all((t & (t - 1)) == 0 for t in terms):
        ee = np.array([t.bit_length() - 1 for t in terms], dtype=float)
        ordered = _ordered_pair_sum_pow2(ee)
    elif all(t < 2**62 for t in terms):
        ordered = _ordered_pair_sum_int64(np.array(terms, dtype=np.int64))
    else:
        ordered = _ordered_pair_sum_bigint(terms)
    return (ordered + n) / 2.0


def _ordered_pair_sum_pow2(ee: np.ndarray) -> float:
    n = len(ee)
    rows = max(1, _PAIR_BLOCK // n)
    total = 0.0
    for lo in range(0, n, rows):
        d = np.abs(ee[lo : lo + rows, None] - ee[None, :])
        total += float(np.sum(np.exp2(-d)))
    return total


def _ordered_pair_sum_int64(m: np.ndarray) -> float:
    n = len(m)
    rows = max(1, _PAIR_BLOCK // n)
    total = 0.0
    mf = m.astype(float)
    for lo in range(0, n, rows):
        g = np.gcd.outer(m[lo : lo + rows], m).astype(float)
        total += float(np.sum((g / mf[lo : lo + rows, None]) * (g / mf[None, :])))
    return total


def _ordered_pair_sum_bigint(terms: list[int]) -> float:
    vals = [0.0]
    for i, mi in enumerate(terms):
        vals.append(1.0)
        for mj in terms[i + 1 :]:
            g = math.gcd(mi, mj)
            vals.append(2.0 * float(Fraction(g * g, mi * mj)))
    return math.fsum(vals)


# ---------------------------------------------------------------------------
# variance of dilated sums
# ---------------------------------------------------------------------------

class _KahanSum:
    __slots__ = ("total", "_c")

    def __init__(self):
        self.total = 0.0
        self._c = 0.0

    def add(self, x: float):
        y = x - self._c
        t = self.total + y
        self._c = (t - self.total) - y
        self.total = t


class _TrigAccumulator:
    """Running Fourier expansion of sum_k f(m_k x) with exact frequency keys.

    Appending a term adds d coefficients; the variance (1/2) sum of squared
    coefficients is maintained incrementally, so each checkpoint costs O(1).
    `key_fn(j, token)` must map (harmonic j, term token) to a hashable key
    identifying the exact frequency j * m(token).
    """

    def __init__(self, f: TrigPolynomial, key_fn):
        self._coeffs = [
            (j + 1, f._a[j], f._b[j])
            for j in range(f.degree)
            if f._a[j] != 0.0 or f._b[j] != 0.0
        ]
        self._key_fn = key_fn
        self._acc_cos: dict = {}
        self._acc_sin: dict = {}
        self._ss = _KahanSum()  # sum of squared coefficients

    def append(self, token):
        key_fn = self._key_fn
        for j, aj, bj in self._coeffs:
            key = key_fn(j, token)
            if aj != 0.0:
                old = self._acc_cos.get(key, 0.0)
                self._acc_cos[key] = old + aj
                self._ss.add(aj * (2.0 * old + aj))
            if bj != 0.0:
                old = self._acc_sin.get(key, 0.0)
                self._acc_sin[key] = old + bj
                self._ss.add(bj * (2.0 * old + bj))

    @property
    def variance(self) -> float:
        return 0.5 * self._ss.total


def _single_gen_key_fn(q: int, degree: int):
    """Key for frequency j*q^e without materializing q^e: factor q out of j."""
    decomp = {}
    for j in range(1, degree + 1):
        t, u = 0, j
        while u % q == 0:
            u //= q
            t += 1
        decomp[j] = (t, u)
    stride = degree + 1

    def key_fn(j, e):
        t, u = decomp[j]
        return (e + t) * stride + u

    return key_fn


class _SawtoothPairAccumulator:
    """Incremental Landau pairwise sums for sawtooth variance.

    Single-generator mode works on exponents with the exact weight
    q^-|de| and a cutoff where the weight underflows double precision;
    general mode keeps exact integer terms.
    """

    def __init__(self, q: int | None):
        self._q = q
        if q is not None:
            # below 1e-26 a single pair cannot move the total at 1e-9 policy
            self._rcut = max(1, int(math.ceil(26 / math.log10(q))))
            self._weights = [float(q) ** -r for r in range(self._rcut + 1)]
            self._seen: set[int] = set()
        else:
            self._terms: list[int] = []
        self._sum = _KahanSum()

    def append(self, token):
        if self._q is not None:
            e = token
            cross = 0.0
            for r in range(1, self._rcut + 1):
                w = self._weights[r]
                if e - r in self._seen:
                    cross += w
                if e + r in self._seen:
                    cross += w
            self._seen.add(e)
            self._sum.add((1.0 + 2.0 * cross) / 12.0)
        else:
            m = token
            cross = 0.0
            for n in self._terms:
                cross += float(sawtooth_inner_fraction(m, n))
            self._terms.append(m)
            self._sum.add(1.0 / 12.0 + 2.0 * cross)

    @property
    def variance(self) -> float:
        return self._sum.total


def variance(f: PeriodicFunction, terms) -> float:
    """Integral of (sum_k f(m_k x))^2: the full ordered double sum of inner
    products, equal to (1/12)(2 G - N) for the sawtooth."""
    terms = _check_terms(terms)
    if isinstance(f, Sawtooth):
        return (2.0 * gal_function(terms) - len(terms)) / 12.0
    acc = _TrigAccumulator(f, lambda j, m: j * m)
    for m in terms:
        acc.append(m)
    return acc.variance


def kac_variance(f: PeriodicFunction) -> float:
    """Limiting variance per term on the doubling sequence:
    ||f||^2 + 2 sum_r integral f(x) f(2^r x) dx (finitely many terms survive)."""
    if isinstance(f, Sawtooth):
        raise Unsupported(
            "kac_variance needs a finite degree; truncate with TruncatedSawtooth(d)")
    total = norm_sq(f)
    r = 1
    while 2**r <= f.degree:
        total += 2.0 * inner_product(f, 1, 2**r)
        r += 1
    return total


def sawtooth_doubling_variance(q: int, n: int) -> float:
    """Closed-form variance of the sawtooth over n consecutive exponents of q:
    (1/12)(n + 2 sum_{r<n} (n-r) q^-r)."""
    acc = 0.0
    qr = 1.0
    for r in range(1, n):
        qr /= q
        term = (n - r) * qr
        acc += term
        if term < 1e-30 * n:
            break
    return (n + 2.0 * acc) / 12.0


# ---------------------------------------------------------------------------
# variance profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VarianceProfile:
    """A_N^2 at increasing checkpoints, with run descriptors for reports."""

    n_values: tuple[int, ...]
    a2_values: tuple[float, ...]
    function: str
    sequence: str
    permutation: str

    def a2_over_n(self) -> tuple[float, ...]:
        return tuple(a / n for n, a in zip(self.n_values, self.a2_values))

    def as_dict(self) -> dict:
        return {
            "function": self.function,
            "sequence": self.sequence,
            "permutation": self.permutation,
            "series": [[n, a] for n, a in zip(self.n_values, self.a2_values)],
        }


def variance_profile(f, seq, perm, checkpoints) -> VarianceProfile:
    """A^2(N) = variance of the first N permuted terms, at each checkpoint.

    Runs incrementally: appending one term costs O(degree) dictionary
    updates (trig polynomials) or one bounded cross-scan (sawtooth).
    """
    cps = sorted(set(int(c) for c in checkpoints))
    if not cps or cps[0] < 1:
        raise ValueError("checkpoints must be positive integers")
    q = seq.single_generator

    if isinstance(f, Sawtooth) and q is not None and perm.is_identity:
        a2 = tuple(sawtooth_doubling_variance(q, n) for n in cps)
        return _profile(cps, a2, f, seq, perm)

    if isinstance(f, Sawtooth):
        acc = _SawtoothPairAccumulator(q)
    elif q is not None:
        acc = _TrigAccumulator(f, _single_gen_key_fn(q, f.degree))
    else:
        acc = _TrigAccumulator(f, lambda j, m: j * m)

    token_of = (
        seq.exponent_of_index if q is not None else seq.term
    )
    a2 = []
    k = 0
    for cp in cps:
        while k < cp:
            k += 1
            acc.append(token_of(perm.value(k)))
        a2.append(acc.variance)
    return _profile(cps, tuple(a2), f, seq, perm)


def _profile(cps, a2, f, seq, perm) -> VarianceProfile:
    return VarianceProfile(
        n_values=tuple(cps),
        a2_values=a2,
        function=f.descriptor(),
        sequence=seq.describe(),
        permutation=perm.describe(),
    )


# ---------------------------------------------------------------------------
# helpers used by the variance bookkeeping
# ---------------------------------------------------------------------------

def pair_distance_count(values, r: int) -> int:
    """#{i != j: |v_i - v_j| = r}; at most 2N for injective prefixes."""
    if r < 1:
        raise ValueError("r must be >= 1")
    from collections import Counter

    c = Counter(values)
    return 2 * sum(c[v] * c[v + r] for v in c)
