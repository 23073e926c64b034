"""Exhaustive counting of nondegenerate solutions of
a_1 n_{k_1} + ... + a_p n_{k_p} = b over sequence prefixes, and exact
p-th moments of partial sums against the Gaussian reference.

A solution is nondegenerate when no proper nonempty subset of the summands
a_i n_{k_i} sums to zero; for b = 0 the full sum is excluded from the test
(otherwise nothing homogeneous could ever count).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .correlation import Sawtooth, TrigPolynomial, variance
from .errors import Infeasible, OddP, Unsupported, ZeroScale

_GUARD_TUPLES = 10**9        # hard ceiling on the K^p search space
_NESTED_LIMIT = 10**7        # plain loops below, meet-in-the-middle above
_QUAD_SAMPLES = 10**8        # equispaced quadrature budget
_SPECTRAL_PAIRS = 4 * 10**7  # frequency-pair budget of the spectral route


@dataclass(frozen=True)
class DioQuery:
    """One counting problem over a fixed sequence prefix."""

    coefficients: tuple[int, ...]
    target: int
    terms: tuple[int, ...]

    def __post_init__(self):
        if not self.coefficients:
            raise ValueError("need at least one coefficient")
        if any(a == 0 for a in self.coefficients):
            raise ValueError("coefficients must be nonzero")
        if not self.terms:
            raise ValueError("empty sequence prefix")

    @property
    def p(self) -> int:
        return len(self.coefficients)

    @property
    def prefix_length(self) -> int:
        return len(self.terms)

    @classmethod
    def from_sequence(cls, seq, prefix_length: int, coefficients, target: int):
        terms = tuple(seq.term(k) for k in range(1, prefix_length + 1))
        return cls(tuple(int(a) for a in coefficients), int(target), terms)


@dataclass(frozen=True)
class CountResult:
    count: int
    solutions: tuple[tuple[int, ...], ...] | None = None


def _nondegenerate(values: list[int]) -> bool:
    # values = a_i * n_{k_i}; proper nonempty subsets only, so the full
    # mask (which sums to b) is never tested
    p = len(values)
    full = (1 << p) - 1
    for mask in range(1, full):
        s = 0
        m = mask
        i = 0
        while m:
            if m & 1:
                s += values[i]
            m >>= 1
            i += 1
        if s == 0:
            return False
    return True


def count_nondegenerate(query: DioQuery, force: bool = False,
                        collect: bool = False) -> CountResult:
    """Count (optionally list) nondegenerate index tuples solving the equation.

    Exhaustive and exact: plain nested loops while K^p is small, a partial-sum
    hash join (meet in the middle) above that, with the K^p <= 1e9 guard
    unless forced.
    """
    K = query.prefix_length
    p = query.p
    space = K**p
    if space > _GUARD_TUPLES and not force:
        raise Infeasible(
            f"K^p = {K}^{p} = {space} exceeds {_GUARD_TUPLES}; pass force=True")
    if p > 16:
        raise Infeasible("degeneracy masks limited to p <= 16")
    if space <= _NESTED_LIMIT:
        return _count_nested(query, collect)
    return _count_mitm(query, collect)


def _count_nested(query: DioQuery, collect: bool) -> CountResult:
    coeffs = query.coefficients
    terms = query.terms
    b = query.target
    prods = [[a * t for t in terms] for a in coeffs]
    count = 0
    found = [] if collect else None
    for tup in product(range(query.prefix_length), repeat=query.p):
        vals = [prods[i][k] for i, k in enumerate(tup)]
        if sum(vals) != b:
            continue
        if _nondegenerate(vals):
            count += 1
            if collect:
                found.append(tuple(k + 1 for k in tup))
    return CountResult(count, tuple(found) if collect else None)


def _count_mitm(query: DioQuery, collect: bool) -> CountResult:
    coeffs = query.coefficients
    terms = query.terms
    b = query.target
    p = query.p
    K = query.prefix_length
    left_n = p // 2
    prods = [[a * t for t in terms] for a in coeffs]

    left: dict[int, list[tuple[int, ...]]] = {}
    for tup in product(range(K), repeat=left_n):
        s = sum(prods[i][k] for i, k in enumerate(tup))
        left.setdefault(s, []).append(tup)

    count = 0
    found = [] if collect else None
    for tup in product(range(K), repeat=p - left_n):
        s = sum(prods[left_n + i][k] for i, k in enumerate(tup))
        for lt in left.get(b - s, ()):
            full = lt + tup
            vals = [prods[i][k] for i, k in enumerate(full)]
            if _nondegenerate(vals):
                count += 1
                if collect:
                    found.append(tuple(k + 1 for k in full))
    if collect:
        found.sort()
    return CountResult(count, tuple(found) if collect else None)


# ---------------------------------------------------------------------------
# exact moments
# ---------------------------------------------------------------------------

def gaussian_moment(p: int) -> float:
    """Gaussian even-moment factor p! / ((p/2)! 2^(p/2)), exact."""
    if p < 2 or p % 2 != 0:
        raise OddP(p)
    return float(math.factorial(p) // (math.factorial(p // 2) * 2 ** (p // 2)))


@dataclass(frozen=True)
class MomentReport:
    """Exact p-th moment of S = sum f(n_k x) with its Gaussian reference."""

    p: int
    moment: float
    sigma: float
    gaussian_reference: float
    ratio: float
    method: str

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "moment": self.moment,
            "sigma": self.sigma,
            "gaussian_reference": self.gaussian_reference,
            "ratio": self.ratio,
            "method": self.method,
        }


def exact_moment(f, terms, p: int, method: str = "auto") -> MomentReport:
    """E S^p computed exactly, by equispaced quadrature (a degree-pD trig
    polynomial is integrated exactly by averaging over more than pD points)
    or, when the degree makes sampling infeasible, by exact convolution of
    the frequency expansion (p <= 4)."""
    if isinstance(f, Sawtooth):
        raise Unsupported("exact moments need a finite degree; truncate the sawtooth")
    if not isinstance(f, TrigPolynomial):
        raise Unsupported(f"unsupported function {f!r}")
    if p < 1:
        raise ValueError("p must be >= 1")
    terms = [int(t) for t in terms]

    var = variance(f, terms)
    sigma = math.sqrt(max(var, 0.0))
    if sigma == 0.0:
        raise ZeroScale("partial sum has zero variance")

    n_samples = p * f.degree * max(terms) + 1
    quad_ok = n_samples <= _QUAD_SAMPLES
    base_size = 2 * len(terms) * f.degree
    spectral_ok = p <= 4 and base_size * base_size <= _SPECTRAL_PAIRS

    if method == "auto":
        if quad_ok and n_samples * len(terms) <= 5 * 10**7:
            method = "quadrature"
        elif spectral_ok:
            method = "spectral"
        elif quad_ok:
            method = "quadrature"
        else:
            raise Infeasible(
                f"needs {n_samples} sample points and the spectral route "
                f"supports p <= 4 with {_SPECTRAL_PAIRS} frequency pairs")
    if method == "quadrature":
        if not quad_ok:
            raise Infeasible(f"{n_samples} sample points exceed {_QUAD_SAMPLES}")
        moment = _moment_quadrature(f, terms, p, n_samples)
    elif method == "spectral":
        if not (p <= 4 and base_size * base_size <= _SPECTRAL_PAIRS):
            raise Infeasible("spectral route supports p <= 4 and bounded degree")
        moment = _moment_spectral(f, terms, p)
    else:
        raise ValueError(f"unknown method {method!r}")

    reference = gaussian_moment(p) * sigma**p if p % 2 == 0 else 0.0
    return MomentReport(
        p=p,
        moment=moment,
        sigma=sigma,
        gaussian_reference=reference,
        ratio=moment / sigma**p,
        method=method,
    )


def _moment_quadrature(f, terms, p: int, n_samples: int) -> float:
    chunk = 2 * 10**6
    total = 0.0
    for lo in range(0, n_samples, chunk):
        idx = np.arange(lo, min(lo + chunk, n_samples), dtype=np.int64)
        s = np.zeros(len(idx))
        for m in terms:
            # exact grid points (m * i mod M) / M keep every frequency intact
            pts = (m % n_samples) * idx % n_samples
            s += f.evaluate(pts / n_samples)
        total += float(np.sum(s**p))
    return total / n_samples


def _signed_frequency_dict(f, terms) -> dict[int, complex]:
    base: dict[int, complex] = {}
    for m in terms:
        for j in range(1, f.degree + 1):
            aj = f._a[j - 1]
            bj = f._b[j - 1]
            if aj == 0.0 and bj == 0.0:
                continue
            c = complex(aj / 2.0, -bj / 2.0)
            nu = j * m
            base[nu] = base.get(nu, 0j) + c
            base[-nu] = base.get(-nu, 0j) + c.conjugate()
    return base


def _moment_spectral(f, terms, p: int) -> float:
    base = _signed_frequency_dict(f, terms)
    if p == 1:
        return float((base.get(0, 0j)).real)  # always 0: mean-zero
    items = list(base.items())
    if p == 2:
        total = sum(c * base.get(-nu, 0j) for nu, c in items)
        return float(total.real)
    # p in {3, 4}: convolve once, then correlate
    sq: dict[int, complex] = {}
    for nu1, c1 in items:
        for nu2, c2 in items:
            key = nu1 + nu2
            prev = sq.get(key)
            sq[key] = c1 * c2 if prev is None else prev + c1 * c2
    if p == 3:
        total = sum(c * sq.get(-nu, 0j) for nu, c in items)
    else:
        total = sum(c * sq.get(-nu, 0j) for nu, c in sq.items())
    return float(total.real)
