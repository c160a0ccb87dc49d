"""Finite abelian groups in invariant-factor form and subset-sum counting.

Covers the combinatorial core of the project: additive characters and their
partial sums over a point set, the amplitude (the largest nontrivial
character-sum modulus), exact dynamic-programming counts N(t, B, P) of the
t-subsets of P summing to B, permutation cycle-type generating functions,
and the resulting deviation bound

    |N(t, B, P) - C(n, t) / N|  <=  C(M, t)

with M = max{Phi + t - 1, (n + Phi)/2, (n - Phi)/3 + Phi + t - 1}, where
Phi is the amplitude of P.  Counts use exact big integers throughout; only
character sums live in floating point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

DP_BUDGET = 2**31
SIEVE_MAX_T = 10
SIEVE_MAX_N = 14


class TrivialGroupError(Exception):
    """Amplitude is undefined on the one-element group."""


class TrivialCharacterError(Exception):
    """A nontrivial character was required."""


class InvalidCycleTypeError(Exception):
    """Cycle counts do not add up to a permutation of the stated size."""


class InstanceTooLargeError(Exception):
    """Exhaustive enumeration was requested beyond the declared size limits."""


class BudgetExceededError(Exception):
    """The dynamic-programming budget n*t*N <= 2^31 would be exceeded."""


GroupElement = tuple[int, ...]


@dataclass(frozen=True)
class AbelianGroup:
    """Product of cyclic groups Z_d1 x ... x Z_dk with d1 | d2 | ... | dk."""

    factors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(d) for d in self.factors))
        if not self.factors:
            raise ValueError("at least one invariant factor is required")
        if any(d < 1 for d in self.factors):
            raise ValueError(f"invariant factors must be >= 1, got {self.factors}")
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a != 0:
                raise ValueError(f"invariant factors must form a divisibility chain, got {self.factors}")

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def identity(self) -> GroupElement:
        return (0,) * len(self.factors)

    @cached_property
    def _strides(self) -> tuple[int, ...]:
        # mixed-radix strides, last coordinate fastest
        strides = [1] * len(self.factors)
        for i in range(len(self.factors) - 2, -1, -1):
            strides[i] = strides[i + 1] * self.factors[i + 1]
        return tuple(strides)

    def contains(self, a: GroupElement) -> bool:
        return len(a) == len(self.factors) and all(
            isinstance(v, int) and 0 <= v < d for v, d in zip(a, self.factors)
        )

    def check(self, a: GroupElement) -> GroupElement:
        if not self.contains(tuple(a)):
            raise ValueError(f"{a!r} is not an element of {self!r}")
        return tuple(a)

    def add(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.factors))

    def neg(self, a: GroupElement) -> GroupElement:
        return tuple(-x % d for x, d in zip(a, self.factors))

    def index(self, a: GroupElement) -> int:
        return sum(v * s for v, s in zip(a, self._strides))

    def element_at(self, idx: int) -> GroupElement:
        return tuple((idx // s) % d for s, d in zip(self._strides, self.factors))

    def elements(self) -> Iterator[GroupElement]:
        return itertools.product(*(range(d) for d in self.factors))

    def character(self, exponents: Sequence[int]) -> "Character":
        return Character(self, tuple(exponents))

    def characters(self) -> Iterator["Character"]:
        for exps in itertools.product(*(range(d) for d in self.factors)):
            yield Character(self, exps)

    def __repr__(self):
        return "Z_" + " x Z_".join(str(d) for d in self.factors)


@dataclass(frozen=True)
class Character:
    """Additive character a -> exp(2 pi i sum_j v_j a_j / d_j)."""

    group: AbelianGroup
    exponents: tuple[int, ...]

    def __post_init__(self):
        if len(self.exponents) != len(self.group.factors):
            raise ValueError("exponent tuple length mismatch")
        if any(not (0 <= v < d) for v, d in zip(self.exponents, self.group.factors)):
            raise ValueError(f"exponents {self.exponents} out of range for {self.group!r}")

    @property
    def is_trivial(self) -> bool:
        return all(v == 0 for v in self.exponents)

    @property
    def order(self) -> int:
        o = 1
        for v, d in zip(self.exponents, self.group.factors):
            oi = d // math.gcd(d, v) if v else 1
            o = o * oi // math.gcd(o, oi)
        return o

    def power(self, k: int) -> "Character":
        return Character(self.group, tuple(k * v % d for v, d in zip(self.exponents, self.group.factors)))

    def __call__(self, a: GroupElement) -> complex:
        phase = sum(v * x / d for v, x, d in zip(self.exponents, a, self.group.factors))
        return complex(np.exp(2j * np.pi * phase))


def _check_point_set(group: AbelianGroup, points: Sequence[GroupElement]) -> list[GroupElement]:
    pts = [group.check(a) for a in points]
    if len(set(pts)) != len(pts):
        raise ValueError("point set contains duplicates")
    return pts


def char_sum(group: AbelianGroup, chi: Character, points: Sequence[GroupElement]) -> complex:
    """Partial character sum s_chi(P) = sum_{a in P} chi(a)."""
    if chi.group != group:
        raise ValueError("character belongs to a different group")
    pts = _check_point_set(group, points)
    if not pts:
        return 0j
    arr = np.array(pts, dtype=np.float64)
    phases = np.zeros(len(pts))
    for j, d in enumerate(group.factors):
        if chi.exponents[j]:
            phases += chi.exponents[j] * arr[:, j] / d
    return complex(np.exp(2j * np.pi * phases).sum())


def amplitude(group: AbelianGroup, points: Sequence[GroupElement]) -> float:
    """Phi(P): the largest |s_chi(P)| over the N - 1 nontrivial characters.

    Evaluated through a multidimensional DFT of the indicator array of P,
    which enumerates all character sums at once.
    """
    if group.order < 2:
        raise TrivialGroupError("amplitude needs a group of order >= 2")
    pts = _check_point_set(group, points)
    if not pts:
        return 0.0
    indicator = np.zeros(group.factors)
    for a in pts:
        indicator[a] = 1.0
    spectrum = np.abs(np.fft.fftn(indicator))
    spectrum.flat[0] = 0.0  # trivial character excluded by definition
    return float(spectrum.max())


# --- exact subset-sum counting ------------------------------------------------

def subset_sum_table(group: AbelianGroup, points: Sequence[GroupElement], t: int) -> list[list[int]]:
    """DP table of subset-sum counts.

    Returns rows[s][i] = number of s-subsets of P whose group sum is the
    element with index i, for every 0 <= s <= t.  Exact big integers.
    """
    pts = _check_point_set(group, points)
    n = len(pts)
    if not 0 <= t <= n:
        raise ValueError(f"subset size t={t} out of range 0..{n}")
    size = group.order
    if n * t * size > DP_BUDGET:
        raise BudgetExceededError(f"n*t*N = {n * t * size} exceeds the 2^31 budget")

    idx = np.arange(size, dtype=np.int64)
    strides = np.array(group._strides, dtype=np.int64)
    factors = np.array(group.factors, dtype=np.int64)
    digits = (idx[:, None] // strides[None, :]) % factors[None, :]

    rows: list[list[int]] = [[0] * size for _ in range(t + 1)]
    rows[0][0] = 1  # empty subset sums to the identity (index 0)
    for count, a in enumerate(pts, start=1):
        shifted = ((digits + np.array(a, dtype=np.int64)) % factors) @ strides
        perm = shifted.tolist()
        for s in range(min(count, t), 0, -1):
            prev = rows[s - 1]
            cur = rows[s]
            for j, pj in enumerate(perm):
                v = prev[j]
                if v:
                    cur[pj] += v
    return rows


def subset_sum_count(group: AbelianGroup, points: Sequence[GroupElement], t: int, target: GroupElement) -> int:
    """Exact count of t-subsets of P whose group sum equals target."""
    rows = subset_sum_table(group, points, t)
    return rows[t][group.index(group.check(target))]


# --- cycle-type combinatorics ---------------------------------------------

def _partitions(n: int, max_part: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def cycle_types(t: int) -> Iterator[tuple[int, ...]]:
    """All cycle types (c_1, ..., c_t) with sum i*c_i = t, deterministic order."""
    for part in _partitions(t, t):
        c = [0] * t
        for k in part:
            c[k - 1] += 1
        yield tuple(c)


def cycle_type_count(counts: Sequence[int]) -> int:
    """Number of permutations of S_t with c_i cycles of length i (t = len(counts))."""
    t = len(counts)
    if sum((i + 1) * c for i, c in enumerate(counts)) != t:
        raise InvalidCycleTypeError(f"cycle counts {tuple(counts)} do not describe S_{t}")
    denom = 1
    for i, c in enumerate(counts, start=1):
        denom *= i**c * math.factorial(c)
    return math.factorial(t) // denom


def cycle_gen_function(t: int, weights: Sequence):
    """Sum over cycle types of N(c) * prod_i weights[i-1]^c_i.

    Exact when the weights are integers.  With the uniform weight q this
    equals the rising product (q + t - 1)_t.
    """
    if len(weights) < t:
        raise ValueError(f"need a weight for every cycle length 1..{t}")
    total = 0
    for c in cycle_types(t):
        term = cycle_type_count(c)
        for i, ci in enumerate(c):
            if ci:
                term *= weights[i] ** ci
        total += term
    return total


def periodic_weights(q, s, d: int, t: int) -> tuple:
    """Weights q at cycle lengths divisible by d, s elsewhere."""
    return tuple(q if (i % d == 0) else s for i in range(1, t + 1))


# --- generalized binomials --------------------------------------------------

def falling_factorial(x, t: int):
    """(x)_t = x (x-1) ... (x-t+1); exact for int x, float otherwise."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    acc = 1
    for i in range(t):
        acc *= x - i
    return acc


def generalized_binomial(x, t: int):
    """C(x, t) = (x)_t / t! for real x; exact integer when x is an int."""
    ff = falling_factorial(x, t)
    if isinstance(x, int):
        return ff // math.factorial(t) if ff >= 0 else -((-ff) // math.factorial(t))
    return ff / math.factorial(t)


def log_generalized_binomial(x: float, t: int) -> float:
    """log C(x, t) in log space; -inf when a factor vanishes.

    Requires all factors x - i (i < t) to be nonnegative, which holds for
    every M produced by the deviation bound (M >= t - 1).
    """
    if t == 0:
        return 0.0
    acc = 0.0
    for i in range(t):
        f = x - i
        if f < 0:
            raise ValueError(f"negative factor {f} at i={i}; log form undefined")
        if f == 0:
            return float("-inf")
        acc += math.log(f)
    return acc - math.lgamma(t + 1)


# --- the deviation bound -----------------------------------------------------

def li_wan_m(n: int, t: int, phi: float) -> float:
    """M = max{Phi + t - 1, (n + Phi)/2, (n - Phi)/3 + Phi + t - 1}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if t < 1:
        raise ValueError("t must be >= 1")
    if not 0 <= phi <= n:
        raise ValueError(f"amplitude {phi} outside [0, {n}]")
    return max(phi + t - 1, (n + phi) / 2, (n - phi) / 3 + phi + t - 1)


@dataclass(frozen=True)
class LiWanReport:
    count: int
    main_term: float
    deviation: float
    bound: float
    amplitude: float
    m_value: float
    holds: bool


def li_wan_bound_check(group: AbelianGroup, points: Sequence[GroupElement], t: int, target: GroupElement) -> LiWanReport:
    """Check |N(t, B, P) - C(n, t)/N| <= C(M, t) on one instance.

    The inequality is a theorem; ``holds`` coming back False signals an
    implementation bug, not a mathematical possibility.
    """
    pts = _check_point_set(group, points)
    n = len(pts)
    count = subset_sum_count(group, pts, t, target)
    main = Fraction(math.comb(n, t), group.order)
    deviation = abs(Fraction(count) - main)
    phi = amplitude(group, pts)
    if t == 0:
        m_value, bound = 0.0, 1.0  # C(M, 0) = 1 regardless of M
    else:
        m_value = li_wan_m(n, t, min(phi, float(n)))
        bound = math.exp(log_generalized_binomial(m_value, t))
    dev = float(deviation)
    holds = dev <= bound + 1e-9 * max(1.0, bound)
    return LiWanReport(count, float(main), dev, bound, phi, m_value, holds)


# --- sieve identity ----------------------------------------------------------

@dataclass(frozen=True)
class SievePair:
    direct: complex
    sieved: complex


def sieve_identity_eval(group: AbelianGroup, points: Sequence[GroupElement], t: int, chi: Character) -> SievePair:
    """Evaluate both sides of the distinct-coordinate sieving identity.

    direct: sum over t-tuples of distinct points of prod_i chi(x_i)
    sieved: sum over cycle types of sign * N(c) * prod_i s_{chi^i}(P)^{c_i}

    The two agree up to floating-point error (< 1e-6 at the permitted sizes).
    """
    pts = _check_point_set(group, points)
    n = len(pts)
    if t > SIEVE_MAX_T or n > SIEVE_MAX_N:
        raise InstanceTooLargeError(f"direct enumeration limited to t <= {SIEVE_MAX_T}, n <= {SIEVE_MAX_N}")
    if chi.group != group:
        raise ValueError("character belongs to a different group")

    values = [chi(a) for a in pts]
    # the summand is order-independent, so distinct tuples = t! * subsets
    direct = 0j
    for combo in itertools.combinations(values, t):
        prod = 1 + 0j
        for v in combo:
            prod *= v
        direct += prod
    direct *= math.factorial(t)

    power_sums = {i: char_sum(group, chi.power(i), pts) for i in range(1, t + 1)}
    sieved = 0j
    for c in cycle_types(t):
        cycles = sum(c)
        term = complex(cycle_type_count(c))
        for i, ci in enumerate(c, start=1):
            if ci:
                term *= power_sums[i] ** ci
        sieved += (-1) ** (t - cycles) * term
    return SievePair(direct, sieved)


# --- specification strings ----------------------------------------------------

def parse_group_spec(spec: str) -> AbelianGroup:
    """Parse ``ab:d1,d2,...,dk`` (invariant factors)."""
    spec = spec.strip()
    if not spec.startswith("ab:"):
        raise ValueError(f"group spec must start with 'ab:', got {spec!r}")
    try:
        factors = tuple(int(d) for d in spec[3:].split(","))
    except ValueError as exc:
        raise ValueError(f"bad group spec {spec!r}: {exc}") from exc
    return AbelianGroup(factors)


def format_group_spec(group: AbelianGroup) -> str:
    return "ab:" + ",".join(str(d) for d in group.factors)
