"""Gray-zone experiments: qualified-subset proportions and theoretical bounds.

For elliptic schemes the proportion of qualified size-t complements is
computed *exactly* by the subset-sum dynamic program over the point group
(t = m maps to counting complements summing to the identity, t = m - 1 to
the complement of those summing to the inverse of P0).  For higher genus
there is no group table, so proportions are estimated by seeded Monte Carlo
against a selectable qualification oracle, with Wilson 95% intervals.

Bound evaluation mirrors the two asymptotic statements: the genus-1 bound
1/N + C(M, t)/C(n, t), and the genus >= 2 expression combining the Weil
window for the Jacobian order, the effective-divisor-class cardinality
bound, and the falling-factorial ratio, all evaluated in log space.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .curves import (
    Curve,
    EllipticCurve,
    HyperellipticCurve,
    PrimeField,
    affine_points,
    enumerate_points,
    format_curve_spec,
    group_structure,
    hyperelliptic_curve,
    parse_curve_spec,
)
from .groups import (
    AbelianGroup,
    Character,
    TrivialCharacterError,
    amplitude,
    char_sum,
    li_wan_m,
    log_generalized_binomial,
    subset_sum_table,
)
from .scheme import SchemeInstance, WrongGenusError, _decide, enumerate_access, scheme_build

PRNG_NAME = "pcg64"
MC_CHUNK = 1024
WILSON_Z = 1.96

CSV_HEADER = [
    "q", "curve", "g", "n", "m", "t", "offset", "mode", "oracle",
    "samples", "qualified", "p_hat", "ci_lo", "ci_hi", "bound",
]

MODES = ("exact", "exhaustive", "montecarlo")


class UnsupportedOffsetError(Exception):
    """Exact elliptic proportions exist only for t in {m-1, m}."""


class RegimeMismatchError(Exception):
    """The genus >= 2 bound applies only in the regime 0 <= m - t < g."""


@dataclass(frozen=True)
class ProportionEstimate:
    """Exact or sampled proportion of qualified size-t complements."""

    qualified: int
    denominator: int
    p_hat: float
    ci_lo: float
    ci_hi: float
    exact: bool


@dataclass(frozen=True)
class BoundReport:
    """Evaluated theoretical bound; genus >= 2 reports carry extra context."""

    phi: float
    m_value: float
    main_term: float
    error_term: float
    total: float
    group_order: Optional[int] = None
    h_window: Optional[tuple[float, float]] = None
    w_bound: Optional[float] = None
    star_product: Optional[float] = None


@dataclass(frozen=True)
class HasseReport:
    point_count: int
    genus: int
    field_size: int
    count_ok: bool
    jacobian_ok: Optional[bool]

    @property
    def ok(self) -> bool:
        return self.count_ok and self.jacobian_ok is not False


def wilson_interval(successes: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    """Wilson score interval; stays valid at proportions near 0 and 1."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    phat = successes / trials
    z2 = z * z
    denom = 1 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials)) / denom
    # clamp so rounding never pushes the interval off [0, 1] or past p-hat
    lo = min(max(0.0, center - half), phat)
    hi = max(min(1.0, center + half), phat)
    return (lo, hi)


# --- exact proportions (genus 1) -------------------------------------------

def _player_images(scheme: SchemeInstance):
    table = group_structure(scheme.curve)
    group = AbelianGroup(table.invariant_factors)
    images = [table.log(pt) for pt in scheme.players]
    return table, group, images


def _exact_estimates(scheme: SchemeInstance, ts: Sequence[int]) -> dict[int, ProportionEstimate]:
    if not isinstance(scheme.curve, EllipticCurve):
        raise WrongGenusError("exact proportions require an elliptic scheme")
    m = scheme.m
    for t in ts:
        if t not in (m - 1, m):
            raise UnsupportedOffsetError(f"exact proportion defined for t in {{m-1, m}}, got t={t}, m={m}")
    table, group, images = _player_images(scheme)
    rows = subset_sum_table(group, images, max(ts))
    out = {}
    for t in sorted(set(ts)):
        total = math.comb(scheme.n, t)
        if t == m:
            qualified = rows[t][group.index(group.identity)]
        else:
            # t = m - 1: unqualified complements are exactly those summing to -P0
            bad = rows[t][group.index(group.neg(table.log(scheme.p0)))]
            qualified = total - bad
        p_hat = float(Fraction(qualified, total))
        out[t] = ProportionEstimate(qualified, total, p_hat, p_hat, p_hat, True)
    return out


def exact_proportion_elliptic(scheme: SchemeInstance, t: int) -> ProportionEstimate:
    """Exact qualified proportion at t in {m-1, m} via the subset-sum count."""
    return _exact_estimates(scheme, [t])[t]


# --- Monte Carlo -------------------------------------------------------------

def _mc_chunk(scheme: SchemeInstance, t: int, seed_seq: tuple[int, ...], count: int, oracle: str) -> int:
    rng = np.random.default_rng(seed_seq)
    n = scheme.n
    base = np.arange(n, dtype=np.int64)
    lows = np.arange(t, dtype=np.int64)
    hits = 0
    for _ in range(count):
        arr = base.copy()
        if t:
            js = rng.integers(lows, n)  # partial Fisher-Yates
            for i in range(t):
                j = int(js[i])
                arr[i], arr[j] = arr[j], arr[i]
        if _decide(scheme, arr[:t], oracle):
            hits += 1
    return hits


def mc_proportion(
    scheme: SchemeInstance,
    t: int,
    samples: int,
    seed,
    oracle: str = "kernel",
    workers: int = 1,
) -> ProportionEstimate:
    """Sampled qualified proportion over uniform size-t complements.

    The sample budget is split into fixed-size chunks seeded by
    (seed, chunk index), so results do not depend on the worker count.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if not 0 <= t <= scheme.n:
        raise ValueError(f"t={t} out of range 0..{scheme.n}")
    base = (seed,) if isinstance(seed, int) else tuple(int(s) for s in seed)
    sizes = [MC_CHUNK] * (samples // MC_CHUNK)
    if samples % MC_CHUNK:
        sizes.append(samples % MC_CHUNK)
    tasks = [(scheme, t, base + (ci,), sz, oracle) for ci, sz in enumerate(sizes)]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(_mc_chunk, *zip(*tasks)))
    else:
        hits = sum(_mc_chunk(*task) for task in tasks)
    lo, hi = wilson_interval(hits, samples)
    return ProportionEstimate(hits, samples, hits / samples, lo, hi, False)


# --- theoretical bounds -------------------------------------------------------

def bound_theorem3(n: int, t: int, group_order: int, phi: float) -> BoundReport:
    """1/N + C(M, t)/C(n, t), the genus-1 bound on the t = m proportion."""
    if not 0 <= phi <= n:
        raise ValueError(f"amplitude {phi} outside [0, {n}]")
    main = 1.0 / group_order
    if t == 0:
        return BoundReport(phi, 0.0, main, 1.0, main + 1.0, group_order=group_order)
    m_value = li_wan_m(n, t, phi)
    log_err = log_generalized_binomial(m_value, t) - log_generalized_binomial(float(n), t)
    err = math.exp(log_err)
    return BoundReport(phi, m_value, main, err, main + err, group_order=group_order)


def _star_terms(q: int, g: int, n: int, t: int, phi: float, d: int):
    """Shared evaluation of the genus >= 2 bound at divisor degree d."""
    sq = math.sqrt(q)
    factor = 2 * g * sq / (sq - 1) - q / (q - 1)
    scale = q ** (-(g - d))
    lead = scale * factor
    m_value = li_wan_m(n, t, min(phi, float(n))) if t else 0.0
    log_star = 0.0
    star = 1.0
    for i in range(t):
        num = m_value - i
        if num <= 0:
            star = 0.0
            break
        log_star += math.log(num) - math.log(n - i)
    else:
        star = math.exp(log_star)
    tail = (sq + 1) ** (2 * g) * scale * factor * star
    h_window = ((sq - 1) ** (2 * g), (sq + 1) ** (2 * g))
    w_bound = h_window[1] * scale * factor
    return m_value, lead, tail, star, h_window, w_bound


def bound_theorem4(q: int, genus: int, n: int, t: int, m: int, c: int) -> BoundReport:
    """Genus >= 2 bound on the qualified proportion in the regime 0 <= m - t < g.

    The amplitude is estimated by the Weil value (2g - 2) sqrt(q) + c, where
    c is the number of rational points left out of the player set.
    """
    d = m - t
    if not 0 <= d < genus:
        raise RegimeMismatchError(f"need 0 <= m - t < g, got m-t={d}, g={genus}")
    phi = (2 * genus - 2) * math.sqrt(q) + c
    m_value, lead, tail, star, h_window, w_bound = _star_terms(q, genus, n, t, phi, d)
    return BoundReport(
        phi, m_value, lead, tail, lead + tail,
        h_window=h_window, w_bound=w_bound, star_product=star,
    )


def bound_regime2(q: int, genus: int, n: int, t: int, m: int, c: int) -> BoundReport:
    """Companion bound on the *unqualified* proportion when g <= m - t < 2g.

    Same expression evaluated at the residual degree 2g - 1 - (m - t).
    """
    if not genus <= m - t < 2 * genus:
        raise RegimeMismatchError(f"need g <= m - t < 2g, got m-t={m - t}, g={genus}")
    s = 2 * genus - 1 - (m - t)
    phi = (2 * genus - 2) * math.sqrt(q) + c
    m_value, lead, tail, star, h_window, w_bound = _star_terms(q, genus, n, t, phi, s)
    return BoundReport(
        phi, m_value, lead, tail, lead + tail,
        h_window=h_window, w_bound=w_bound, star_product=star,
    )


# --- geometric sanity checks ---------------------------------------------------

def hasse_checks(curve: Curve, table=None) -> HasseReport:
    """Verify the rational-point window, plus the genus-1 Jacobian window.

    A group table, when supplied, must agree with the enumerated count.
    """
    q = curve.field.p
    g = curve.genus
    count = len(enumerate_points(curve))
    # |count - (q + 1)| <= 2 g sqrt(q), checked exactly on integers
    diff = count - (q + 1)
    count_ok = diff * diff <= 4 * g * g * q
    if table is not None and table.order != count:
        count_ok = False
    jacobian_ok = None
    if g == 1:
        # (sqrt(q) - 1)^2 <= h <= (sqrt(q) + 1)^2 with h = point count
        lo_ok = (q + 1 - count) <= 0 or (q + 1 - count) ** 2 <= 4 * q
        hi_ok = (count - q - 1) <= 0 or (count - q - 1) ** 2 <= 4 * q
        jacobian_ok = lo_ok and hi_ok
    return HasseReport(count, g, q, count_ok, jacobian_ok)


def curve_char_sum(curve: EllipticCurve, table, chi: Character, points) -> complex:
    """Character sum over curve points through their group coordinates."""
    if chi.is_trivial:
        raise TrivialCharacterError("the trivial character is excluded")
    group = AbelianGroup(table.invariant_factors)
    if chi.group != group:
        raise ValueError("character does not match the curve's point group")
    return char_sum(group, chi, [table.log(pt) for pt in points])


# --- deterministic experiment setup ---------------------------------------------

def find_elliptic_curve(q: int) -> EllipticCurve:
    """First b >= 1 making y^2 = x^3 + x + b nonsingular over F_q."""
    fld = PrimeField(q)
    for b in range(1, q):
        if (4 + 27 * b * b) % q != 0:
            return EllipticCurve(fld, fld.element(1), fld.element(b))
    raise RuntimeError(f"no nonsingular curve of the search form over F_{q}")


def find_hyperelliptic_curve(q: int, genus: int = 2) -> HyperellipticCurve:
    """First a >= 1 making y^2 = x^(2g+1) + x + a squarefree over F_q."""
    deg = 2 * genus + 1
    for a in range(1, q):
        coeffs = [a, 1] + [0] * (deg - 2) + [1]
        try:
            return hyperelliptic_curve(q, coeffs)
        except Exception:
            continue
    raise RuntimeError(f"no squarefree curve of the search form over F_{q}")


def _round_half_down(x: float) -> int:
    return math.ceil(x - 0.5)


def standard_scheme(curve: Curve, delta: float) -> SchemeInstance:
    """P0 = lexicographically smallest affine point, players = the rest,
    m = round(delta * n) with ties rounded down."""
    pts = affine_points(curve)
    if len(pts) < 4:
        raise ValueError("curve has too few affine points for a scheme")
    p0, players = pts[0], pts[1:]
    m = _round_half_down(delta * len(players))
    return scheme_build(curve, p0, players, m)


@dataclass(frozen=True)
class ExperimentConfig:
    """Reproducible sweep description; all randomness flows from ``seed``."""

    seed: int
    q_values: tuple[int, ...] = ()
    curves: tuple[str, ...] = ()
    genus: int = 1
    delta: float = 0.5
    offsets: tuple[int, ...] = (0, 1)
    mode: str = "exact"
    oracle: str = "kernel"
    samples: int = 20000
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "q_values", tuple(int(q) for q in self.q_values))
        object.__setattr__(self, "curves", tuple(self.curves))
        object.__setattr__(self, "offsets", tuple(int(o) for o in self.offsets))
        if not 0 < self.delta < 2 / 3:
            raise ValueError(f"delta must lie strictly in (0, 2/3), got {self.delta}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.oracle not in ("kernel", "dual", "clx"):
            raise ValueError(f"unknown oracle {self.oracle!r}")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.genus < 1:
            raise ValueError("genus must be >= 1")
        for off in self.offsets:
            if not 0 <= off < 2 * self.genus:
                raise ValueError(f"offset {off} outside the gray zone [0, {2 * self.genus})")


def _config_curves(config: ExperimentConfig) -> list[Curve]:
    if config.curves:
        return [parse_curve_spec(s) for s in config.curves]
    if config.genus == 1:
        return [find_elliptic_curve(q) for q in config.q_values]
    return [find_hyperelliptic_curve(q, config.genus) for q in config.q_values]


def sweep_rows(config: ExperimentConfig) -> list[dict]:
    """One output row per (curve, offset); deterministic for a fixed config."""
    rows = []
    for curve in _config_curves(config):
        q = curve.field.p
        g = curve.genus
        for off in config.offsets:
            if off >= 2 * g:
                raise ValueError(f"offset {off} outside the gray zone for genus {g}")
        scheme = standard_scheme(curve, config.delta)
        n, m = scheme.n, scheme.m
        c = len(enumerate_points(curve)) - n

        table = group = images = None
        if g == 1:
            table, group, images = _player_images(scheme)
            phi = amplitude(group, images)
            n_group = table.order

        estimates: dict[int, ProportionEstimate] = {}
        ts = [m - off for off in config.offsets]
        if config.mode == "exact":
            estimates = _exact_estimates(scheme, ts)
        else:
            for t in ts:
                if config.mode == "exhaustive":
                    ac = enumerate_access(scheme, t, config.oracle)
                    p_hat = float(Fraction(ac.qualified, ac.total))
                    estimates[t] = ProportionEstimate(ac.qualified, ac.total, p_hat, p_hat, p_hat, True)
                else:
                    estimates[t] = mc_proportion(
                        scheme, t, config.samples, (config.seed, q, t),
                        config.oracle, config.workers,
                    )

        for off in config.offsets:
            t = m - off
            est = estimates[t]
            if g == 1:
                bound = bound_theorem3(n, t, n_group, phi).total
            elif off < g:
                bound = bound_theorem4(q, g, n, t, m, c).total
            else:
                bound = bound_regime2(q, g, n, t, m, c).total
            rows.append({
                "q": q,
                "curve": format_curve_spec(curve),
                "g": g,
                "n": n,
                "m": m,
                "t": t,
                "offset": off,
                "mode": config.mode,
                "oracle": config.oracle,
                "samples": est.denominator,
                "qualified": est.qualified,
                "p_hat": est.p_hat,
                "ci_lo": est.ci_lo,
                "ci_hi": est.ci_hi,
                "bound": bound,
            })
    return rows


def sweep_csv(config: ExperimentConfig) -> str:
    """Render sweep rows as CSV text; byte-identical for identical configs."""
    buf = io.StringIO()
    buf.write(f"# seed={config.seed} prng={PRNG_NAME} version={__version__}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in sweep_rows(config):
        writer.writerow([_format_cell(row[k]) for k in CSV_HEADER])
    return buf.getvalue()


def _format_cell(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return repr(v)
    return str(v)
