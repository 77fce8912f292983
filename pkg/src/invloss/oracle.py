"""Brute-force numeric oracle for the loss layer.

Everything here recomputes loss values from the distribution primitives
alone. Probability masses are streamed through exact term recurrences in
40-digit arithmetic with rigorous geometric tail bounds; densities are
integrated by an adaptive Simpson rule over panels seeded at quantile
landmarks, with series handling for the gamma origin singularity and
explicit corrections for the cut-off tails. No closed-form loss
expression enters the computation, so agreement between this module and
the loss layer is evidence rather than tautology.

The one deliberate exception is numeric_integral_of_loss1, which exists
to check the second-order function against the integral of the first and
therefore integrates the closed-form first-order curve on purpose.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath

from .distributions import (
    Distribution,
    Gamma,
    Geometric,
    Logarithmic,
    NegativeBinomial,
    Poisson,
)
from .errors import ConvergenceError, DomainError, ParameterError
from .loss import LossKind, _validate_r, loss1


@dataclass(frozen=True)
class OracleConfig:
    """Accuracy knobs for the numeric oracle.

    abs_tol and rel_tol set the quadrature target for continuous
    families; tail_mass is the probability allowed beyond integration
    cutoffs; max_terms caps discrete series length before giving up.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    tail_mass: float = 1e-13
    max_terms: int = 10_000_000

    def __post_init__(self) -> None:
        for name in ("abs_tol", "rel_tol", "tail_mass", "max_terms"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be strictly positive")


@dataclass(frozen=True)
class OracleReport:
    """Outcome of one analytic-versus-numeric comparison."""

    analytic: float
    oracle: float
    abs_err: float
    rel_err: float
    passed: bool

    @classmethod
    def compare(cls, analytic: float, oracle: float,
                abs_tol: float, rel_tol: float) -> "OracleReport":
        abs_err = abs(analytic - oracle)
        rel_err = abs_err / max(1e-300, abs(oracle))
        return cls(analytic, oracle, abs_err, rel_err,
                   abs_err <= abs_tol or rel_err <= rel_tol)


# ---------------------------------------------------------------------------
# quantiles and quadrature building blocks


@lru_cache(maxsize=4096)
def quantile(dist: Distribution, prob: float) -> float:
    """Smallest x with cdf(x) >= prob (exact on integers for discrete).

    Brackets by doubling away from the mean, then bisects. Used to place
    integration cutoffs and panel seams, so only moderate accuracy is
    asked of it.
    """
    if not 0.0 < prob < 1.0:
        raise DomainError(f"quantile requires 0 < prob < 1, got {prob!r}")
    if dist.discrete:
        k = int(dist.support_min)
        if dist.cdf(k) >= prob:
            return float(k)
        step = 1
        lo = k
        for _ in range(200):
            hi = lo + step
            if dist.cdf(hi) >= prob:
                break
            lo = hi
            step *= 2
        else:
            raise ConvergenceError(f"quantile bracket failed for {dist!r} at prob={prob!r}")
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if dist.cdf(mid) >= prob:
                hi = mid
            else:
                lo = mid
        return float(hi)

    center = dist.mean
    scale = max(math.sqrt(dist.variance), 1e-12)
    hi = center + scale
    for _ in range(200):
        if dist.cdf(hi) >= prob:
            break
        hi = center + 2.0 * (hi - center)
    else:
        raise ConvergenceError(f"quantile bracket failed for {dist!r} at prob={prob!r}")
    s_min = dist.support_min
    lo = max(s_min, center - scale) if math.isfinite(s_min) else center - scale
    for _ in range(200):
        if dist.cdf(lo) < prob or (math.isfinite(s_min) and lo <= s_min):
            break
        lo = center - 2.0 * (center - lo)
        if math.isfinite(s_min):
            lo = max(lo, s_min)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if dist.cdf(mid) >= prob:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _simpson_rec(fn, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = fn(lm)
    frm = fn(rm)
    left = (m - a) * (fa + 4.0 * flm + fm) / 6.0
    right = (b - m) * (fm + 4.0 * frm + fb) / 6.0
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0, abs(delta) / 15.0
    lv, le = _simpson_rec(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
    rv, re = _simpson_rec(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    return lv + rv, le + re


def adaptive_simpson(fn, a: float, b: float, tol: float,
                     max_depth: int = 60) -> tuple[float, float]:
    """Integrate fn over [a, b]; returns (value, error estimate).

    Classic recursive Simpson with Richardson extrapolation; each split
    halves the error budget, so the final estimate sums to at most tol
    unless the depth cap bites first.
    """
    if not b > a:
        return 0.0, 0.0
    fa, fm, fb = fn(a), fn(0.5 * (a + b)), fn(b)
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0
    return _simpson_rec(fn, a, b, fa, fm, fb, whole, tol, max_depth)


def _coarse_simpson(fn, a, b, n=32):
    h = (b - a) / n
    s = fn(a) + fn(b)
    for i in range(1, n):
        s += fn(a + i * h) * (4.0 if i % 2 else 2.0)
    return s * h / 3.0


_LANDMARKS = (1e-3, 1e-2, 0.05, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999)


def _panel_edges(dist, a, b):
    edges = {a, b}
    for q in _LANDMARKS:
        x = quantile(dist, q)
        if a < x < b:
            edges.add(x)
    return sorted(edges)


# ---------------------------------------------------------------------------
# continuous families: weighted integrals of the density

# weights are quadratics w(x) = w0 + w1 x + w2 x^2, which covers all four
# operations and lets tails and the gamma origin series stay exact in w


def _weight_value(w, x):
    return w[0] + x * (w[1] + x * w[2])


def _upper_tail(dist, b, w, scale):
    # integral of w(x) f(x) beyond b, under a locally fitted exponential
    # decay f(b + t) ~ f(b) exp(-c t); exact for the exponential family,
    # an overestimate for faster-than-exponential tails, and tiny either
    # way because b carries almost no mass
    f0 = dist.density(b)
    if f0 <= 0.0:
        return 0.0
    delta = max(1e-3 * scale, 1e-9 * abs(b), 1e-12)
    f1 = dist.density(b + delta)
    if f1 <= 0.0 or f1 >= f0:
        return 0.0
    c = math.log(f0 / f1) / delta
    wb = _weight_value(w, b)
    dwb = w[1] + 2.0 * w[2] * b
    return f0 * (wb / c + dwb / (c * c) + 2.0 * w[2] / (c * c * c))


def _lower_tail(dist, a, w, scale):
    # mirror image of _upper_tail for supports running to -infinity
    f0 = dist.density(a)
    if f0 <= 0.0:
        return 0.0
    delta = max(1e-3 * scale, 1e-9 * abs(a), 1e-12)
    f1 = dist.density(a - delta)
    if f1 <= 0.0 or f1 >= f0:
        return 0.0
    c = math.log(f0 / f1) / delta
    wa = _weight_value(w, a)
    dwa = w[1] + 2.0 * w[2] * a
    return f0 * (wa / c - dwa / (c * c) + 2.0 * w[2] / (c * c * c))


def _gamma_origin_series(dist: Gamma, s0, t0, w):
    # integral of w(x) x^(alpha-1) beta^alpha exp(-beta x) / Gamma(alpha)
    # over [s0, t0], by expanding the exponential; beta * t0 <= 1/8 keeps
    # the alternating series superconvergent
    a, b = dist.alpha, dist.beta
    front = math.exp(a * math.log(b) - math.lgamma(a))
    total = 0.0
    term = 1.0
    for j in range(64):
        inner = 0.0
        for k, wk in enumerate(w):
            if wk:
                e = a + j + k
                inner += wk * (t0 ** e - s0 ** e) / e
        contrib = term * inner
        total += contrib
        if j >= 2 and abs(contrib) <= 1e-25 * (abs(total) + 1e-300):
            break
        term *= -b / (j + 1)
    return front * total


def _integrate_weighted(dist, x0, x1, w, tol):
    """Integral of w(x) * density(x) over [x0, x1], (value, error)."""
    if not x1 > x0:
        return 0.0, 0.0
    total = 0.0
    err = 0.0
    if isinstance(dist, Gamma) and dist.alpha < 1.0:
        cut = 0.125 / dist.beta
        if x0 < cut:
            t = min(x1, cut)
            total += _gamma_origin_series(dist, max(x0, 0.0), t, w)
            x0 = t
            if not x1 > x0:
                return total, err
    edges = _panel_edges(dist, x0, x1)
    fn = lambda x: _weight_value(w, x) * dist.density(x)
    share = tol / max(1, len(edges) - 1)
    for a, b in zip(edges, edges[1:]):
        v, e = adaptive_simpson(fn, a, b, share)
        total += v
        err += e
    return total, err


def _continuous_pieces(kind, dist, r, cfg):
    """Panels and tail handling for one loss value; returns
    (list of (x0, x1, w), lower tail correction, upper continuation).

    The upper continuation (edge, weight) marks an integral that truly
    runs to infinity; the caller keeps extending it panel by panel, so a
    subexponential tail (the log-normal's) is integrated rather than
    modeled. The lower tail of the normal decays faster than any
    exponential, so a single modeled correction is enough there.
    """
    lo = dist.support_min
    scale = max(math.sqrt(dist.variance), 1e-9)
    pieces = []
    lower = 0.0
    upper = None

    if kind in (LossKind.FIRST_ORDER, LossKind.SECOND_ORDER):
        w = (-r, 1.0, 0.0) if kind is LossKind.FIRST_ORDER else (0.5 * r * r, -r, 0.5)
        s = r if not math.isfinite(lo) else max(lo, r)
        b = max(quantile(dist, 1.0 - cfg.tail_mass), r + 8.0 * scale)
        pieces.append((s, b, w))
        upper = (b, w)
    elif kind is LossKind.COMPLEMENTARY:
        w = (r, -1.0, 0.0)
        if math.isfinite(lo):
            if r <= lo:
                return [], 0.0, None
            pieces.append((lo, r, w))
        else:
            a = min(quantile(dist, cfg.tail_mass), r - 8.0 * scale)
            pieces.append((a, r, w))
            lower = _lower_tail(dist, a, w, scale)
    elif kind is LossKind.LIMITED_EXPECTED_VALUE:
        b = max(quantile(dist, 1.0 - cfg.tail_mass), r + 8.0 * scale)
        if math.isfinite(lo):
            a = lo
        else:
            a = min(quantile(dist, cfg.tail_mass), r - 8.0 * scale)
            lower = _lower_tail(dist, a, (0.0, 1.0, 0.0), scale)
        if r > a:
            pieces.append((a, r, (0.0, 1.0, 0.0)))
        pieces.append((max(a, r), b, (r, 0.0, 0.0)))
        upper = (b, (r, 0.0, 0.0))
    else:
        raise TypeError(f"unsupported loss kind: {kind!r}")
    return pieces, lower, upper


def _continuous_loss(kind, dist, r, cfg):
    pieces, lower, upper = _continuous_pieces(kind, dist, r, cfg)
    if not pieces:
        return lower
    scale = max(math.sqrt(dist.variance), 1e-9)
    rough_abs = abs(lower)
    for x0, x1, w in pieces:
        if isinstance(dist, Gamma) and dist.alpha < 1.0 and x0 < 0.125 / dist.beta:
            # let the sharp pass do the origin; the rough pass skips it
            x0 = min(x1, 0.125 / dist.beta)
        if x1 > x0:
            rough_abs += abs(
                _coarse_simpson(lambda x: _weight_value(w, x) * dist.density(x), x0, x1))
    # tolerance follows the problem's own magnitude so small true values
    # are still resolved to full relative accuracy; the 1e-16 leg keeps
    # the recursion clear of the rounding floor, abs_tol covers zero
    eff_tol = max(0.25 * cfg.rel_tol * rough_abs, 1e-16 * rough_abs)
    if eff_tol <= 0.0:
        eff_tol = cfg.abs_tol
    total = lower
    for x0, x1, w in pieces:
        v, _ = _integrate_weighted(dist, x0, x1, w, eff_tol / len(pieces))
        total += v
    if upper is not None:
        edge, w = upper
        for _ in range(80):
            nxt = edge + max(0.7 * abs(edge), scale)
            v, _ = _integrate_weighted(dist, edge, nxt, w, 0.125 * eff_tol)
            total += v
            edge = nxt
            if abs(v) <= max(0.01 * eff_tol, 1e-18 * abs(total)):
                break
        total += _upper_tail(dist, edge, w, scale)
    return total


# ---------------------------------------------------------------------------
# discrete families: exact-weight series in 40-digit arithmetic


def _pmf_stream(dist):
    """Yield (x, pmf(x)) from the support minimum upward, as mpf values.

    Each family reduces to a first-term value and a one-step ratio, so
    the stream is two or three arbitrary-precision operations per term
    and free of cancellation.
    """
    one = mpmath.mpf(1)
    if isinstance(dist, NegativeBinomial):
        p = mpmath.mpf(dist.p)
        n = mpmath.mpf(dist.n)
        x, f = 0, (one - p) ** n
        while True:
            yield x, f
            f = f * p * (x + n) / (x + 1)
            x += 1
    elif isinstance(dist, Geometric):
        p = mpmath.mpf(dist.p)
        q = one - p
        x, f = 1, p
        while True:
            yield x, f
            f = f * q
            x += 1
    elif isinstance(dist, Logarithmic):
        p = mpmath.mpf(dist.p)
        x, f = 1, -p / mpmath.log(one - p)
        while True:
            yield x, f
            f = f * p * x / (x + 1)
            x += 1
    elif isinstance(dist, Poisson):
        lam = mpmath.mpf(dist.lam)
        x, f = 0, mpmath.exp(-lam)
        while True:
            yield x, f
            f = f * lam / (x + 1)
            x += 1
    else:
        raise TypeError(f"no pmf stream for {type(dist).__name__}")


def _tail_ratio_sup(dist, x):
    """Upper bound q < 1 (eventually) on pmf(y+1)/pmf(y) for all y >= x."""
    if isinstance(dist, NegativeBinomial):
        return max(dist.p * (x + dist.n) / (x + 1), dist.p)
    if isinstance(dist, Geometric):
        return 1.0 - dist.p
    if isinstance(dist, Logarithmic):
        return dist.p
    if isinstance(dist, Poisson):
        return dist.lam / (x + 1)
    raise TypeError(f"no tail ratio for {type(dist).__name__}")


def _discrete_bundle(dist, r, cfg):
    """All four loss values at integer r, by one pass over the pmf.

    The loop stops once the geometric bounds on every remaining tail are
    negligible against the running totals; the bounds are exact sums of
    the dominating series, not heuristics.
    """
    r = int(r)
    with mpmath.workdps(40):
        l1 = l2 = lc = le_low = mass = mpmath.mpf(0)
        terms = 0
        for x, f in _pmf_stream(dist):
            terms += 1
            if terms > cfg.max_terms:
                raise ConvergenceError(
                    f"discrete series exceeded {cfg.max_terms} terms for {dist!r} at r={r}")
            if x <= r:
                lc += (r - x) * f
                le_low += x * f
                continue
            u = x - r
            l1 += u * f
            l2 += (u * (u - 1) // 2) * f
            mass += f
            q = _tail_ratio_sup(dist, x)
            if q >= 1.0:
                continue
            ff = float(f)
            g = q / (1.0 - q)
            rem_mass = ff * g
            if rem_mass >= cfg.tail_mass:
                continue
            b1 = ff * g * (u + 1.0 / (1.0 - q))
            b2 = ff * (0.5 * u * u * g + u * q / (1.0 - q) ** 2 + q / (1.0 - q) ** 3)
            ble = rem_mass * r
            if (b1 <= 1e-25 * (1.0 + abs(float(l1)))
                    and b2 <= 1e-25 * (1.0 + abs(float(l2)))
                    and ble <= 1e-25 * (1.0 + abs(float(le_low)) + r)):
                break
        return {
            LossKind.FIRST_ORDER: float(l1),
            LossKind.SECOND_ORDER: float(l2),
            LossKind.COMPLEMENTARY: float(lc),
            LossKind.LIMITED_EXPECTED_VALUE: float(le_low + r * mass),
        }


def discrete_losses(dist: Distribution, r: float,
                    cfg: OracleConfig = OracleConfig()) -> dict[LossKind, float]:
    """All four numeric loss values of a discrete family in one sweep."""
    if not dist.discrete:
        raise DomainError(f"discrete_losses needs a discrete family, got {dist.family}")
    return _discrete_bundle(dist, _validate_r(dist, r), cfg)


def numeric_loss(kind: LossKind | str, dist: Distribution, r: float,
                 cfg: OracleConfig = OracleConfig()) -> float:
    """Loss value recomputed from the probability primitives alone."""
    if isinstance(kind, str):
        try:
            kind = LossKind(kind)
        except ValueError:
            names = ", ".join(k.value for k in LossKind)
            raise DomainError(
                f"unknown loss kind {kind!r}; expected one of: {names}"
            ) from None
    r = _validate_r(dist, r)
    if dist.discrete:
        return _discrete_bundle(dist, r, cfg)[kind]
    return _continuous_loss(kind, dist, r, cfg)


# ---------------------------------------------------------------------------
# independent cross-checks used by the verification layer


def numeric_derivative(fn, r: float, h: float = 1e-5) -> float:
    """Plain central difference (fn(r+h) - fn(r-h)) / 2h."""
    return (fn(r + h) - fn(r - h)) / (2.0 * h)


def numeric_integral_of_loss1(dist: Distribution, r: float,
                              cfg: OracleConfig = OracleConfig()) -> float:
    """Integral of the closed-form first-order loss from r to infinity.

    This is the one oracle routine built on an analytic loss curve: it
    exists to test the second-order function against the integral of the
    first, so integrating the closed form is the point.
    """
    if dist.discrete:
        raise DomainError("numeric_integral_of_loss1 applies to continuous families only")
    r = float(r)
    scale = max(math.sqrt(dist.variance), 1e-9)
    b = max(quantile(dist, 1.0 - cfg.tail_mass), r + 8.0 * scale)
    fn = lambda x: loss1(dist, x)
    rough = abs(_coarse_simpson(fn, r, b))
    eff_tol = max(0.25 * cfg.rel_tol * rough, 1e-16 * rough)
    if eff_tol <= 0.0:
        eff_tol = cfg.abs_tol
    edges = [e for e in _panel_edges(dist, r, b)]
    total = 0.0
    share = eff_tol / max(1, len(edges) - 1)
    for a, e in zip(edges, edges[1:]):
        v, _ = adaptive_simpson(fn, a, e, share)
        total += v
    # keep extending, as in the loss integrals, until the loss curve's
    # own tail has genuinely run out
    for _ in range(80):
        nxt = b + max(0.7 * abs(b), scale)
        v, _ = adaptive_simpson(fn, b, nxt, 0.125 * eff_tol)
        total += v
        b = nxt
        if abs(v) <= max(0.01 * eff_tol, 1e-18 * abs(total)):
            break
    # exponential model of the remaining sliver of loss beyond b
    f0 = fn(b)
    delta = 1e-2 * scale
    f1 = fn(b + delta)
    if f0 > 0.0 and 0.0 < f1 < f0:
        total += f0 / (math.log(f0 / f1) / delta)
    return total
