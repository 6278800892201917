"""Sample-complexity calculators.

Log-base convention: formulas written with ``log`` use base 2 (VC upper bound,
the cardinality chain, the superstring arithmetic) and formulas written with
``ln`` use the natural log. Every bound is returned as an integer sample count.

``INFINITY`` is returned, never raised, when a compression function never
reaches the required value.
"""

from __future__ import annotations

import math
import sys
from dataclasses import asdict, dataclass, field
from typing import Callable

INFINITY = math.inf
SEARCH_CEILING = 2 ** 63

LOG_BASES = {
    "vcUpper": "log2",
    "vcLower": "ln",
    "finiteClass": "ln",
    "lengthBased": "ln",
    "kcBased": "ln",
}

# Values within float noise of an integer (1e-9 absolute or 8 ulps) are snapped
# to it before rounding, so e.g. (16/3)*6 = 32.000000000000004 counts as 32.
_SNAP = 1e-9
_ULPS = 8 * sys.float_info.epsilon


def _near_integer(x: float, r: int) -> bool:
    # absorbs float noise such as 10.000000000002 without rounding large counts down
    return abs(x - r) <= max(_SNAP, _ULPS * abs(x))


def ceil_count(x: float) -> int:
    r = round(x)
    if _near_integer(x, r):
        return int(r)
    return math.ceil(x)


def strict_count(x: float) -> int:
    """Smallest integer strictly greater than ``x``."""
    r = round(x)
    if _near_integer(x, r):
        return int(r) + 1
    return math.floor(x) + 1


def _check_eps_delta(epsilon, delta):
    # the calculators are plain formulas, so any positive epsilon is accepted
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")


def vc_upper_bound(d: int, epsilon: float, delta: float) -> int:
    if d < 1:
        raise ValueError("VC upper bound needs d >= 1")
    _check_eps_delta(epsilon, delta)
    return ceil_count(4 / epsilon * (d * math.log2(12 / epsilon) + math.log2(2 / delta)))


def vc_lower_bound(d: int, epsilon: float, delta: float) -> int:
    if d < 1:
        raise ValueError("VC lower bound needs d >= 1")
    _check_eps_delta(epsilon, delta)
    return strict_count(max((d - 1) / (32 * epsilon), math.log(1 / delta) / epsilon))


def finite_class_bound(class_size: int, epsilon: float, delta: float) -> int:
    if class_size < 1:
        raise ValueError("class size must be >= 1")
    _check_eps_delta(epsilon, delta)
    return ceil_count(math.log(class_size / delta) / epsilon)


def length_based_bound(s: float, epsilon: float, delta: float,
                       alpha: float = 0.0, beta: float = 1.0) -> int:
    if alpha >= 1:
        raise ValueError("alpha must be < 1")
    _check_eps_delta(epsilon, delta)
    first = 2 / epsilon * math.log(1 / delta)
    second = (2 * math.log(2) * s ** beta / epsilon) ** (1 / (1 - alpha))
    return ceil_count(max(first, second))


def vc_cardinality_check(d: int, class_size: int, n: int) -> bool:
    """The chain ``d <= log2|H_n| <= n d``."""
    log_h = math.log2(class_size)
    tol = 1e-12
    return d <= log_h + tol and log_h <= n * d + tol


# -- compression functions -----------------------------------------------------


@dataclass(frozen=True)
class PolynomialForm:
    """``f(m, n, s, gamma) = m^(1 - alpha) / p(n, s, gamma)``."""

    alpha: float
    p: Callable[[float, float, float], float]

    def __post_init__(self):
        if not 0 <= self.alpha < 1:
            raise ValueError("alpha must lie in [0, 1)")

    def __call__(self, m, n, s, gamma):
        return m ** (1 - self.alpha) / self.p(n, s, gamma)


@dataclass(frozen=True)
class GeneralForm:
    """Any compression function declared nondecreasing in ``m``."""

    f: Callable[[float, float, float, float], float]

    def __call__(self, m, n, s, gamma):
        return self.f(m, n, s, gamma)

    def spot_check(self, n, s, gamma, grid=(1, 2, 4, 16, 256, 4096, 2 ** 20)) -> bool:
        values = [self.f(m, n, s, gamma) for m in grid]
        return all(a <= b for a, b in zip(values, values[1:]))


def constant_p(value: float):
    return lambda n, s, gamma: value


class NonMonotoneError(ValueError):
    pass


def inverse_compression(form, x: float, n, s, gamma, ceiling: int = SEARCH_CEILING):
    """Minimum integer ``m >= 1`` with ``form(m, n, s, gamma) >= x``, else ``INFINITY``.

    Exponential search for a bracket, then binary search inside it.
    """
    if form(1, n, s, gamma) >= x:
        return 1
    lo, hi = 1, 2
    prev = form(1, n, s, gamma)
    while form(hi, n, s, gamma) < x:
        cur = form(hi, n, s, gamma)
        if cur < prev:
            raise NonMonotoneError(f"compression decreased between m={lo} and m={hi}")
        prev = cur
        if hi >= ceiling:
            return INFINITY
        lo, hi = hi, min(2 * hi, ceiling)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if form(mid, n, s, gamma) >= x:
            hi = mid
        else:
            lo = mid
    if form(lo, n, s, gamma) > form(hi, n, s, gamma):
        raise NonMonotoneError("compression not monotone inside the bracket")
    return hi


def kc_bound(form, n, s, epsilon: float, delta: float, deterministic: bool = False):
    """Sample size from a compression function; ``INFINITY`` if it never compresses enough."""
    _check_eps_delta(epsilon, delta)
    conf, gamma = (1 / delta, delta) if deterministic else (2 / delta, delta / 2)
    first = ceil_count(2 / epsilon * math.log(conf))
    target = 2 * math.log(2) / epsilon
    second = inverse_compression(form, target, n, s, gamma)
    if second == INFINITY:
        return INFINITY
    return max(first, second)


# -- reports -------------------------------------------------------------------


@dataclass
class BoundInputs:
    epsilon: float
    delta: float
    n: int = 1
    s: float = 1
    d: int | None = None
    class_size: int | None = None
    alpha: float = 0.0
    beta: float = 1.0
    p: float | None = None

    def __post_init__(self):
        if not (0 < self.epsilon < 1 and 0 < self.delta < 1):
            raise ValueError("epsilon and delta must lie strictly inside (0, 1)")
        if self.alpha >= 1:
            raise ValueError("alpha must be < 1")


@dataclass
class BoundReport:
    vcUpper: int | None = None
    vcLower: int | None = None
    finiteClass: int | None = None
    lengthBased: int | None = None
    kcBased: int | float | None = None
    logBaseNotes: dict = field(default_factory=lambda: dict(LOG_BASES))

    FIELDS = ("vcUpper", "vcLower", "finiteClass", "lengthBased", "kcBased")

    def as_dict(self):
        out = asdict(self)
        if out["kcBased"] == INFINITY:
            out["kcBased"] = "inf"
        return out


def bound_report(inp: BoundInputs, deterministic: bool = True) -> BoundReport:
    """Every bound family whose inputs are available.

    The KC bound uses a total-compression form with description length
    ``p`` (default: ``s``, i.e. no improvement over the length-based view).
    """
    rep = BoundReport()
    if inp.d is not None:
        rep.vcUpper = vc_upper_bound(inp.d, inp.epsilon, inp.delta)
        rep.vcLower = vc_lower_bound(inp.d, inp.epsilon, inp.delta)
    if inp.class_size is not None:
        rep.finiteClass = finite_class_bound(inp.class_size, inp.epsilon, inp.delta)
    rep.lengthBased = length_based_bound(inp.s, inp.epsilon, inp.delta, inp.alpha, inp.beta)
    p = inp.p if inp.p is not None else inp.s ** inp.beta
    form = PolynomialForm(inp.alpha, constant_p(p))
    rep.kcBased = kc_bound(form, inp.n, inp.s, inp.epsilon, inp.delta, deterministic)
    return rep
