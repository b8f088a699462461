"""Weight sequences: families, algebra, condition predicates, and comparisons.

A weight sequence is a positive sequence M_0, M_1, ... described through its
quotients mu_p = M_p / M_{p-1} (with mu_0 = 1).  All arithmetic runs on
log(M_p) so that fast families (e.g. q-geometric ones reaching 1e4800 by
p = 100) stay representable.  Families are lazily extendable: values are
generated in chunks on demand and cached; concurrent readers always observe a
consistent prefix because the cache is swapped atomically.

Asymptotic facts (summability, liminf conditions, comparisons) are decided
from a `TailModel` when one is attached; finite data alone never certifies a
Satisfied verdict for a sum condition.  Explicit finite lists therefore yield
only Violated (witnessed divergence trend) or Inconclusive for those checks.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np
from scipy.special import zeta as hurwitz_zeta

from .verdict import (
    ConditionVerdict,
    EvaluationRangeError,
    InvalidArgument,
    InvalidSpec,
    Verdict,
    stabilized,
)

RelationVerdict = ConditionVerdict

DEFAULT_P_MAX = 10 ** 5
_LC_TOL = 1e-12


# ---------------------------------------------------------------------------
# tail models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TailModel:
    """Analytic description of quotient growth valid for p >= `start`.

    kind "power":    c_lo * p**e_lo <= mu_p <= c_hi * p**e_hi; `exact` means
                     mu_p == c_hi * p**e_hi (and both bounds coincide).
    kind "loglinear": log mu_p == a*p + b + g*log p exactly (supra-polynomial).
    """

    kind: str
    start: int = 1
    exact: bool = False
    e_lo: float = 0.0
    e_hi: float = 0.0
    c_lo: float = 1.0
    c_hi: float = 1.0
    a: float = 0.0
    b: float = 0.0
    g: float = 0.0

    @staticmethod
    def power(exponent: float, coeff: float = 1.0, *, exact: bool = True,
              lower: tuple[float, float] | None = None, start: int = 1) -> "TailModel":
        if lower is None:
            return TailModel("power", start=start, exact=exact, e_lo=exponent,
                             e_hi=exponent, c_lo=coeff, c_hi=coeff)
        e_lo, c_lo = lower
        return TailModel("power", start=start, exact=False, e_lo=e_lo, e_hi=exponent,
                         c_lo=c_lo, c_hi=coeff)

    @staticmethod
    def log_linear(a: float, b: float = 0.0, g: float = 0.0, *, start: int = 1) -> "TailModel":
        if a <= 0:
            raise InvalidArgument("log-linear tail model needs a > 0")
        return TailModel("loglinear", start=start, exact=True, a=a, b=b, g=g)

    # -- algebra -----------------------------------------------------------

    def powered(self, r: float) -> "TailModel":
        if self.kind == "power":
            return replace(self, e_lo=self.e_lo * r, e_hi=self.e_hi * r,
                           c_lo=self.c_lo ** r, c_hi=self.c_hi ** r)
        return replace(self, a=self.a * r, b=self.b * r, g=self.g * r)

    def shifted(self, eps: float) -> "TailModel":
        """Quotients multiplied by p**eps."""
        if self.kind == "power":
            return replace(self, e_lo=self.e_lo + eps, e_hi=self.e_hi + eps)
        return replace(self, g=self.g + eps)

    # -- closed forms ------------------------------------------------------

    @property
    def superpolynomial(self) -> bool:
        return self.kind == "loglinear"

    def log_quotient(self, p: np.ndarray) -> np.ndarray:
        """Exact log mu_p; only valid when `exact` and p >= start."""
        if not self.exact:
            raise EvaluationRangeError("log_quotient on a non-exact tail model")
        p = np.asarray(p, dtype=float)
        if self.kind == "power":
            return self.e_hi * np.log(p) + math.log(self.c_hi)
        return self.a * p + self.b + self.g * np.log(p)

    def log_value(self, p: int) -> float:
        """Exact log M_p = sum_{k<=p} log mu_k; needs exact model with start == 1."""
        if not (self.exact and self.start == 1):
            raise EvaluationRangeError("no closed form for this tail model")
        if self.kind == "power":
            return self.e_hi * math.lgamma(p + 1) + p * math.log(self.c_hi)
        return self.a * p * (p + 1) / 2.0 + self.b * p + self.g * math.lgamma(p + 1)

    def count_quotients_below(self, log_t: float) -> int:
        """Largest p with log mu_p <= log_t (0 if none); exact models only."""
        if not self.exact:
            raise EvaluationRangeError("no inversion for a non-exact tail model")
        if self.kind == "power":
            if self.e_hi <= 0:
                raise EvaluationRangeError("cannot invert non-increasing quotients")
            p = math.floor(math.exp((log_t - math.log(self.c_hi)) / self.e_hi))
        else:
            # solve a*p + b + g*log p = log_t by a few Newton steps on p >= 1
            p_f = max(1.0, (log_t - self.b) / self.a)
            for _ in range(40):
                val = self.a * p_f + self.b + self.g * math.log(p_f)
                dp = (log_t - val) / (self.a + self.g / p_f)
                p_f += dp
                if abs(dp) < 0.25:
                    break
            p = math.floor(p_f + 1e-9)
            while p >= 1 and self.a * p + self.b + self.g * math.log(p) > log_t:
                p -= 1
            while self.a * (p + 1) + self.b + self.g * math.log(p + 1) <= log_t:
                p += 1
        return max(0, p)

    # -- tail sums ---------------------------------------------------------

    def tail_power_sum(self, inv_r: float, start_p: int) -> tuple[float, float]:
        """Bracket [lo, hi] for sum_{k >= start_p} mu_k**(-inv_r).

        Returns (inf, inf) when divergence is certain, and a straddling
        bracket (finite, inf) when the model cannot decide.
        """
        s = max(start_p, self.start)
        if s != start_p:
            raise EvaluationRangeError("tail sum requested before model validity")
        if self.kind == "loglinear":
            # terms exp(-(a*k+b)*inv_r) * k**(-g*inv_r): sum numerically, the
            # geometric decay makes a few hundred terms exact to double precision
            total = 0.0
            k = s
            while k < s + 100000:
                term = math.exp(-(self.a * k + self.b) * inv_r) * k ** (-self.g * inv_r)
                total += term
                if term < 1e-18 * max(total, 1e-300):
                    break
                k += 1
            return (total, total * (1.0 + 1e-12))
        x_hi = self.e_hi * inv_r
        x_lo = self.e_lo * inv_r
        # upper quotient bound gives the sum's lower bound and vice versa
        lo = float(self.c_hi ** (-inv_r) * hurwitz_zeta(x_hi, s)) if x_hi > 1 else math.inf
        hi = float(self.c_lo ** (-inv_r) * hurwitz_zeta(x_lo, s)) if x_lo > 1 else math.inf
        if math.isinf(lo):
            # divergence certain: terms are >= a divergent p-series
            return (math.inf, math.inf)
        return (lo, hi)

    def tail_sum_converges(self, inv_r: float) -> Optional[bool]:
        """Convergence of sum mu_k**(-inv_r); None when the bracket straddles."""
        if self.kind == "loglinear":
            return True
        if self.e_hi * inv_r <= 1:
            return False
        if self.e_lo * inv_r > 1:
            return True
        return None


class InternalError(EvaluationRangeError):
    pass


# ---------------------------------------------------------------------------
# the sequence object
# ---------------------------------------------------------------------------

class WeightSequence:
    """Immutable-in-value weight sequence with a lazily grown cache.

    `log_quotient_fn(lo, hi)` must return log mu_p for p = lo..hi inclusive
    (1-based; mu_0 == 1 by convention).  `finite_size`, when given, marks an
    explicit list whose domain ends at index finite_size - 1.
    """

    def __init__(self, label: str,
                 log_quotient_fn: Callable[[int, int], np.ndarray], *,
                 tail_model: TailModel | None = None,
                 log_m0: float = 0.0,
                 finite_size: int | None = None,
                 spec: dict | None = None,
                 structural: frozenset[str] = frozenset()):
        self.label = label
        self._fn = log_quotient_fn
        self.tail_model = tail_model
        self.log_m0 = float(log_m0)
        self.finite_size = finite_size
        self.spec = spec
        self.structural = structural
        self._lock = threading.Lock()
        log_mu0 = np.zeros(1)
        self._data = (log_mu0, np.cumsum(log_mu0) + self.log_m0)
        self.m0_warning = abs(self.log_m0) > 0.0

    # -- cache management --------------------------------------------------

    @property
    def max_index(self) -> Optional[int]:
        return None if self.finite_size is None else self.finite_size - 1

    def _capped(self, p: int) -> int:
        return p if self.finite_size is None else min(p, self.finite_size - 1)

    def ensure(self, p: int) -> None:
        """Grow the cache to cover indices 0..p (clamped for finite lists)."""
        p = self._capped(p)
        if p < len(self._data[0]):
            return
        with self._lock:
            log_mu, log_M = self._data
            have = len(log_mu)
            if p < have:
                return
            target = max(p + 1, 2 * have)
            if self.finite_size is not None:
                target = min(target, self.finite_size)
            chunk = np.asarray(self._fn(have, target - 1), dtype=float)
            if len(chunk) != target - have:
                raise InternalError("quotient generator returned a wrong-sized chunk")
            new_mu = np.concatenate([log_mu, chunk])
            new_M = np.concatenate([log_M, log_M[-1] + np.cumsum(chunk)])
            # single assignment keeps concurrent readers on a consistent prefix
            self._data = (new_mu, new_M)

    def log_quotients(self, p: int) -> np.ndarray:
        """Array of log mu_0..log mu_p."""
        self.ensure(p)
        return self._data[0][: self._capped(p) + 1]

    def log_values(self, p: int) -> np.ndarray:
        """Array of log M_0..log M_p."""
        self.ensure(p)
        return self._data[1][: self._capped(p) + 1]

    def log_quotient(self, p: int) -> float:
        if p < 0:
            raise InvalidArgument("index must be >= 0")
        self._check_range(p)
        return float(self.log_quotients(p)[p])

    def log_value(self, p: int) -> float:
        if p < 0:
            raise InvalidArgument("index must be >= 0")
        self._check_range(p)
        return float(self.log_values(p)[p])

    def quotient(self, p: int) -> float:
        return math.exp(self.log_quotient(p))

    def value(self, p: int) -> float:
        v = self.log_value(p)
        return math.exp(v) if v < 709 else math.inf

    def log_reduced(self, p: int) -> np.ndarray:
        """log m_0..log m_p where m_p = M_p / p!."""
        lv = self.log_values(p)
        idx = np.arange(len(lv))
        return lv - np.array([math.lgamma(i + 1) for i in idx])

    def _check_range(self, p: int) -> None:
        if self.finite_size is not None and p >= self.finite_size:
            raise EvaluationRangeError(
                f"{self.label}: index {p} beyond explicit list of size {self.finite_size}")

    # -- closed forms beyond the cache -------------------------------------

    def log_value_closed(self, p: int) -> float:
        """log M_p for arbitrary p via the exact tail model, if available."""
        if self.tail_model is not None and self.tail_model.exact and self.tail_model.start == 1:
            return self.tail_model.log_value(p) + self.log_m0
        self._check_range(p)
        return self.log_value(p)

    @property
    def has_closed_form(self) -> bool:
        tm = self.tail_model
        return tm is not None and tm.exact and tm.start == 1

    # -- structure ---------------------------------------------------------

    @property
    def normalized(self) -> bool:
        """1 = M_0 <= M_1."""
        return self.log_m0 == 0.0 and self.log_quotient(1) >= 0.0

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"WeightSequence({self.label})"


# ---------------------------------------------------------------------------
# built-in families
# ---------------------------------------------------------------------------

def gevrey(s: float) -> WeightSequence:
    """M_p = (p!)**s, quotients mu_p = p**s."""
    if s <= 0:
        raise InvalidArgument("gevrey index s must be > 0")

    def fn(lo: int, hi: int) -> np.ndarray:
        return s * np.log(np.arange(lo, hi + 1, dtype=float))

    return WeightSequence(f"gevrey(s={s:g})", fn,
                          tail_model=TailModel.power(s),
                          spec={"family": "gevrey", "s": s})


def qgevrey(q: float) -> WeightSequence:
    """M_p = q**(p*p), quotients mu_p = q**(2p-1)."""
    if q <= 1:
        raise InvalidArgument("qgevrey base q must be > 1")
    lq = math.log(q)

    def fn(lo: int, hi: int) -> np.ndarray:
        return (2.0 * np.arange(lo, hi + 1, dtype=float) - 1.0) * lq

    return WeightSequence(f"qgevrey(q={q:g})", fn,
                          tail_model=TailModel.log_linear(2.0 * lq, -lq),
                          spec={"family": "qgevrey", "q": q})


def explicit(values) -> WeightSequence:
    """Finite list of positive reals M_0..M_P; no tail model is attached."""
    vals = np.asarray(list(values), dtype=float)
    if len(vals) < 2:
        raise InvalidArgument("explicit sequence needs at least M_0 and M_1")
    if np.any(vals <= 0) or not np.all(np.isfinite(vals)):
        raise InvalidSpec("explicit sequence values must be finite and positive")
    logs = np.log(vals)
    dl = np.diff(logs)

    def fn(lo: int, hi: int) -> np.ndarray:
        return dl[lo - 1: hi]

    return WeightSequence(f"explicit(n={len(vals)})", fn,
                          log_m0=float(logs[0]),
                          finite_size=len(vals),
                          spec={"family": "explicit", "values": [float(v) for v in vals]})


def from_quotients(rule: Callable[[int], float], *, label: str = "quotients",
                   tail_model: TailModel | None = None, log_scale: bool = False,
                   structural: frozenset[str] = frozenset()) -> WeightSequence:
    """Sequence defined by a quotient rule p -> mu_p (or log mu_p)."""

    def fn(lo: int, hi: int) -> np.ndarray:
        out = np.empty(hi - lo + 1)
        for i, p in enumerate(range(lo, hi + 1)):
            v = float(rule(p))
            out[i] = v if log_scale else math.log(v)
        return out

    return WeightSequence(label, fn, tail_model=tail_model, structural=structural)


def power(M: WeightSequence, r: float) -> WeightSequence:
    """M**r taken entrywise: quotients mu_p**r."""
    if r <= 0:
        raise InvalidArgument("power exponent r must be > 0")

    def fn(lo: int, hi: int) -> np.ndarray:
        return r * M.log_quotients(hi)[lo: hi + 1]

    spec = {"family": "power", "r": r, "base": M.spec} if M.spec is not None else None
    # mu_p**r stays nondecreasing for any r > 0, but (mu_p/p)**r nondecreasing
    # only survives r >= 1 (for r < 1 the 1/p factor can win)
    structural = M.structural if r >= 1.0 else M.structural & frozenset({"lc"})
    return WeightSequence(f"power(r={r:g}, base={M.label})", fn,
                          tail_model=None if M.tail_model is None else M.tail_model.powered(r),
                          log_m0=r * M.log_m0,
                          finite_size=M.finite_size,
                          spec=spec,
                          structural=structural)


def factorial_shift(M: WeightSequence, eps: float) -> WeightSequence:
    """(p!)**eps * M_p: quotients p**eps * mu_p."""
    if eps < 0:
        raise InvalidArgument("factorial shift exponent eps must be >= 0")

    def fn(lo: int, hi: int) -> np.ndarray:
        p = np.arange(lo, hi + 1, dtype=float)
        return eps * np.log(p) + M.log_quotients(hi)[lo: hi + 1]

    spec = {"family": "shift", "eps": eps, "base": M.spec} if M.spec is not None else None
    return WeightSequence(f"shift(eps={eps:g}, base={M.label})", fn,
                          tail_model=None if M.tail_model is None else M.tail_model.shifted(eps),
                          log_m0=M.log_m0,
                          finite_size=M.finite_size,
                          spec=spec)


def hat(M: WeightSequence) -> WeightSequence:
    """p! * M_p: quotients p * mu_p."""
    seq = factorial_shift(M, 1.0)
    seq.label = f"hat({M.label})"
    if M.spec is not None:
        seq.spec = {"family": "hat", "base": M.spec}
    return seq


# ---------------------------------------------------------------------------
# suffix-sum machinery (shared with the indices module)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SuffixSweep:
    """log T_p = log sum_{k>=p} nu_k**(-inv_r) for p = 1..P, with tail status."""

    log_T: np.ndarray          # index 0 unused; entries 1..P
    tail_bracket: tuple[float, float] | None  # sum beyond P per the model
    converges: Optional[bool]  # None = unknown
    P: int


def suffix_power_sums(N: WeightSequence, inv_r: float, P: int) -> SuffixSweep:
    """Backward-accumulated suffix sums of nu_k**(-inv_r), tail-completed."""
    if inv_r <= 0:
        raise InvalidArgument("inv_r must be > 0")
    P = N._capped(P)
    log_mu = N.log_quotients(P)
    terms = -inv_r * log_mu[1:]  # log of nu_k**(-inv_r), k = 1..P
    tail = None
    converges: Optional[bool] = None
    seed = -math.inf
    if N.tail_model is not None and N.tail_model.start <= P + 1:
        tail = N.tail_model.tail_power_sum(inv_r, P + 1)
        converges = N.tail_model.tail_sum_converges(inv_r)
        if converges is False:
            seed = math.inf
        elif math.isinf(tail[1]):
            seed = -math.inf  # straddling bracket: keep the finite partial sums
        elif tail[1] > 0:
            seed = math.log(tail[1])
    full = np.concatenate([terms, [seed]])
    rev = np.logaddexp.accumulate(full[::-1])[::-1][:P]  # rev[i] = logsum(terms[i:]) + seed
    log_T = np.concatenate([[math.nan], rev])
    return SuffixSweep(log_T=log_T, tail_bracket=tail, converges=converges, P=P)


def sup_ratio_sweep(M: WeightSequence, N: WeightSequence, inv_r: float,
                    P: int) -> dict:
    """Evidence for sup_p (mu_p**inv_r / p) * sum_{k>=p} nu_k**(-inv_r).

    Returns the per-p log values, the running sup, and tail information; the
    caller turns this into a verdict.
    """
    sweep = suffix_power_sums(N, inv_r, P)
    P = min(sweep.P, M._capped(P))
    log_mu = M.log_quotients(P)
    p = np.arange(1, P + 1, dtype=float)
    log_F = inv_r * log_mu[1: P + 1] - np.log(p) + sweep.log_T[1: P + 1]
    running = np.maximum.accumulate(log_F)
    return {
        "log_F": log_F,
        "running_sup": running,
        "sup_log": float(running[-1]) if len(running) else math.nan,
        "tail_converges": sweep.converges,
        "tail_bracket": sweep.tail_bracket,
        "P": P,
    }


# ---------------------------------------------------------------------------
# condition checks
# ---------------------------------------------------------------------------

def _first_violation(diffs: np.ndarray, tol: float) -> Optional[int]:
    bad = np.nonzero(diffs < -tol)[0]
    return int(bad[0]) if len(bad) else None


def check_lc(M: WeightSequence, P: int = 2000) -> ConditionVerdict:
    """Log-convexity: M_p^2 <= M_{p-1} M_{p+1}, equivalently mu nondecreasing."""
    P = M._capped(P)
    log_mu = M.log_quotients(P)
    scale = max(1.0, float(np.max(np.abs(log_mu))))
    # the condition lives on p >= 1; mu_0 = 1 is a convention, not a constraint
    bad = _first_violation(np.diff(log_mu[1:]), _LC_TOL * scale)
    if bad is not None:
        p = bad + 2  # first p with mu_p < mu_{p-1}
        return ConditionVerdict.violated("lc", {
            "p": p, "mu_prev": math.exp(log_mu[p - 1]), "mu_p": math.exp(log_mu[p])})
    return _monotone_satisfied(M, "lc", P, shift=0.0)


def check_slc(M: WeightSequence, P: int = 2000) -> ConditionVerdict:
    """Strong log-convexity: log-convexity of m_p = M_p / p! (quotients mu_p/p)."""
    P = M._capped(P)
    log_mu = M.log_quotients(P)
    p = np.arange(1, P + 1, dtype=float)
    red = log_mu[1:] - np.log(p)  # red[i] = log(mu_{i+1}/(i+1))
    scale = max(1.0, float(np.max(np.abs(red))))
    bad = _first_violation(np.diff(red), _LC_TOL * scale)
    if bad is not None:
        q = bad + 2  # first p with mu_p/p < mu_{p-1}/(p-1)
        return ConditionVerdict.violated("slc", {
            "p": q, "prev": math.exp(red[q - 2]), "mu_p_over_p": math.exp(red[q - 1])})
    return _monotone_satisfied(M, "slc", P, shift=-1.0)


def _monotone_satisfied(M: WeightSequence, cond: str, P: int, shift: float) -> ConditionVerdict:
    """Range is monotone; decide whether that extends to all p.

    `shift` is the exponent offset applied to the quotients (-1 for the
    reduced sequence).  Certification comes from the finite domain itself,
    an exact tail model whose quotient law is eventually monotone, or a
    structural fact recorded by a construction.
    """
    if cond in M.structural:
        return ConditionVerdict.satisfied(cond, {"checked_up_to": P}, certified="structural")
    if M.finite_size is not None:
        return ConditionVerdict.satisfied(cond, {"checked_up_to": P}, certified="finite-domain")
    tm = M.tail_model
    if tm is not None and tm.exact:
        eventually = (tm.e_hi + shift >= 0) if tm.kind == "power" else True
        if eventually and P >= tm.start:
            return ConditionVerdict.satisfied(cond, {"checked_up_to": P}, certified="tail-model")
        if not eventually:
            # quotient law eventually decreasing: locate a concrete violation
            probe = max(P, tm.start) + 1
            lm = M.log_quotients(probe + 1)
            pr = np.arange(1, probe + 2, dtype=float)
            red = lm[1:] + shift * np.log(pr)
            bad = _first_violation(np.diff(red), 0.0)
            if bad is not None:
                return ConditionVerdict.violated(cond, {"p": bad + 1})
    return ConditionVerdict.inconclusive(cond, {
        "checked_up_to": P, "monotone_on_range": True},
        note="no model certifies behaviour beyond the computed range")


def check_mg(M: WeightSequence, P: int = 512) -> ConditionVerdict:
    """Moderate growth: M_{p+q} <= C**(p+q) M_p M_q for some C.

    An existential constant can never be refuted from finite data, so the
    verdict is Satisfied (running max of the normalized defect stabilizes)
    or Inconclusive, never Violated.
    """
    P = M._capped(2 * P) // 2
    if P < 8:
        return ConditionVerdict.inconclusive("mg", {"checked_up_to": P},
                                             note="range too short")
    log_M = M.log_values(2 * P)
    idx = np.arange(P + 1)
    ssum = log_M[idx][:, None] + log_M[idx][None, :]
    total = log_M[idx[:, None] + idx[None, :]]
    with np.errstate(invalid="ignore", divide="ignore"):
        denom = (idx[:, None] + idx[None, :]).astype(float)
        denom[0, 0] = 1.0
        defect = (total - ssum) / denom
    running = []
    n = 8
    while n <= P:
        running.append(float(np.max(defect[: n + 1, : n + 1])))
        n *= 2
    if n // 2 != P:
        running.append(float(np.max(defect)))
    model_bounded = None
    tm = M.tail_model
    if tm is not None:
        model_bounded = not tm.superpolynomial
    if model_bounded is False:
        return ConditionVerdict.inconclusive("mg", {
            "running_max_log": running, "checked_up_to": P,
            "model": "quotients grow supra-polynomially; no constant can work"})
    if stabilized(np.array(running)) or model_bounded:
        C = math.exp(running[-1])
        return ConditionVerdict.satisfied("mg", {"C": C, "checked_up_to": P},
                                          certified="tail-model" if model_bounded else "range-stabilized")
    return ConditionVerdict.inconclusive("mg", {
        "running_max_log": running, "checked_up_to": P,
        "note": "running max still growing at range end"})


def _partial_log_sums(N: WeightSequence, inv_r: float, P: int) -> np.ndarray:
    """log of the running partial sums of nu_k**(-inv_r), k = 1..P."""
    log_mu = N.log_quotients(P)
    return np.logaddexp.accumulate(-inv_r * log_mu[1:])


def check_nq_r(M: WeightSequence, r: float, P: int = DEFAULT_P_MAX) -> ConditionVerdict:
    """Non-quasianalyticity of order r: sum mu_p**(-1/r) < infinity."""
    if r <= 0:
        raise InvalidArgument("order r must be > 0")
    inv_r = 1.0 / r
    cond = "nq" if r == 1.0 else f"nq_{r:g}"
    P = M._capped(P)
    partial = _partial_log_sums(M, inv_r, P)
    tm = M.tail_model
    if tm is not None and tm.start <= P + 1:
        conv = tm.tail_sum_converges(inv_r)
        if conv is True:
            lo_t, hi_t = tm.tail_power_sum(inv_r, P + 1)
            total_hi = float(np.logaddexp(partial[-1], math.log(hi_t) if hi_t > 0 else -math.inf))
            total_lo = float(np.logaddexp(partial[-1], math.log(lo_t) if lo_t > 0 else -math.inf))
            return ConditionVerdict.satisfied(cond, {
                "sum": math.exp(total_hi),
                "sum_lower": math.exp(total_lo),
                "partial_terms": P}, certified="tail-model")
        if conv is False:
            return ConditionVerdict.violated(cond, {
                "partial_sum": math.exp(partial[-1]), "at_p": P,
                "tail_exponent": tm.e_hi * inv_r if tm.kind == "power" else math.inf},
                reason="tail model certifies a divergent minorant p-series")
    # no usable model: look at the partial-sum trend over successive doublings
    if P < 8:
        return ConditionVerdict.inconclusive(cond, {
            "partial_sum": math.exp(partial[-1]), "at_p": P},
            note="range too short for a trend call")
    s4, s2, s1 = (math.exp(partial[P // 4 - 1]), math.exp(partial[P // 2 - 1]),
                  math.exp(partial[-1]))
    d_prev, d_last = s2 - s4, s1 - s2
    if d_last > 0.5 * d_prev and d_last > 1e-12 * s1:
        return ConditionVerdict.violated(cond, {
            "partial_sum": s1, "at_p": P,
            "increment_last_doubling": d_last, "increment_previous": d_prev},
            reason="partial sums keep growing at an undiminished rate")
    return ConditionVerdict.inconclusive(cond, {
        "partial_sum": s1, "at_p": P,
        "increment_last_doubling": d_last, "increment_previous": d_prev},
        note="no tail model; finite data cannot certify convergence")


def check_nq(M: WeightSequence, P: int = DEFAULT_P_MAX) -> ConditionVerdict:
    return check_nq_r(M, 1.0, P)


def _window(values: np.ndarray, fraction: float = 0.1) -> np.ndarray:
    k = max(2, int(len(values) * fraction))
    return values[-k:]


def _check_beta(M: WeightSequence, threshold: str, Q_max: int,
                P: int) -> ConditionVerdict:
    """Shared body for beta_1 (liminf mu_{Qp}/mu_p > Q) and beta_3 (> 1)."""
    cond = "beta1" if threshold == "Q" else "beta3"
    tm = M.tail_model
    P = M._capped(P)
    evidence = {}
    for Q in range(2, Q_max + 1):
        if M.finite_size is not None and Q * 8 >= M.finite_size:
            break
        top = M._capped(Q * P)
        log_mu = M.log_quotients(top)
        p_hi = top // Q
        p = np.arange(1, p_hi + 1)
        gap = log_mu[Q * p] - log_mu[p]  # log(mu_{Qp}/mu_p)
        win_min = float(np.min(_window(gap)))
        need = math.log(Q) if threshold == "Q" else 0.0
        evidence[Q] = {"window_liminf_log": win_min, "needed_log": need}
        if tm is not None and tm.exact:
            if tm.kind == "power":
                limit = tm.e_hi * math.log(Q)  # coefficients cancel in the ratio
            else:
                limit = math.inf
            if limit > need:
                return ConditionVerdict.satisfied(cond, {
                    "Q": Q, "liminf": math.exp(min(limit, 700.0)),
                    "window_liminf": math.exp(min(win_min, 700.0))},
                    certified="tail-model")
    if tm is not None and tm.exact and tm.kind == "power":
        e = tm.e_hi
        fails = (e <= 1.0) if threshold == "Q" else (e <= 0.0)
        if fails:
            return ConditionVerdict.violated(cond, {
                "Q_max": Q_max, "quotient_exponent": e},
                reason="ratio liminf equals Q**e for every Q, below the threshold")
    return ConditionVerdict.inconclusive(cond, {"per_Q": evidence},
                                         note="no model certifies the liminf")


def check_beta1(M: WeightSequence, Q_max: int = 8, P: int = 20000) -> ConditionVerdict:
    return _check_beta(M, "Q", Q_max, P)


def check_beta3(M: WeightSequence, Q_max: int = 8, P: int = 20000) -> ConditionVerdict:
    return _check_beta(M, "1", Q_max, P)


def check_gamma1(M: WeightSequence, P: int = DEFAULT_P_MAX) -> ConditionVerdict:
    """sup_p (mu_p / p) * sum_{k>=p} 1/mu_k < infinity."""
    sweep = sup_ratio_sweep(M, M, 1.0, P)
    return finish_sup_verdict("gamma1", sweep)


def finish_sup_verdict(cond: str, sweep: dict) -> ConditionVerdict:
    """Turn a sup-of-suffix-sums sweep into a verdict (shared with indices)."""
    if sweep["tail_converges"] is False:
        return ConditionVerdict.violated(cond, {
            "p": 1, "inner_sum": math.inf},
            reason="inner sum diverges per the tail model")
    running = sweep["running_sup"]
    if not len(running) or not np.all(np.isfinite(running)):
        return ConditionVerdict.violated(cond, {"p": 1, "inner_sum": math.inf},
                                         reason="inner sum not finite on range")
    sup = math.exp(sweep["sup_log"])
    is_stable = stabilized(running)
    tail_known = sweep["tail_converges"] is True
    if is_stable and tail_known:
        return ConditionVerdict.satisfied(cond, {"sup": sup, "P": sweep["P"]},
                                          certified="range-stabilized+tail-model")
    if is_stable and sweep["tail_converges"] is None:
        return ConditionVerdict.inconclusive(cond, {
            "sup_on_range": sup, "P": sweep["P"]},
            note="sup stabilized but the inner-sum tail is uncertified")
    return ConditionVerdict.inconclusive(cond, {
        "sup_on_range": sup, "P": sweep["P"],
        "running_sup_log": [float(v) for v in running[:: max(1, len(running) // 16)]]},
        note="running sup still moving at range end")


# ---------------------------------------------------------------------------
# comparisons
# ---------------------------------------------------------------------------

_RELATIONS = ("precsim", "vartriangleleft", "equivalent")


def compare(M: WeightSequence, N: WeightSequence, relation: str,
            P: int = DEFAULT_P_MAX) -> RelationVerdict:
    """Compare two sequences through d_p = log(M_p/N_p)/p.

    precsim:         sup_p (M_p/N_p)**(1/p) finite
    vartriangleleft: (M_p/N_p)**(1/p) -> 0
    equivalent:      precsim both ways
    """
    if relation not in _RELATIONS:
        raise InvalidArgument(f"unknown relation {relation!r}")
    if relation == "equivalent":
        fwd = compare(M, N, "precsim", P)
        bwd = compare(N, M, "precsim", P)
        if fwd.is_satisfied and bwd.is_satisfied:
            w = max(fwd.witness["sup"], bwd.witness["sup"])
            return ConditionVerdict.satisfied("equivalent", {"sup_both_ways": w})
        if fwd.is_violated or bwd.is_violated:
            loser = fwd if fwd.is_violated else bwd
            return ConditionVerdict.violated("equivalent", dict(loser.counterexample),
                                             direction="forward" if fwd.is_violated else "backward")
        return ConditionVerdict.inconclusive("equivalent", {
            "forward": fwd.status.value, "backward": bwd.status.value})

    P = min(M._capped(P), N._capped(P))
    d = (M.log_values(P)[1:] - N.log_values(P)[1:]) / np.arange(1, P + 1)
    sup_d = float(np.max(d))
    win = _window(d)
    trend = {"sup_log": sup_d, "window_mean_log": float(np.mean(win)),
             "window_last_log": float(win[-1]), "P": P}

    limit = _model_ratio_limit(M, N)  # limit of d_p, or None
    if relation == "precsim":
        if limit is not None:
            if limit < math.inf:
                return ConditionVerdict.satisfied("precsim", {"sup": math.exp(sup_d)},
                                                  certified="tail-model")
            return ConditionVerdict.violated("precsim", {
                "p": P, "ratio_root": math.exp(float(d[-1]))},
                reason="model: (M_p/N_p)^(1/p) diverges")
        slope = float(win[-1] - win[0])
        if slope <= 1e-3 * max(1.0, abs(sup_d)):
            return ConditionVerdict.satisfied("precsim", {"sup": math.exp(sup_d)},
                                              certified="grid-only", grid_only=True)
        return ConditionVerdict.inconclusive("precsim", trend)
    # vartriangleleft
    if limit is not None:
        if limit == -math.inf:
            return ConditionVerdict.satisfied("vartriangleleft",
                                              {"limit": 0.0, "window_value": math.exp(float(win[-1]))},
                                              certified="tail-model")
        return ConditionVerdict.violated("vartriangleleft", {
            "p": P, "ratio_root": math.exp(float(win[-1])),
            "limit": math.exp(limit) if limit < 700 else math.inf},
            reason="model: ratio root does not vanish")
    if float(win[-1]) < float(win[0]) and win[-1] < math.log(0.5):
        return ConditionVerdict.satisfied("vartriangleleft",
                                          {"limit_bound": math.exp(float(win[-1]))},
                                          certified="grid-only", grid_only=True)
    return ConditionVerdict.inconclusive("vartriangleleft", trend)


def _model_ratio_limit(M: WeightSequence, N: WeightSequence) -> Optional[float]:
    """Limit of log(M_p/N_p)/p from exact models: a real, +-inf, or None."""
    tm, tn = M.tail_model, N.tail_model
    if tm is None or tn is None or not (tm.exact and tn.exact):
        return None
    if tm.kind == "loglinear" or tn.kind == "loglinear":
        if tm.kind == tn.kind == "loglinear":
            if tm.a != tn.a:
                return math.inf if tm.a > tn.a else -math.inf
            if tm.g != tn.g:
                return math.inf if tm.g > tn.g else -math.inf
            return tm.b - tn.b
        return math.inf if tm.kind == "loglinear" else -math.inf
    if tm.e_hi != tn.e_hi:
        # d_p ~ (e_M - e_N)/p * sum log k -> +-inf
        return math.inf if tm.e_hi > tn.e_hi else -math.inf
    return math.log(tm.c_hi / tn.c_hi)
