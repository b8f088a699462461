"""Growth indices and quasianalyticity orders via condition bisection.

Every index here has the form sup{r > 0 : condition at order r holds}, where
the condition is monotone in r: holding at some order implies holding at every
smaller one.  The engine brackets the supremum by probing the condition at
sampled orders, expanding geometrically from r = 1 and then bisecting.  Probes
at distinct r are independent pure evaluations; they are cached by r and the
estimate is assembled single-threaded from the sorted trace, so a concurrent
probe runner would produce the identical result.

Bookkeeping is deliberately asymmetric: an Inconclusive probe pulls the upper
end of the bracket down but never raises the lower end.  Uncertainty therefore
widens the estimate instead of overstating the index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Mapping, Optional

import numpy as np

from .functions import (GrowthModel, WeightFunction, _integral_trend,
                        _shape_cmp, _trend_call, check_omega_condition)
from .quadrature import power_log_tail, suffix_integral_grid
from .sequences import (WeightSequence, check_lc, check_nq_r,
                        finish_sup_verdict, sup_ratio_sweep)
from .verdict import (INDEX_CAP, ConditionVerdict, GridTooCoarse,
                      InternalInconsistency, InvalidArgument, NotLogConvex,
                      RunConfig, _jsonify, stabilized)

INDEX_FLOOR = 1.0 / 64.0  # smallest order probed while expanding downward
_PROBE_BUDGET = 40
_REL_MARGIN = 1.01


# ---------------------------------------------------------------------------
# estimate container
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IndexEstimate:
    """Bracket [lower, upper] for an index, with the full probe trace.

    upper == INDEX_CAP encodes "unbounded beyond the tested range".  The
    constructor enforces the trace structure: probes at or below `lower` must
    be Satisfied, probes at or above `upper` must not be (except at the cap
    sentinel), and no Satisfied probe may sit above a Violated one.
    """

    name: str
    lower: float
    upper: float
    method: str
    tolerance: float
    r_samples: tuple[tuple[float, ConditionVerdict], ...]
    diagnostics: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not (0.0 <= self.lower <= self.upper <= INDEX_CAP):
            raise InternalInconsistency(
                f"{self.name}: bracket [{self.lower}, {self.upper}] out of order")
        eps = 1e-12 * max(1.0, self.upper)
        sat = [r for r, v in self.r_samples if v.is_satisfied]
        vio = [r for r, v in self.r_samples if v.is_violated]
        if sat and vio and min(vio) < max(sat) - eps:
            raise InternalInconsistency(
                f"{self.name}: Violated at r={min(vio)} below Satisfied at "
                f"r={max(sat)}; the condition is not monotone in r")
        for r, v in self.r_samples:
            if not v.is_satisfied and r < self.lower - eps:
                raise InternalInconsistency(
                    f"{self.name}: non-Satisfied probe at r={r} below lower={self.lower}")
            if v.is_satisfied and r > self.upper + eps and not self.unbounded:
                raise InternalInconsistency(
                    f"{self.name}: Satisfied probe at r={r} above upper={self.upper}")

    @property
    def unbounded(self) -> bool:
        return self.upper >= INDEX_CAP - 1e-9

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)

    def to_dict(self) -> dict:
        samples = []
        for r, v in self.r_samples:
            entry: dict[str, Any] = {"r": r, "verdict": v.status.value}
            if v.witness:
                entry["witness"] = _jsonify(v.witness)
            if v.counterexample:
                entry["counterexample"] = _jsonify(v.counterexample)
            if v.trend:
                entry["trend"] = _jsonify(v.trend)
            samples.append(entry)
        return {"index": self.name, "lower": self.lower, "upper": self.upper,
                "method": self.method, "tolerance": self.tolerance,
                "samples": samples, "diagnostics": _jsonify(dict(self.diagnostics))}


# ---------------------------------------------------------------------------
# bisection engine
# ---------------------------------------------------------------------------

def _bisect_index(name: str, probe: Callable[[float], ConditionVerdict], *,
                  tol: float, cap: float = INDEX_CAP, floor: float = INDEX_FLOOR,
                  budget: int = _PROBE_BUDGET, method: str = "bisection",
                  diagnostics: Optional[Mapping[str, Any]] = None) -> IndexEstimate:
    samples: dict[float, ConditionVerdict] = {}
    spent = 0

    def look(r: float) -> ConditionVerdict:
        nonlocal spent
        r = float(r)
        if r not in samples:
            samples[r] = probe(r)
            spent += 1
        return samples[r]

    lo, hi = 0.0, cap
    r = 1.0
    if look(r).is_satisfied:
        lo = r
        while r < cap and spent < budget:
            r = min(cap, 2.0 * r)
            if look(r).is_satisfied:
                lo = r
            else:
                hi = r
                break
    else:
        hi = r
        while r > floor and spent < budget:
            r = max(floor, 0.5 * r)
            if look(r).is_satisfied:
                lo = r
                break
            hi = r

    while hi - lo > tol and spent < budget:
        mid = 0.5 * (lo + hi)
        if mid <= 0.0 or mid in samples:
            break
        if look(mid).is_satisfied:
            lo = mid
        else:
            hi = mid

    all_inconclusive = bool(samples) and all(v.is_inconclusive for v in samples.values())
    diag = dict(diagnostics or {})
    diag["probes"] = spent
    diag["tol_target"] = tol
    if all_inconclusive:
        lo, hi = 0.0, cap
        method = method + "+undecided"
        diag["note"] = "every probe returned Inconclusive"
    trace = tuple(sorted(samples.items()))
    return IndexEstimate(name, lo, hi, method, hi - lo, trace, diag)


# ---------------------------------------------------------------------------
# sequence-level mixed condition and indices
# ---------------------------------------------------------------------------

def _quotient_ratio_bounded(M: WeightSequence, N: WeightSequence,
                            P: int) -> tuple[Optional[bool], dict]:
    """Is mu_p / nu_p bounded over the working range?  (True/False/None)."""
    tm, tn = M.tail_model, N.tail_model
    if tm is not None and tn is not None:
        if tm.kind == "power" and tn.kind == "power":
            if tm.e_hi < tn.e_lo:
                return True, {"model": "quotient ratio vanishes"}
            if tm.e_lo > tn.e_hi:
                return False, {"model": "quotient exponent gap",
                               "gap": tm.e_lo - tn.e_hi}
            if tm.exact and tn.exact:  # equal exponents
                return True, {"model": "equal exponents",
                              "limit": tm.c_hi / tn.c_hi}
        elif tm.kind == "loglinear" and tn.kind == "power":
            return False, {"model": "supra-polynomial over polynomial"}
        elif tm.kind == "power" and tn.kind == "loglinear":
            return True, {"model": "polynomial over supra-polynomial"}
        else:  # both loglinear, always exact
            if tm.a != tn.a:
                return tm.a < tn.a, {"model": "loglinear slope gap"}
            if tm.g != tn.g:
                return tm.g < tn.g, {"model": "loglinear log-term gap"}
            return True, {"model": "equal loglinear laws",
                          "limit": math.exp(tm.b - tn.b)}
    P = min(M._capped(P), N._capped(P))
    d = M.log_quotients(P)[1:] - N.log_quotients(P)[1:]
    running = np.maximum.accumulate(d)
    last, half = float(running[-1]), float(running[len(running) // 2])
    info = {"max_log_ratio": last, "P": P}
    if last > half + max(0.05, 0.05 * abs(half)):
        p_at = int(np.argmax(d)) + 1
        info.update({"p": p_at, "ratio": math.exp(float(d[p_at - 1]))})
        return False, info
    return None, info


def mixed_condition_seq(M: WeightSequence, N: Optional[WeightSequence] = None,
                        r: float = 1.0, *,
                        config: Optional[RunConfig] = None) -> ConditionVerdict:
    """Is sup_p (mu_p^{1/r} / p) * sum_{k>=p} nu_k^{-1/r} finite?

    The quotient ratio mu/nu must stay bounded over the range; a certified
    unbounded ratio short-circuits to a Violated verdict, since the sup is
    bounded below by (mu_p/nu_p)^{1/r} / p times a non-vanishing factor.
    """
    config = config or RunConfig()
    if N is None:
        N = M
    if r <= 0:
        raise InvalidArgument("order r must be positive")
    pre, pre_info = _quotient_ratio_bounded(M, N, min(config.p_max, 20000))
    if pre is False:
        counter = {"p": pre_info.get("p", 0), "r": r,
                   "mu_over_nu": pre_info.get("ratio", math.inf)}
        return ConditionVerdict.violated("mixed_seq", counter,
            reason="quotient ratio mu/nu unbounded on range (precondition)",
            **{k: v for k, v in pre_info.items() if k not in counter})
    sweep = sup_ratio_sweep(M, N, 1.0 / r, config.p_max)
    verdict = finish_sup_verdict("mixed_seq", sweep)
    diag = dict(verdict.diagnostics)
    diag["r"] = r
    if pre is None:
        diag["precondition"] = "quotient ratio boundedness uncertified"
    return replace(verdict, diagnostics=diag)


def gamma_index_seq(M: WeightSequence, N: Optional[WeightSequence] = None, *,
                    config: Optional[RunConfig] = None) -> IndexEstimate:
    """Mixed growth index of a sequence pair (of a single sequence if N omitted)."""
    config = config or RunConfig()
    N_eff = M if N is None else N

    def probe(r: float) -> ConditionVerdict:
        return mixed_condition_seq(M, N_eff, r, config=config)

    return _bisect_index("gamma_mixed", probe, tol=config.index_tol,
                         diagnostics={"domain": "sequence", "M": M.label,
                                      "N": N_eff.label})


def _exponent_of_convergence(N: WeightSequence, config: RunConfig) -> tuple[float, dict]:
    """Order estimate 1 / limsup_p (log p / log nu_p) over the trailing window."""
    P = N._capped(config.p_max)
    log_mu = N.log_quotients(P)[1:]
    k = max(2, P // 10)
    win = log_mu[-k:]
    p = np.arange(P - k + 1, P + 1, dtype=float)
    with np.errstate(divide="ignore"):
        vals = np.where(win > 0, np.log(p) / np.where(win > 0, win, 1.0), math.inf)
    beta = float(np.max(vals))
    if not math.isfinite(beta):
        mu_est = 0.0  # quotients not exceeding 1: divergence at every order
    elif beta <= 1.0 / INDEX_CAP:
        mu_est = INDEX_CAP
    else:
        mu_est = min(1.0 / beta, INDEX_CAP)
    return mu_est, {"window": int(k), "limsup_log_ratio": beta, "P": P}


def mu_seq(N: WeightSequence, *, config: Optional[RunConfig] = None) -> IndexEstimate:
    """Order of quasianalyticity sup{r > 0 : sum nu_k^{-1/r} < inf}.

    Two estimators are cross-validated: a bisection on the summability check,
    and the reciprocal of limsup_p (log p / log nu_p) over the trailing window
    (the exponent of convergence of the quotients).  Agreement intersects the
    brackets; disagreement beyond tolerance widens the bracket to cover both
    and tags the method as disputed.
    """
    config = config or RunConfig()
    lcv = check_lc(N, min(config.p_max, 20000))
    if lcv.is_violated:
        raise NotLogConvex(
            f"{N.label}: quotients decrease at p={lcv.counterexample.get('p')}")

    def probe(r: float) -> ConditionVerdict:
        return check_nq_r(N, r, config.p_max)

    diag: dict[str, Any] = {"domain": "sequence", "N": N.label}
    if lcv.is_inconclusive:
        diag["log_convexity"] = "monotone on range, uncertified beyond"
    est = _bisect_index("mu", probe, tol=config.index_tol, diagnostics=diag)

    mu_est, b_info = _exponent_of_convergence(N, config)
    tol = config.index_tol
    b_lo = max(0.0, mu_est - tol)
    b_hi = INDEX_CAP if mu_est >= INDEX_CAP - 1e-9 else min(INDEX_CAP, mu_est + tol)
    merged = dict(est.diagnostics)
    merged["exponent_of_convergence"] = {**b_info, "mu": mu_est}
    inter_lo = max(est.lower, b_lo)
    inter_hi = min(est.upper, b_hi)
    if inter_lo <= inter_hi + 1e-12:
        lower, upper = inter_lo, max(inter_lo, inter_hi)
        method = "bisection+exponent-of-convergence"
    else:
        lower, upper = min(est.lower, b_lo), max(est.upper, b_hi)
        method = "disputed"
        merged["note"] = "estimators disagree beyond tolerance"
        merged["bisection_bracket"] = [est.lower, est.upper]
    return IndexEstimate("mu", lower, upper, method, upper - lower,
                         est.r_samples, merged)


# ---------------------------------------------------------------------------
# function-level mixed condition and indices
# ---------------------------------------------------------------------------

def mixed_condition_fun(sigma: WeightFunction, omega: Optional[WeightFunction] = None,
                        r: float = 1.0, *,
                        config: Optional[RunConfig] = None) -> ConditionVerdict:
    """Is integral_1^inf omega(t y) y^{-1-1/r} dy <= C sigma(t) + C for some C?

    The integral equals t^{1/r} integral_t^inf omega(u) u^{-1-1/r} du and is
    bounded below by r * omega(t), so the bound forces omega to be dominated
    by sigma; incompatible growth shapes are rejected before any quadrature.
    A model-certified divergent integral is Violated outright.
    """
    config = config or RunConfig()
    if omega is None:
        omega = sigma
    if r <= 0:
        raise InvalidArgument("order r must be positive")
    cond = "mixed_fun"
    s = 1.0 + 1.0 / r
    ts = config.grid.geometric()
    sig = sigma.eval(ts)
    if float(np.max(sig)) <= 0.0:
        raise InvalidArgument("sigma vanishes on the whole evaluation grid")

    m = omega.model
    conv = m.converges_against(s) if m is not None else None
    if conv is False:
        return ConditionVerdict.violated(cond, {"t": 1.0, "r": r,
            "integral": math.inf},
            reason="kernel integral diverges at this order")
    if m is not None and sigma.model is not None and _shape_cmp(m, sigma.model) > 0:
        return ConditionVerdict.violated(cond, {"t": float(ts[-1]), "r": r,
            "omega_over_sigma": float(omega.value(ts[-1]) / (sig[-1] + 1.0))},
            reason="integral >= r*omega(t) and omega/sigma is unbounded")
    if m is None or sigma.model is None:
        lb = np.maximum.accumulate(omega.eval(ts) / (sig + 1.0))
        call, lb_info = _trend_call(lb)
        if call == "growing":
            return ConditionVerdict.violated(cond, {"t": float(ts[-1]), "r": r,
                "omega_over_sigma": float(lb[-1])},
                reason="integral >= r*omega(t) and omega/sigma keeps growing",
                **lb_info)

    tail = m.tail_callable(s) if m is not None else None
    tail_note = None
    if tail is None and conv is True and m is not None and m.coeff is not None:
        # no exact closed form, but the growth model certifies convergence and
        # pins the leading coefficient; an asymptotic tail beats a blind fit
        # near the convergence threshold
        def tail(y_cut: float, _m: GrowthModel = m, _s: float = s) -> float:
            return power_log_tail(_m.coeff, _m.exponent, _m.log_power,
                                  _m.offset, _s, y_cut)
        tail_note = "model-asymptotic"
    try:
        G = suffix_integral_grid(omega.eval, ts, s, model_tail=tail,
                                 kinks=omega.kinks)
    except GridTooCoarse:
        windows = _integral_trend(omega, s, config)
        inc = np.diff(windows)
        if len(inc) >= 2 and inc[-1] >= 0.9 * inc[-2]:
            return ConditionVerdict.violated(cond, {"t": float(ts[0]), "r": r,
                "partial_integrals": [round(float(w), 6) for w in windows]},
                reason="kernel integral fails to converge numerically")
        return ConditionVerdict.inconclusive(cond, {"r": r,
            "partial_integrals": [round(float(w), 6) for w in windows]},
            note="integral tail unresolved by quadrature")

    F = ts ** (1.0 / r) * G / (sig + 1.0)
    running = np.maximum.accumulate(F)
    sup = float(running[-1])
    info = {"r": r, "sup": sup, "grid_points": len(ts)}
    if tail_note is not None:
        info["tail"] = tail_note

    if m is not None and sigma.model is not None:
        c = _shape_cmp(m, sigma.model)  # c <= 0 at this point
        if c < 0:
            return ConditionVerdict.satisfied(cond,
                {"C": sup * _REL_MARGIN, **info},
                note="ratio to sigma vanishes at infinity")
        limit = None
        if m.coeff is not None and sigma.model.coeff is not None:
            denom = 1.0 / r - m.exponent
            if denom > 0:
                limit = m.coeff / (denom * sigma.model.coeff)
        C = max(sup, limit if limit is not None else 0.0) * _REL_MARGIN
        return ConditionVerdict.satisfied(cond, {"C": C, **info},
            **({"model_ratio_limit": limit} if limit is not None else {}))

    call, tr = _trend_call(running)
    if call == "stable" and conv is True:
        return ConditionVerdict.satisfied(cond, {"C": sup * _REL_MARGIN, **info})
    if call == "stable":
        return ConditionVerdict.satisfied(cond, {"C": sup * _REL_MARGIN, **info,
                                                 "grid_only": True})
    if call == "growing":
        return ConditionVerdict.violated(cond, {"t": float(ts[-1]), "r": r,
            "ratio": float(F[-1])},
            reason="normalized integral keeps growing along the grid", **tr)
    return ConditionVerdict.inconclusive(cond, {**info, **tr},
                                         note="normalized integral trend unclear")


def gamma_index_fun(sigma: WeightFunction, omega: Optional[WeightFunction] = None,
                    *, config: Optional[RunConfig] = None) -> IndexEstimate:
    """Mixed growth index of a weight-function pair (single function if omega omitted)."""
    config = config or RunConfig()
    omega_eff = sigma if omega is None else omega

    def probe(r: float) -> ConditionVerdict:
        return mixed_condition_fun(sigma, omega_eff, r, config=config)

    return _bisect_index("gamma_mixed", probe, tol=config.index_tol,
                         diagnostics={"domain": "function", "sigma": sigma.label,
                                      "omega": omega_eff.label})


def mu_fun(omega: WeightFunction, *,
           config: Optional[RunConfig] = None) -> IndexEstimate:
    """Order of quasianalyticity sup{r > 0 : kernel integral of order r converges}."""
    config = config or RunConfig()

    def probe(r: float) -> ConditionVerdict:
        return check_omega_condition(omega, "omega_nq_r", r=r, config=config)

    return _bisect_index("mu", probe, tol=config.index_tol,
                         diagnostics={"domain": "function", "omega": omega.label})


# ---------------------------------------------------------------------------
# the index-above-one witness search
# ---------------------------------------------------------------------------

_WITNESS_K = (16.0, 8.0, 4.0, 2.0)
_WITNESS_C = tuple(float(2 ** i) for i in range(11))  # 1, 2, ..., 1024
_WITNESS_T0 = (1.0, 10.0, 100.0, 1000.0)
_WITNESS_T_MAX = 1e8
_WITNESS_T_POINTS = 160


@dataclass(frozen=True)
class Gamma1Witness:
    """Constants certifying omega(K^j t) <= C * H^j * sigma(t) on the tested grid."""

    C: float
    K: float
    H: float
    t0: float
    j_max: int
    diagnostics: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not (self.K > self.H > 1.0):
            raise InternalInconsistency("witness needs K > H > 1")
        if self.t0 < 0.0:
            raise InternalInconsistency("witness needs t0 >= 0")

    def to_dict(self) -> dict:
        return {"C": self.C, "K": self.K, "H": self.H, "t0": self.t0,
                "j_max": self.j_max}


def _doubling_sup(omega: WeightFunction, K: float, config: RunConfig) -> float:
    """Asymptotic bound on omega(K t) / omega(t)."""
    if omega.model is not None:
        return float(omega.model.ratio_limit(K))
    ts = config.grid.tail(0.25)
    vals = omega.eval(ts)
    mask = vals > 0
    if not np.any(mask):
        return 1.0
    return float(np.max(omega.eval(K * ts[mask]) / vals[mask]))


def _witness_c_needed(sigma: WeightFunction, omega: WeightFunction, K: float,
                      H: float, t0: float, j_max: int) -> float:
    """Smallest C making omega(K^j t) <= C H^j sigma(t) hold on the test grid."""
    ts = np.geomspace(t0, _WITNESS_T_MAX, _WITNESS_T_POINTS)
    sig = sigma.eval(ts)
    needed = 0.0
    for j in range(j_max + 1):
        lhs = omega.eval(K ** j * ts)
        rhs_unit = H ** j * sig
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(lhs <= 0.0, 0.0,
                             np.where(rhs_unit > 0.0, lhs / np.where(rhs_unit > 0.0,
                                                                     rhs_unit, 1.0),
                                      math.inf))
        needed = max(needed, float(np.max(ratio)))
        if not math.isfinite(needed):
            break
    return needed


def find_gamma1_witness(sigma: WeightFunction, omega: WeightFunction, *,
                        config: Optional[RunConfig] = None,
                        j_max: int = 30) -> Optional[Gamma1Witness]:
    """Search for constants C, K, H, t0 with omega(K^j t) <= C H^j sigma(t).

    Larger K values are tried first: the iterated bound needs H strictly
    between the doubling factor sup omega(Kt)/omega(t) and K, and that window
    only opens once K is large against omega's growth.  The doubling factor
    must not exceed 2 (otherwise iterating j times loses more than the H^j
    budget regains on the tested families).  For each admissible (K, H) the
    constant C walks up powers of two, with the start point t0 walking the
    decade grid inside each C; the first verified combination wins.  Returns
    None when no combination passes, which is a value, not an error.
    """
    config = config or RunConfig()
    if (sigma.model is not None and omega.model is not None
            and _shape_cmp(omega.model, sigma.model) > 0):
        return None
    tried: list[dict[str, Any]] = []
    for K in _WITNESS_K:
        try:
            D = _doubling_sup(omega, K, config)
        except Exception:  # evaluation beyond a table-backed domain
            continue
        if not D <= 2.0 * (1.0 + 1e-9):
            tried.append({"K": K, "doubling": D, "skip": "doubling factor above 2"})
            continue
        H = float(math.floor(D) + 1)
        if not H < K:
            H = math.sqrt(max(D, 1.0) * K)
            if H <= max(D, 1.0) * (1.0 + 1e-12) or H >= K:
                tried.append({"K": K, "doubling": D, "skip": "no H in (D, K)"})
                continue
        needed: dict[float, float] = {}
        failed = False
        for t0 in _WITNESS_T0:
            try:
                needed[t0] = _witness_c_needed(sigma, omega, K, H, t0, j_max)
            except Exception:
                failed = True
                break
        if failed:
            tried.append({"K": K, "doubling": D, "skip": "evaluation failed"})
            continue
        for C in _WITNESS_C:
            for t0 in _WITNESS_T0:
                if C * (1.0 + 1e-12) >= needed[t0]:
                    return Gamma1Witness(C=C, K=K, H=H, t0=t0, j_max=j_max,
                                         diagnostics={"doubling": D,
                                                      "C_needed": needed[t0],
                                                      "tried": tried})
        tried.append({"K": K, "doubling": D, "H": H,
                      "C_needed_by_t0": {f"{t0:g}": needed[t0] for t0 in needed}})
    return None
