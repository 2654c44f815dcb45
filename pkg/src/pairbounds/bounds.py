"""Closed-form risk bounds for pairwise training sets, as auditable reports.

Every bound has the shape ``empirical risk + complexity term + confidence
term``. The dependence between examples enters only through ``rho``, the
maximum instance frequency (the maximum degree of the training graph): a
proper edge coloring of the training graph needs at most ``rho + 1`` colors,
and each color class is a set of independent examples.

Each function returns a :class:`BoundReport` whose ``total`` is the plain
sum of its ``terms`` in insertion order. Inputs are validated and never
clipped; ``delta`` must lie strictly inside ``(0, 1)``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadDelta, BadGamma, BadParams, EmptyDataset, PreconditionMNotBigEnough, TraceExceedsBound
from .learner import RiskEstimate, svm_classification_stability
from .rng import make_rng

__all__ = [
    "BoundReport",
    "TraceBound",
    "chromatic_bound",
    "rad_generic_bound",
    "kernel_rademacher_trace_bound",
    "linear_rademacher_trace_bound",
    "rad_kernel_bound",
    "stab_generic_bound",
    "stab_ramp_bound",
    "stab_svm_bound",
    "er_max_degree_bound",
    "er_rad_kernel_bound",
    "empirical_rademacher_mc",
    "rademacher_draw",
]


@dataclass(frozen=True)
class BoundReport:
    name: str
    inputs: dict
    terms: dict
    total: float
    valid: bool = True
    notes: tuple[str, ...] = field(default=())

    @property
    def delta(self) -> float:
        return self.inputs["delta"]

    @property
    def vacuous(self) -> bool:
        """True when the bound on a [0, 1]-valued risk is at least 1."""
        return self.total >= 1.0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "inputs": dict(self.inputs),
            "terms": dict(self.terms),
            "total": self.total,
            "valid": self.valid,
            "notes": list(self.notes),
        }

    def to_json(self, **kw) -> str:
        # field order is fixed by construction, so no key sorting
        return json.dumps(self.to_dict(), **kw)


def _report(name, inputs, terms, valid=True, notes=()):
    total = 0.0
    for v in terms.values():
        total += v
    return BoundReport(name, inputs, terms, total, valid, tuple(notes))


def _check_delta(delta):
    if not (0.0 < delta < 1.0):
        raise BadDelta(f"delta must lie in (0, 1), got {delta}")


def _check_gamma(gamma):
    if not gamma > 0:
        raise BadGamma(f"gamma must be positive, got {gamma}")


def _check_m(m):
    if int(m) != m or m < 1:
        raise BadParams(f"m must be a positive integer, got {m}")


def chromatic_bound(rho: int) -> int:
    """Colors sufficient to split the examples into independent sets."""
    if rho < 0:
        raise BadParams(f"rho must be non-negative, got {rho}")
    return int(rho) + 1


def _chromatic_confidence(rho, m, delta):
    return math.sqrt((rho + 1) / (2.0 * m) * math.log(1.0 / delta))


def rad_generic_bound(remp: float, rad: float, rho: int, m: int, delta: float,
                      rad_source: str = "given") -> BoundReport:
    """Uniform bound for a class of [0, 1]-valued functions of pairs.

    ``remp + rad + sqrt((rho + 1) / (2m) * ln(1/delta))``; ``rad`` is the
    Rademacher complexity of the class composed with the labeler, supplied
    by the caller (``rad_source`` records where it came from).
    """
    _check_delta(delta)
    _check_m(m)
    if rad < 0:
        raise BadParams(f"Rademacher complexity must be non-negative, got {rad}")
    if rho < 0:
        raise BadParams(f"rho must be non-negative, got {rho}")
    valid = 0.0 <= remp <= 1.0
    return _report(
        "rademacher_generic",
        {"remp": remp, "rad": rad, "rho": rho, "m": m, "delta": delta, "rad_source": rad_source},
        {"empirical_risk": float(remp), "rademacher": float(rad),
         "confidence": _chromatic_confidence(rho, m, delta)},
        valid,
    )


@dataclass(frozen=True)
class TraceBound:
    trace_term: float
    relaxed: float


def kernel_rademacher_trace_bound(gram_trace: float, m: int, gamma: float, B: float,
                                  tol: float = 1e-9) -> TraceBound:
    """Ramp-loss Rademacher term from the Gram trace and its ``tr K <= m B^2`` relaxation.

    ``trace_term = 4 sqrt(tr K) / (gamma m)`` and ``relaxed = 4 B / (gamma sqrt m)``.
    """
    _check_gamma(gamma)
    _check_m(m)
    if gram_trace < 0:
        raise BadParams(f"Gram trace must be non-negative, got {gram_trace}")
    if gram_trace > m * B * B * (1 + tol) + tol:
        raise TraceExceedsBound(f"trace {gram_trace} exceeds m*B^2 = {m * B * B}")
    relaxed = 4.0 * B / (gamma * math.sqrt(m))
    trace_term = min(4.0 * math.sqrt(gram_trace) / (gamma * m), relaxed)
    return TraceBound(trace_term, relaxed)


def linear_rademacher_trace_bound(features, W: float) -> float:
    """``2 W sqrt(tr K) / m`` for the class ``{z -> <w, phi(z)> : ||w|| <= W}``."""
    F = np.asarray(features, dtype=np.float64)
    if F.ndim != 2 or F.shape[0] == 0:
        raise EmptyDataset("need at least one feature vector")
    return 2.0 * W * math.sqrt(float(np.einsum("ij,ij->", F, F))) / F.shape[0]


def rad_kernel_bound(remp_gamma: float, B: float, gamma: float, rho: int, m: int, delta: float) -> BoundReport:
    """0-1 risk bound for a kernel hypothesis with ``||phi|| <= B`` via the ramp loss.

    ``remp_gamma + 4B/(gamma sqrt m) + sqrt((rho + 1)/(2m) ln(1/delta))``.
    """
    _check_delta(delta)
    _check_gamma(gamma)
    _check_m(m)
    if B <= 0:
        raise BadParams(f"B must be positive, got {B}")
    if rho < 0:
        raise BadParams(f"rho must be non-negative, got {rho}")
    return _report(
        "rademacher_kernel",
        {"remp_gamma": remp_gamma, "B": B, "gamma": gamma, "rho": rho, "m": m, "delta": delta},
        {"empirical_risk": float(remp_gamma), "rademacher": 4.0 * B / (gamma * math.sqrt(m)),
         "confidence": _chromatic_confidence(rho, m, delta)},
        0.0 <= remp_gamma <= 1.0,
    )


def stab_generic_bound(remp: float, beta: float, rho: int, m: int, M: float, delta: float) -> BoundReport:
    """Risk bound for an algorithm with uniform stability ``beta`` and loss bounded by ``M``.

    ``remp + 4 rho beta + (4 m beta + M) sqrt(rho/m ln(1/delta))``.
    """
    _check_delta(delta)
    _check_m(m)
    if beta < 0:
        raise BadParams(f"beta must be non-negative, got {beta}")
    if not M > 0:
        raise BadParams(f"loss bound M must be positive, got {M}")
    if rho < 0:
        raise BadParams(f"rho must be non-negative, got {rho}")
    notes = [] if rho >= 1 else ["rho < 1: the stability argument assumes every instance may recur"]
    return _report(
        "stability_generic",
        {"remp": remp, "beta": beta, "rho": rho, "m": m, "M": M, "delta": delta},
        {"empirical_risk": float(remp), "stability": 4.0 * rho * beta,
         "confidence": (4.0 * m * beta + M) * math.sqrt(rho / m * math.log(1.0 / delta))},
        rho >= 1 and 0.0 <= remp <= M,
        notes,
    )


def stab_ramp_bound(remp_gamma: float, beta: float, gamma: float, rho: int, m: int, delta: float) -> BoundReport:
    """0-1 risk bound from classification stability ``beta`` through the ramp loss.

    Same as :func:`stab_generic_bound` with uniform stability ``beta/gamma``
    and ``M = 1``.
    """
    _check_gamma(gamma)
    base = stab_generic_bound(remp_gamma, beta / gamma, rho, m, 1.0, delta)
    inputs = {"remp_gamma": remp_gamma, "beta": beta, "gamma": gamma, "rho": rho, "m": m, "delta": delta}
    return BoundReport("stability_ramp", inputs, dict(base.terms), base.total, base.valid, base.notes)


def stab_svm_bound(remp_hinge: float, B: float, lam: float, rho: int, m: int, delta: float) -> BoundReport:
    """0-1 risk bound for the SVM with ``||phi|| <= B`` and regularization ``lam``.

    ``remp_hinge + 2 rho B^2/(lam m) + (2B^2/lam + 1) sqrt(rho/m ln(1/delta))``,
    i.e. the ramp bound at ``gamma = 1`` with ``beta = B^2/(2 lam m)``.
    """
    if not lam > 0:
        raise BadParams(f"lambda must be positive, got {lam}")
    if B <= 0:
        raise BadParams(f"B must be positive, got {B}")
    _check_m(m)
    beta = svm_classification_stability(B, lam, m)
    base = stab_ramp_bound(remp_hinge, beta, 1.0, rho, m, delta)
    inputs = {"remp_hinge": remp_hinge, "B": B, "lam": lam, "rho": rho, "m": m, "delta": delta, "beta": beta}
    valid = rho >= 1 and remp_hinge >= 0  # hinge risk is not capped at 1
    return BoundReport("stability_svm", inputs, dict(base.terms), base.total, valid, base.notes)


def er_max_degree_bound(n: int, m: int, delta: float) -> float:
    """High-probability cap on the maximum degree of a uniform G(n, m) graph.

    ``(2m/n) * (1 + sqrt(3n/(2m) * ln(n/delta)))``, holding with probability
    at least ``1 - delta``.
    """
    _check_delta(delta)
    if n < 2:
        raise BadParams(f"n must be >= 2, got {n}")
    _check_m(m)
    mean = 2.0 * m / n
    return mean * (1.0 + math.sqrt(3.0 * n / (2.0 * m) * math.log(n / delta)))


def er_rad_kernel_bound(remp_gamma: float, B: float, gamma: float, n: int, m: int, delta: float) -> BoundReport:
    """Kernel bound for a uniformly random labeler, stated in terms of ``n``.

    Splits ``delta`` between the Rademacher bound and the max-degree cap and
    uses ``1/m <= 2/n``; needs ``m >= n/2``. The constant
    ``C = 1 + sqrt(3n/(2m) ln(2n/delta))`` is recorded in the inputs.
    """
    _check_delta(delta)
    _check_gamma(gamma)
    _check_m(m)
    if n < 2:
        raise BadParams(f"n must be >= 2, got {n}")
    if 2 * m < n:
        raise PreconditionMNotBigEnough(f"needs m >= n/2, got m={m}, n={n}")
    C = 1.0 + math.sqrt(3.0 * n / (2.0 * m) * math.log(2.0 * n / delta))
    return _report(
        "rademacher_kernel_uniform_labeler",
        {"remp_gamma": remp_gamma, "B": B, "gamma": gamma, "n": n, "m": m, "delta": delta, "C": C},
        {"empirical_risk": float(remp_gamma), "rademacher": math.sqrt(32.0) * B / (gamma * math.sqrt(n)),
         "confidence": math.sqrt((C + 1.0) / n * math.log(2.0 / delta))},
        0.0 <= remp_gamma <= 1.0,
    )


def rademacher_draw(m: int, seed=None) -> np.ndarray:
    """``m`` fair +-1 signs."""
    return make_rng(seed).choice(np.array([-1, 1]), size=m)


def empirical_rademacher_mc(features, W: float, draws: int = 1000, seed=None) -> RiskEstimate:
    """Monte-Carlo empirical Rademacher complexity of the linear class ``||w|| <= W``.

    The supremum is closed-form: ``sup_w |sum s_i <w, phi_i>| = W ||sum s_i phi_i||``,
    so each draw contributes ``(2/m) W ||sum s_i phi_i||``.
    """
    F = np.asarray(features, dtype=np.float64)
    if F.ndim != 2 or F.shape[0] == 0:
        raise EmptyDataset("need at least one feature vector")
    if not W > 0:
        raise BadParams(f"W must be positive, got {W}")
    m = F.shape[0]
    rng = make_rng(seed)
    S = rng.choice(np.array([-1.0, 1.0]), size=(draws, m))
    vals = 2.0 * W / m * np.linalg.norm(S @ F, axis=1)
    se = float(vals.std(ddof=1) / math.sqrt(draws)) if draws > 1 else 0.0
    return RiskEstimate(float(vals.mean()), "rademacher", m, se)
