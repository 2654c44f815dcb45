"""Linear pairwise SVM, losses, risk estimates and stability probes.

The learner minimizes

    P(w) = (1/m) * sum_i max(0, 1 - y_i <w, phi_i>) + lam * ||w||^2

over linear hypotheses ``h(z) = <w, phi(z)>`` without a bias term. ``P`` is
``2*lam``-strongly convex, so a certified optimality gap ``P(w) - P*``
converts into a distance ``||w - w*|| <= sqrt(gap / lam)`` and, for features
of norm at most ``B``, into a bound ``tau_h = B * sqrt(gap / lam)`` on how far
any prediction can be from the exact minimizer's.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadGamma, BadParams, Divergence, EmptyDataset
from .relations import InstanceDistribution, PairDataset, RelationSpec, pair_feature_map
from .rng import make_rng

__all__ = [
    "LossKind",
    "ZERO_ONE",
    "HINGE",
    "ramp",
    "loss",
    "Hypothesis",
    "FitInfo",
    "RiskEstimate",
    "StabilityProbe",
    "svm_objective",
    "fit_hinge",
    "train_svm",
    "empirical_risk",
    "true_risk_mc",
    "defect",
    "svm_classification_stability",
    "classification_stability_probe",
    "uniform_stability_from_classification",
]


@dataclass(frozen=True)
class LossKind:
    name: str
    gamma: float | None = None

    def __post_init__(self):
        if self.name not in ("zero_one", "ramp", "hinge"):
            raise BadParams(f"unknown loss {self.name!r}")
        if self.name == "ramp" and not (self.gamma is not None and self.gamma > 0):
            raise BadGamma(f"ramp loss needs gamma > 0, got {self.gamma}")

    @property
    def bound(self) -> float:
        """Upper bound M on the loss (infinite for the hinge)."""
        return math.inf if self.name == "hinge" else 1.0

    def __str__(self):
        return f"ramp(gamma={self.gamma:g})" if self.name == "ramp" else self.name


ZERO_ONE = LossKind("zero_one")
HINGE = LossKind("hinge")


def ramp(gamma: float) -> LossKind:
    return LossKind("ramp", float(gamma))


def _as_kind(kind) -> LossKind:
    if isinstance(kind, LossKind):
        return kind
    if isinstance(kind, str):
        return LossKind(kind)
    name, gamma = kind
    return LossKind(name, gamma)


def sign(v) -> np.ndarray:
    """Sign with ``sign(0) = +1``."""
    return np.where(np.asarray(v) >= 0, 1, -1)


def loss(kind, y, h_value):
    """Elementwise loss of real-valued predictions ``h_value`` on labels ``y``."""
    kind = _as_kind(kind)
    y = np.asarray(y, dtype=np.float64)
    v = np.asarray(h_value, dtype=np.float64)
    if kind.name == "zero_one":
        out = (sign(v) != y).astype(np.float64)
    elif kind.name == "hinge":
        out = np.maximum(0.0, 1.0 - y * v)
    else:
        out = np.clip(1.0 - y * v / kind.gamma, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class FitInfo:
    solver: str
    lam: float
    objective: float
    tau_obj: float  # certified bound on objective - optimum
    tau_h: float  # certified bound on |h(z) - h*(z)| for ||phi(z)|| <= norm_bound
    norm_bound: float
    iterations: int
    converged: bool
    history: tuple[float, ...] = ()  # best-so-far objective per epoch/iteration


@dataclass(frozen=True, eq=False)
class Hypothesis:
    weights: np.ndarray
    feature_mode: str
    gamma: float | None = None
    info: FitInfo | None = None

    def __eq__(self, other):
        if not isinstance(other, Hypothesis):
            return NotImplemented
        return (self.feature_mode == other.feature_mode and self.gamma == other.gamma
                and np.array_equal(self.weights, other.weights))

    __hash__ = None

    def decision(self, features) -> np.ndarray:
        return np.asarray(features, dtype=np.float64) @ self.weights

    def predict(self, features) -> np.ndarray:
        return sign(self.decision(features))

    def pair_values(self, X, Xp) -> np.ndarray:
        """``h(x, x')`` for paired rows of ``X`` and ``Xp``."""
        return self.decision(pair_feature_map(X, Xp, self.feature_mode))

    def to_json(self) -> dict:
        out = {"weights": [float(w) for w in self.weights], "feature_mode": self.feature_mode}
        if self.gamma is not None:
            out["gamma"] = self.gamma
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Hypothesis":
        return cls(np.asarray(obj["weights"], dtype=np.float64), obj["feature_mode"], obj.get("gamma"))


@dataclass(frozen=True)
class RiskEstimate:
    value: float
    loss: str
    size: int
    stderr: float = 0.0


def svm_objective(w, features, labels, lam: float, denom: int | None = None) -> float:
    features = np.asarray(features, dtype=np.float64)
    denom = len(labels) if denom is None else denom
    margins = np.asarray(labels) * (features @ w)
    return float(np.maximum(0.0, 1.0 - margins).sum() / denom + lam * np.dot(w, w))


def _dual_cd(X, y, lam, denom, tol, max_epochs, rng):
    # C-SVM form: 0.5||w||^2 + C * sum hinge with C = 1/(2 lam denom); P = 2 lam * P_C
    m, d = X.shape
    C = 1.0 / (2.0 * lam * denom)
    Q = np.einsum("ij,ij->i", X, X)
    alpha = np.where(Q > 0, 0.0, C)  # zero features: hinge is constant 1, alpha = C is optimal
    w = np.zeros(d)
    Xl = X.tolist()
    history = []
    best = math.inf
    gap = math.inf
    epoch = 0
    for epoch in range(1, max_epochs + 1):
        for i in rng.permutation(m).tolist():
            qi = Q[i]
            if qi == 0.0:
                continue
            xi = Xl[i]
            yi = y[i]
            grad = yi * sum(a * b for a, b in zip(w, xi)) - 1.0
            a_old = alpha[i]
            a_new = min(max(a_old - grad / qi, 0.0), C)
            if a_new != a_old:
                alpha[i] = a_new
                step = (a_new - a_old) * yi
                w = [a + step * b for a, b in zip(w, xi)]
        w_arr = (alpha * y) @ X
        w = w_arr.tolist()
        hinge = np.maximum(0.0, 1.0 - y * (X @ w_arr)).sum()
        primal_c = 0.5 * np.dot(w_arr, w_arr) + C * hinge
        dual_c = alpha.sum() - 0.5 * np.dot(w_arr, w_arr)
        gap = max(0.0, 2.0 * lam * (primal_c - dual_c))
        obj = 2.0 * lam * primal_c
        if not math.isfinite(obj):
            raise Divergence("non-finite objective in dual coordinate ascent")
        best = min(best, obj)
        history.append(best)
        if gap <= tol:
            break
    return np.asarray(w), epoch, gap, history, gap <= tol


def _subgradient(X, y, lam, denom, iters):
    m, d = X.shape
    radius = 1.0 / math.sqrt(lam)
    w = np.zeros(d)
    w_avg = np.zeros(d)
    best_w, best = w_avg.copy(), svm_objective(w_avg, X, y, lam, denom)
    history = []
    for t in range(1, iters + 1):
        active = y * (X @ w) < 1.0
        g = -(y[active] @ X[active]) / denom + 2.0 * lam * w
        w = w - g / (2.0 * lam * t)
        nrm = np.linalg.norm(w)
        if nrm > radius:
            w *= radius / nrm
        w_avg += (w - w_avg) / t
        obj = svm_objective(w_avg, X, y, lam, denom)
        if not math.isfinite(obj):
            raise Divergence("non-finite objective in subgradient descent")
        if obj < best:
            best, best_w = obj, w_avg.copy()
        history.append(best)
    # averaged subgradient with step 1/(mu t): f(w_avg) - f* <= G^2 (1 + ln T) / (2 mu T)
    G = np.linalg.norm(X, axis=1).max(initial=0.0) * m / denom + 2.0 * lam * radius
    tau = G**2 * (1.0 + math.log(iters)) / (2.0 * 2.0 * lam * iters)
    return best_w, iters, tau, history


def fit_hinge(features, labels, lam: float, *, norm_bound: float | None = None, denom: int | None = None,
              solver: str = "dual_cd", tol: float = 1e-10, max_epochs: int = 2000, iters: int = 20000,
              seed=0) -> tuple[np.ndarray, FitInfo]:
    """Minimize the regularized hinge objective on raw arrays.

    ``denom`` overrides the ``1/m`` weighting of the loss sum; the stability
    probe uses it to retrain on ``m - 1`` examples with the original weight.
    """
    X = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    if X.ndim != 2 or len(y) == 0:
        raise EmptyDataset("training needs at least one example")
    if len(y) != X.shape[0]:
        raise BadParams("features and labels differ in length")
    if not lam > 0:
        raise BadParams(f"lambda must be positive, got {lam}")
    denom = len(y) if denom is None else int(denom)
    B = float(np.linalg.norm(X, axis=1).max()) if norm_bound is None else float(norm_bound)
    if solver == "dual_cd":
        w, n_it, tau, hist, ok = _dual_cd(X, y, lam, denom, tol, max_epochs, make_rng(seed))
    elif solver == "subgradient":
        w, n_it, tau, hist = _subgradient(X, y, lam, denom, iters)
        ok = tau <= tol
    else:
        raise BadParams(f"unknown solver {solver!r}")
    obj = svm_objective(w, X, y, lam, denom)
    info = FitInfo(solver, float(lam), obj, float(tau), B * math.sqrt(tau / lam), B, n_it, bool(ok), tuple(hist))
    return w, info


def train_svm(data: PairDataset, lam: float, **solver_params) -> Hypothesis:
    """Train the regularized linear SVM on a :class:`PairDataset`."""
    if data.m == 0:
        raise EmptyDataset("training needs at least one labeled pair")
    solver_params.setdefault("norm_bound", data.norm_bound)
    w, info = fit_hinge(data.features, data.labels, lam, **solver_params)
    return Hypothesis(w, data.feature_mode, info=info)


def empirical_risk(h: Hypothesis, data: PairDataset, kind=ZERO_ONE) -> RiskEstimate:
    if data.m == 0:
        raise EmptyDataset("empirical risk of an empty dataset")
    kind = _as_kind(kind)
    vals = loss(kind, data.labels, h.decision(data.features))
    return RiskEstimate(float(np.mean(vals)), str(kind), data.m)


def true_risk_mc(h: Hypothesis, dist: InstanceDistribution, rel: RelationSpec, mode: str | None = None,
                 N: int = 10_000, seed=None, kind=ZERO_ONE) -> RiskEstimate:
    """Monte-Carlo risk over ``N`` fresh pairs with both coordinates i.i.d. from ``dist``."""
    if N < 1:
        raise BadParams(f"N must be >= 1, got {N}")
    kind = _as_kind(kind)
    mode = h.feature_mode if mode is None else mode
    rng = make_rng(seed)
    X = dist.sample(N, rng)
    Xp = dist.sample(N, rng)
    y = rel.labels(X, Xp)
    vals = np.atleast_1d(loss(kind, y, h.decision(pair_feature_map(X, Xp, mode))))
    se = float(vals.std(ddof=1) / math.sqrt(N)) if N > 1 else 0.0
    return RiskEstimate(float(vals.mean()), str(kind), int(N), se)


def defect(h: Hypothesis, data: PairDataset, dist: InstanceDistribution, rel: RelationSpec,
           mode: str | None = None, N: int = 10_000, seed=None, kind=ZERO_ONE) -> float:
    """Estimated true risk minus training risk (may be negative)."""
    return true_risk_mc(h, dist, rel, mode, N, seed, kind).value - empirical_risk(h, data, kind).value


def svm_classification_stability(B: float, lam: float, m: int) -> float:
    """``B^2 / (2 lam m)``: sup change of ``h`` when one example is removed."""
    if not lam > 0 or m < 1:
        raise BadParams("need lam > 0 and m >= 1")
    return B * B / (2.0 * lam * m)


def uniform_stability_from_classification(beta: float, gamma: float) -> float:
    """Uniform stability w.r.t. the ramp loss of width ``gamma``."""
    if not gamma > 0:
        raise BadGamma(f"gamma must be positive, got {gamma}")
    if beta < 0:
        raise BadParams(f"beta must be non-negative, got {beta}")
    return beta / gamma


@dataclass(frozen=True)
class StabilityProbe:
    observed_sup: float  # max |h_D - h_D'| over the probe pairs
    exact_sup: float  # B * max ||w_D - w_D'||: the sup over all ||phi|| <= B
    certified: float  # B^2 / (2 lam m)
    slack: float  # 2 * max tau_h over the fits involved
    removed: tuple[int, ...]

    @property
    def holds(self) -> bool:
        return self.exact_sup <= self.certified + self.slack


def classification_stability_probe(data: PairDataset, lam: float, probe_points: int = 200, removals: int = 20,
                                   seed=None, **solver_params) -> StabilityProbe:
    """Retrain with single examples removed and measure how far ``h`` moves.

    The reduced problems keep the ``1/m`` loss weighting of the full one,
    which is the setting in which ``B^2/(2 lam m)`` is guaranteed.
    """
    m = data.m
    if m < 2:
        raise EmptyDataset("stability probe needs at least two examples")
    rng = make_rng(seed)
    B = data.norm_bound
    h_full = train_svm(data, lam, **solver_params)
    removed = rng.choice(m, size=min(removals, m), replace=False)
    n = data.instances.shape[0]
    a = rng.integers(0, n, size=probe_points)
    b = rng.integers(0, n, size=probe_points)
    probe = pair_feature_map(data.instances[a], data.instances[b], data.feature_mode)
    base = h_full.decision(probe)
    observed = exact = tau = 0.0
    for e in removed.tolist():
        h_e = train_svm(data.without(e), lam, denom=m, **solver_params)
        observed = max(observed, float(np.abs(h_e.decision(probe) - base).max()))
        exact = max(exact, B * float(np.linalg.norm(h_e.weights - h_full.weights)))
        tau = max(tau, h_e.info.tau_h)
    slack = 2.0 * max(tau, h_full.info.tau_h)
    return StabilityProbe(observed, exact, svm_classification_stability(B, lam, m), slack,
                          tuple(int(e) for e in removed))
