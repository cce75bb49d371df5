"""Correlation, least-squares fit and single-feature KNN regression."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, TypeVar

import numpy as np

T = TypeVar("T")


class DegenerateInputError(ValueError):
    """Statistic undefined for the given data (e.g. zero variance)."""


class InvalidConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class PairedSamples:
    xs: tuple[float, ...]
    ys: tuple[float, ...]
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "xs", tuple(float(x) for x in self.xs))
        object.__setattr__(self, "ys", tuple(float(y) for y in self.ys))
        if len(self.xs) != len(self.ys):
            raise ValueError(f"length mismatch: {len(self.xs)} xs vs {len(self.ys)} ys")
        if self.labels is not None and len(self.labels) != len(self.xs):
            raise ValueError("labels must match sample length")

    def __len__(self) -> int:
        return len(self.xs)


@dataclass(frozen=True)
class RegressionFit:
    slope: float
    intercept: float
    r2: float


def _arrays(xs: Sequence[float], ys: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("xs and ys must be 1-D sequences of equal length")
    return x, y


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    x, y = _arrays(xs, ys)
    if x.size < 2:
        raise DegenerateInputError("pearson needs at least two samples")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateInputError("zero variance in one of the series")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def _betacf(a: float, b: float, x: float) -> float:
    # modified Lentz evaluation of the incomplete-beta continued fraction
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    d = tiny if abs(d) < tiny else d
    d = 1.0 / d
    h = d
    for m in range(1, 10_000):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def t_test_pvalue(r: float, n: int) -> float:
    """Two-sided p-value of a correlation ``r`` over ``n`` samples (t test, n-2 dof)."""
    if n < 3:
        raise DegenerateInputError("p-value needs at least three samples")
    if abs(r) >= 1.0:
        return 0.0
    df = n - 2
    t2 = r * r * df / (1.0 - r * r)
    return betainc(df / 2.0, 0.5, df / (df + t2))


def pearson_pvalue(xs: Sequence[float], ys: Sequence[float]) -> float:
    return t_test_pvalue(pearson(xs, ys), len(xs))


def linear_fit(xs: Sequence[float], ys: Sequence[float]) -> RegressionFit:
    x, y = _arrays(xs, ys)
    if x.size < 2:
        raise DegenerateInputError("linear fit needs at least two samples")
    dx = x - x.mean()
    sxx = float(dx @ dx)
    if sxx == 0.0:
        raise DegenerateInputError("zero variance in xs")
    dy = y - y.mean()
    slope = float(dx @ dy) / sxx
    intercept = float(y.mean() - slope * x.mean())
    ss_tot = float(dy @ dy)
    if ss_tot == 0.0:
        return RegressionFit(slope, intercept, 0.0)
    resid = y - (slope * x + intercept)
    return RegressionFit(slope, intercept, 1.0 - float(resid @ resid) / ss_tot)


def r2_score(y_true: Sequence[float], y_pred: Sequence[float]) -> float:
    t, p = _arrays(y_true, y_pred)
    if t.size < 2:
        raise DegenerateInputError("r2 needs at least two samples")
    d = t - t.mean()
    ss_tot = float(d @ d)
    if ss_tot == 0.0:
        raise DegenerateInputError("zero variance in y_true")
    resid = t - p
    return 1.0 - float(resid @ resid) / ss_tot


def knn_fit_predict(
    train_x: Sequence[float], train_y: Sequence[float], test_x: Sequence[float], k: int = 5
) -> np.ndarray:
    """Unweighted mean of the k nearest training targets (absolute distance).

    Equal distances go to the lower training index.
    """
    x, y = _arrays(train_x, train_y)
    if not 1 <= k <= x.size:
        raise InvalidConfigurationError(f"k={k} needs 1 <= k <= {x.size} training samples")
    queries = np.asarray(test_x, dtype=float)
    out = np.empty(queries.shape[0])
    for i, q in enumerate(queries):
        nearest = np.argsort(np.abs(x - q), kind="stable")[:k]
        out[i] = y[nearest].mean()
    return out


def train_test_split(rows: Sequence[T], train_fraction: float = 0.8, seed: int = 42) -> tuple[list[T], list[T]]:
    """Seeded shuffle, then split; both sides are kept nonempty."""
    n = len(rows)
    if n < 2:
        raise ValueError("need at least two rows to split")
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must lie strictly between 0 and 1")
    order = np.random.default_rng(seed).permutation(n)
    n_train = min(max(math.floor(train_fraction * n + 0.5), 1), n - 1)
    return [rows[i] for i in order[:n_train]], [rows[i] for i in order[n_train:]]


def knn_r2(
    xs: Sequence[float], ys: Sequence[float], k: int = 5, train_fraction: float = 0.8, seed: int = 42
) -> float:
    """Held-out R^2 of a single-feature KNN regressor."""
    rows = list(zip(xs, ys))
    train, test = train_test_split(rows, train_fraction, seed)
    tx, ty = zip(*train)
    qx, qy = zip(*test)
    return r2_score(qy, knn_fit_predict(tx, ty, qx, k))
