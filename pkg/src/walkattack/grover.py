"""Statevector Grover search over ``N`` items with a predicate oracle.

One iteration flips the phase of marked amplitudes and then reflects every
amplitude about the mean. From the uniform superposition, ``k`` iterations
give success probability ``sin^2((2k+1) theta)`` with
``sin theta = sqrt(m/N)``; :func:`closed_form_success` evaluates that
directly and is the only path for ``N > MAX_STATEVECTOR``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from math import asin, floor, pi, sin, sqrt

import numpy as np

from ._rng import derive_rng
from .errors import InvalidArgument

__all__ = [
    "MAX_STATEVECTOR",
    "GroverState",
    "OracleSpec",
    "init_uniform",
    "grover_iterate",
    "optimal_iterations",
    "success_probability",
    "closed_form_success",
    "sample_measurement",
    "success_curve",
    "curve_to_csv",
]

MAX_STATEVECTOR = 2**24


@dataclass(frozen=True)
class GroverState:
    N: int
    amplitudes: np.ndarray
    queries_used: int = 0


@dataclass(frozen=True)
class OracleSpec:
    """Marked subset of ``0 .. N-1`` given as a boolean mask."""

    mask: np.ndarray

    @property
    def N(self):
        return len(self.mask)

    @property
    def marked_count(self):
        return int(self.mask.sum())

    def __call__(self, x):
        return int(self.mask[x])

    @classmethod
    def from_predicate(cls, N, predicate):
        mask = np.fromiter((bool(predicate(x)) for x in range(N)), dtype=bool, count=N)
        return cls._checked(mask)

    @classmethod
    def from_marked(cls, N, marked):
        mask = np.zeros(N, dtype=bool)
        mask[np.asarray(list(marked), dtype=np.int64)] = True
        return cls._checked(mask)

    @classmethod
    def _checked(cls, mask):
        m = int(mask.sum())
        if not 1 <= m < len(mask):
            raise InvalidArgument(f"oracle must mark between 1 and N-1 items, got {m}")
        return cls(mask)


def init_uniform(N):
    if N < 2:
        raise InvalidArgument("search space needs N >= 2")
    if N > MAX_STATEVECTOR:
        raise InvalidArgument(f"N={N} exceeds the statevector cap; use closed_form_success")
    return GroverState(N, np.full(N, 1.0 / sqrt(N), dtype=complex))


def grover_iterate(s, oracle, k):
    """Apply ``k`` rounds of phase flip followed by inversion about the mean."""
    if oracle.N != s.N:
        raise InvalidArgument("oracle and state sizes differ")
    if k < 0:
        raise InvalidArgument("k must be non-negative")
    a = s.amplitudes.copy()
    mask = oracle.mask
    for _ in range(k):
        a[mask] *= -1
        a = 2 * a.mean() - a
    return replace(s, amplitudes=a, queries_used=s.queries_used + k)


def optimal_iterations(N, m):
    """``floor(pi/4 * sqrt(N/m))``, at least 1."""
    if not 1 <= m < N:
        raise InvalidArgument("need 1 <= m < N")
    return max(1, floor(pi / 4 * sqrt(N / m)))


def closed_form_success(N, m, k):
    theta = asin(sqrt(m / N))
    return sin((2 * k + 1) * theta) ** 2


def success_probability(s, oracle):
    """Total probability on marked items."""
    return float(np.sum(np.abs(s.amplitudes[oracle.mask]) ** 2))


def sample_measurement(s, seed):
    """Draw one index with probability ``|a_x|^2``."""
    rng = derive_rng(seed)
    cdf = np.cumsum(np.abs(s.amplitudes) ** 2)
    x = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    return min(x, s.N - 1)


def success_curve(N, m, kmax):
    """``(k, probability)`` rows for ``k = 0 .. kmax``.

    Uses the statevector when ``N`` fits, otherwise the closed form; the second
    return value says which.
    """
    if N > MAX_STATEVECTOR:
        return [(k, closed_form_success(N, m, k)) for k in range(kmax + 1)], True
    oracle = OracleSpec.from_marked(N, range(m))
    s = init_uniform(N)
    rows = [(0, success_probability(s, oracle))]
    for k in range(1, kmax + 1):
        s = grover_iterate(s, oracle, 1)
        rows.append((k, success_probability(s, oracle)))
    return rows, False


def curve_to_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "success_probability"])
    for k, p in rows:
        writer.writerow([k, repr(float(p))])
    return buf.getvalue()
