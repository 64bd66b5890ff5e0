"""Discrete-time Hadamard walk on the integer line.

One step is ``U = S (H x I)``: the real Hadamard coin
``H|0> = (|0> + |1>)/sqrt2``, ``H|1> = (|0> - |1>)/sqrt2`` acts at every
position, then the shift moves coin-0 amplitude one site right and coin-1
amplitude one site left.

Two storage modes are supported. The float mode keeps complex128 amplitudes.
The exact mode keeps Gaussian-integer numerators with a common scale
``2**(-e/2)``, so every probability is an exact :class:`~fractions.Fraction`.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, replace
from fractions import Fraction
from math import comb, sqrt

import numpy as np

from .errors import BudgetExceeded, InvalidArgument

__all__ = [
    "INITIAL_STATES",
    "QuantumWalkState",
    "PositionDistribution",
    "initial_state",
    "step",
    "evolve",
    "distribution",
    "closed_form_amplitude",
    "closed_form_distribution",
    "spread_statistics",
]

INITIAL_STATES = ("coin0", "coin1", "balanced-real", "balanced-imag")

_INV_SQRT2 = 1.0 / sqrt(2.0)


@dataclass(frozen=True)
class QuantumWalkState:
    """Coin amplitudes on the window ``[-budget, budget]``.

    Float mode: ``amps`` is complex with shape ``(2, 2*budget + 1)``, row 0 the
    coin-0 component. Exact mode: ``amps`` is an object array of shape
    ``(2, 2, 2*budget + 1)`` holding integer real/imaginary numerators and the
    amplitude is ``(re + 1j*im) * 2**(-scale_exp/2)``.
    """

    budget: int
    amps: np.ndarray
    steps_taken: int = 0
    exact: bool = False
    scale_exp: int = 0

    @property
    def positions(self):
        return np.arange(-self.budget, self.budget + 1)

    def amplitude(self, coin, position):
        k = position + self.budget
        if not 0 <= k < 2 * self.budget + 1:
            return 0j
        if self.exact:
            re, im = self.amps[coin, 0, k], self.amps[coin, 1, k]
            return complex(re, im) * 2.0 ** (-self.scale_exp / 2)
        return complex(self.amps[coin, k])

    def norm(self):
        """Total probability; a ``Fraction`` in exact mode."""
        if self.exact:
            total = sum(int(x) * int(x) for x in self.amps.ravel())
            return Fraction(total, 2**self.scale_exp)
        return float(np.sum(np.abs(self.amps) ** 2))


@dataclass(frozen=True)
class PositionDistribution:
    positions: np.ndarray
    probabilities: np.ndarray

    def __getitem__(self, position):
        hit = np.flatnonzero(self.positions == position)
        return self.probabilities[hit[0]] if hit.size else 0

    def as_dict(self, drop_zeros=True):
        return {
            int(i): p
            for i, p in zip(self.positions, self.probabilities)
            if not (drop_zeros and p == 0)
        }

    def total(self):
        return sum(self.probabilities) if self.probabilities.dtype == object else float(self.probabilities.sum())

    def to_json(self, closed_form=None):
        rows = [
            {"position": int(i), "probability": float(p)}
            for i, p in zip(self.positions, self.probabilities)
        ]
        if closed_form is not None:
            for row, c in zip(rows, closed_form):
                row["closed_form"] = float(c)
        return json.dumps(rows)

    def to_csv(self, closed_form=None):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = ["position", "probability"] + (["closed_form"] if closed_form is not None else [])
        writer.writerow(header)
        for k, (i, p) in enumerate(zip(self.positions, self.probabilities)):
            row = [int(i), repr(float(p))]
            if closed_form is not None:
                row.append(repr(float(closed_form[k])))
            writer.writerow(row)
        return buf.getvalue()


def initial_state(kind, budget, exact=False):
    """State localized at position 0 with the named coin.

    ``coin0`` and ``coin1`` are the basis coins. ``balanced-real`` is
    ``(|0> - |1>)/sqrt2`` and ``balanced-imag`` is ``(|0> - i|1>)/sqrt2``; only
    the latter gives a mirror-symmetric walk under the real Hadamard coin.
    """
    if kind not in INITIAL_STATES:
        raise InvalidArgument(f"unknown initial state {kind!r}; choose from {INITIAL_STATES}")
    if budget < 1:
        raise InvalidArgument("budget must be >= 1")
    width = 2 * budget + 1
    if exact:
        amps = np.zeros((2, 2, width), dtype=object)
        amps[...] = 0
        coin0, coin1 = {
            "coin0": ((1, 0), (0, 0)),
            "coin1": ((0, 0), (1, 0)),
            "balanced-real": ((1, 0), (-1, 0)),
            "balanced-imag": ((1, 0), (0, -1)),
        }[kind]
        amps[0, :, budget] = coin0
        amps[1, :, budget] = coin1
        scale = 0 if kind in ("coin0", "coin1") else 1
        return QuantumWalkState(budget, amps, 0, exact=True, scale_exp=scale)
    amps = np.zeros((2, width), dtype=complex)
    amps[:, budget] = {
        "coin0": (1.0, 0.0),
        "coin1": (0.0, 1.0),
        "balanced-real": (_INV_SQRT2, -_INV_SQRT2),
        "balanced-imag": (_INV_SQRT2, -1j * _INV_SQRT2),
    }[kind]
    return QuantumWalkState(budget, amps)


def step(s):
    """Apply one coin-then-shift step."""
    if s.steps_taken >= s.budget:
        raise BudgetExceeded(f"window of half-width {s.budget} is exhausted")
    a0, a1 = s.amps[0], s.amps[1]
    up = a0 + a1
    down = a0 - a1
    new = np.zeros_like(s.amps)
    # coin-0 moves right, coin-1 moves left
    new[0, ..., 1:] = up[..., :-1]
    new[1, ..., :-1] = down[..., 1:]
    if s.exact:
        return replace(s, amps=new, steps_taken=s.steps_taken + 1, scale_exp=s.scale_exp + 1)
    return replace(s, amps=new * _INV_SQRT2, steps_taken=s.steps_taken + 1)


def evolve(s, n):
    """Apply ``n`` steps."""
    if n < 0:
        raise InvalidArgument("n must be non-negative")
    if s.steps_taken + n > s.budget:
        raise BudgetExceeded(
            f"{n} more steps would exceed the window (taken {s.steps_taken}, budget {s.budget})"
        )
    for _ in range(n):
        s = step(s)
    return s


def distribution(s):
    """Position probabilities ``|amp0(i)|^2 + |amp1(i)|^2``."""
    if s.exact:
        sq = s.amps[:, 0, :] ** 2 + s.amps[:, 1, :] ** 2
        num = sq[0] + sq[1]
        den = 2**s.scale_exp
        probs = np.array([Fraction(int(x), den) for x in num], dtype=object)
    else:
        probs = np.sum(np.abs(s.amps) ** 2, axis=0)
    return PositionDistribution(s.positions, probs)


def _amplitude_numerators(n, i):
    """Integer numerators ``(u, v)`` of ``U^n |0>|0>`` at position ``i``.

    A path of ``n`` coin outcomes with ``R = (n+i)/2`` right moves and
    ``L = n - R`` left moves carries sign ``(-1)`` per ``1 -> 1`` coin repeat.
    Grouping paths by their number ``k`` of coin-1 runs gives

        u = sum_k C(R, k)   C(L-1, k-1) (-1)^(L-k)     (ends on coin 0)
        v = sum_k C(R, k-1) C(L-1, k-1) (-1)^(L-k)     (ends on coin 1)

    with the common factor ``2^(-n/2)`` left out.
    """
    if (n + i) % 2 or abs(i) > n:
        return 0, 0
    right = (n + i) // 2
    left = n - right
    if left == 0:
        return 1, 0
    u = v = 0
    for k in range(1, left + 1):
        sign = -1 if (left - k) % 2 else 1
        runs = comb(left - 1, k - 1)
        u += sign * comb(right, k) * runs
        v += sign * comb(right, k - 1) * runs
    return u, v


def closed_form_amplitude(n, i):
    """Amplitudes ``(u_i, v_i)`` of the coin-0 walk after ``n`` steps, as floats."""
    u, v = _amplitude_numerators(n, i)
    scale = 2.0 ** (-n / 2)
    return u * scale, v * scale


def closed_form_distribution(n, i, exact=False):
    """Probability of position ``i`` after ``n`` steps from ``|0> x |0>``, without simulating."""
    if n < 0:
        raise InvalidArgument("n must be non-negative")
    if (n + i) % 2 or abs(i) > n:
        return Fraction(0) if exact else 0.0
    if abs(i) == n:
        p = Fraction(1, 2**n)
    else:
        u, v = _amplitude_numerators(n, i)
        p = Fraction(u * u + v * v, 2**n)
    return p if exact else float(p)


def spread_statistics(d):
    """Mean and standard deviation of position under ``d``."""
    p = np.asarray(d.probabilities, dtype=float)
    if p.size == 0 or p.sum() == 0:
        raise InvalidArgument("empty distribution")
    x = np.asarray(d.positions, dtype=float)
    p = p / p.sum()
    mean = float(np.dot(p, x))
    var = float(np.dot(p, (x - mean) ** 2))
    return mean, sqrt(max(var, 0.0))
