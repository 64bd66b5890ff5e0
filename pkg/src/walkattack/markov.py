"""Uniform random walks on a finite set with marked (absorbing) states.

States are 0-based indices ``0 .. n-1``. A :class:`MarkedWalk` keeps the
marked states first in its canonical ordering, so its transition matrix has
the block form::

    P = | I   0 |
        | P1  Q |

with ``Q`` the transient-to-transient block and ``P1`` the transient-to-marked
block. Absorption probabilities and expected absorption times solve linear
systems in ``I - Q``. For walks too large for dense storage the closed forms
of the uniform walk (``1/m`` and ``(n-1)/m``) are used instead.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ._rng import derive_rng
from .errors import InvalidArgument, MultiplicityError, NumericalFailure

__all__ = [
    "DENSE_LIMIT",
    "MarkedWalk",
    "StateClassification",
    "WalkTrajectory",
    "as_transition_matrix",
    "uniform_matrix",
    "build_uniform_walk",
    "classify_states",
    "absorption_probabilities",
    "expected_absorption_time",
    "n_step_matrix",
    "n_step_probability",
    "first_passage_distribution",
    "hit_probability_within",
    "stationary_distribution",
    "simulate_trajectory",
    "sample_absorption_times",
    "estimate_cover_time",
    "matrix_to_json",
    "matrix_from_json",
]

#: Largest state count for which dense matrices are materialized.
DENSE_LIMIT = 10_000

_ROW_SUM_TOL = 1e-12
_PIVOT_RTOL = 1e-12
_NULL_RTOL = 1e-10


def as_transition_matrix(P, atol=_ROW_SUM_TOL):
    """Validate ``P`` as a square row-stochastic matrix and return it as floats.

    Raises
    ------
    InvalidArgument
        If ``P`` is not square, has entries outside ``[0, 1]``, or a row does
        not sum to one within ``atol``.
    """
    P = np.asarray(P, dtype=float)
    if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] == 0:
        raise InvalidArgument(f"transition matrix must be square, got shape {P.shape}")
    if not np.all(np.isfinite(P)) or P.min() < 0.0 or P.max() > 1.0:
        raise InvalidArgument("transition probabilities must lie in [0, 1]")
    err = np.abs(P.sum(axis=1) - 1.0).max()
    if err > atol:
        raise InvalidArgument(f"rows must sum to 1 (max deviation {err:.3e})")
    return P


def uniform_matrix(n):
    """Transition matrix of the unmarked uniform walk: zero diagonal, ``1/(n-1)`` elsewhere."""
    if n < 2:
        raise InvalidArgument("uniform walk needs n >= 2")
    if n > DENSE_LIMIT:
        raise InvalidArgument(f"n={n} exceeds the dense limit {DENSE_LIMIT}")
    P = np.full((n, n), 1.0 / (n - 1))
    np.fill_diagonal(P, 0.0)
    return P


@dataclass(frozen=True)
class MarkedWalk:
    """Uniform walk on ``n`` states in which the ``marked`` states are absorbing.

    From an unmarked state the walk moves to any other state with probability
    ``1/(n-1)``; a marked state loops on itself with probability one. Dense
    blocks are built lazily and only for ``n <= DENSE_LIMIT``.
    """

    n: int
    marked: tuple

    @property
    def m(self):
        return len(self.marked)

    @property
    def transient(self):
        """Unmarked states in ascending order (the canonical transient order)."""
        mask = np.ones(self.n, dtype=bool)
        mask[list(self.marked)] = False
        return np.flatnonzero(mask)

    @property
    def ordering(self):
        """Permutation listing marked states first, then transient states."""
        return np.concatenate([np.array(self.marked, dtype=int), self.transient])

    @property
    def is_dense(self):
        return self.n <= DENSE_LIMIT

    def original_matrix(self):
        """Transition matrix in the original state order."""
        self._require_dense()
        P = uniform_matrix(self.n)
        idx = list(self.marked)
        P[idx, :] = 0.0
        P[idx, idx] = 1.0
        return P

    @property
    def P(self):
        """Transition matrix in canonical (marked-first) order."""
        order = self.ordering
        return self.original_matrix()[np.ix_(order, order)]

    @property
    def Q(self):
        m = self.m
        return self.P[m:, m:]

    @property
    def P1(self):
        m = self.m
        return self.P[m:, :m]

    def is_marked(self, state):
        return state in self.marked

    def _require_dense(self):
        if not self.is_dense:
            raise InvalidArgument(
                f"n={self.n} exceeds the dense limit {DENSE_LIMIT}; use the analytic path"
            )


def build_uniform_walk(n, marked):
    """Build the uniform walk on ``n`` states with absorbing set ``marked``.

    Parameters
    ----------
    n : int
        Number of states, at least 2.
    marked : iterable of int
        Marked state indices in ``0 .. n-1``; must be non-empty and proper.
    """
    n = int(n)
    if n < 2:
        raise InvalidArgument("a marked walk needs n >= 2")
    marked = tuple(sorted({int(x) for x in marked}))
    if not marked:
        raise InvalidArgument("marked set is empty: nothing to search for")
    if len(marked) >= n:
        raise InvalidArgument("every state is marked: nothing to search")
    if marked[0] < 0 or marked[-1] >= n:
        raise InvalidArgument(f"marked states must lie in 0..{n - 1}")
    return MarkedWalk(n=n, marked=marked)


@dataclass(frozen=True)
class StateClassification:
    transient: frozenset
    recurrent_classes: list


def classify_states(P):
    """Split states into transient ones and closed (recurrent) communicating classes.

    A strongly connected component of the graph of nonzero transitions is
    recurrent iff no edge leaves it.
    """
    P = as_transition_matrix(P)
    adj = csr_matrix(P > 0)
    ncomp, labels = connected_components(adj, directed=True, connection="strong")
    rows, cols = adj.nonzero()
    leaks = np.zeros(ncomp, dtype=bool)
    leaks[labels[rows][labels[rows] != labels[cols]]] = True
    transient = frozenset(int(i) for i in np.flatnonzero(leaks[labels]))
    classes = [
        frozenset(int(i) for i in np.flatnonzero(labels == c))
        for c in range(ncomp)
        if not leaks[c]
    ]
    classes.sort(key=min)
    return StateClassification(transient=transient, recurrent_classes=classes)


def _solve(A, b):
    """Solve ``A x = b`` by LU with partial pivoting, rejecting tiny pivots."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=True)
    row_max = np.abs(A).max(axis=1)
    scale = row_max.max() if row_max.size else 1.0
    pivots = np.abs(np.diag(lu))
    if np.any(pivots <= _PIVOT_RTOL * scale):
        raise NumericalFailure("I - Q is singular: the chain is not absorbing")
    return scipy.linalg.lu_solve((lu, piv), b)


def _pick_method(w, method):
    if method not in ("auto", "dense", "analytic"):
        raise InvalidArgument(f"unknown method {method!r}")
    if method == "auto":
        return "dense" if w.is_dense else "analytic"
    if method == "dense":
        w._require_dense()
    return method


def absorption_probabilities(w, j, method="auto"):
    """Probability of being absorbed in marked state ``j`` from each transient state.

    Solves ``(I - Q) f = p_j`` where ``p_j`` is the one-step column into ``j``.
    The result is indexed like ``w.transient``.

    Raises
    ------
    InvalidArgument
        If ``j`` is not marked.
    NumericalFailure
        If ``I - Q`` is numerically singular.
    """
    if j not in w.marked:
        raise InvalidArgument(f"state {j} is not marked")
    method = _pick_method(w, method)
    if method == "analytic":
        return np.full(w.n - w.m, 1.0 / w.m)
    Q = w.Q
    col = w.P1[:, w.marked.index(j)]
    return _solve(np.eye(len(Q)) - Q, col)


def expected_absorption_time(w, method="auto"):
    """Expected number of transitions until absorption, per transient state.

    Solves ``(I - Q) t = 1``.
    """
    method = _pick_method(w, method)
    if method == "analytic":
        return np.full(w.n - w.m, (w.n - 1) / w.m)
    Q = w.Q
    return _solve(np.eye(len(Q)) - Q, np.ones(len(Q)))


def n_step_matrix(P, steps):
    """``P`` raised to ``steps`` by repeated squaring."""
    P = as_transition_matrix(P)
    if steps < 0:
        raise InvalidArgument("steps must be non-negative")
    result = np.eye(len(P))
    base = P
    k = int(steps)
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


def n_step_probability(P, i, j, steps):
    """Probability of being in ``j`` after exactly ``steps`` transitions from ``i``."""
    return float(n_step_matrix(P, steps)[i, j])


def first_passage_distribution(P, i, j, kmax):
    """First-passage probabilities ``f_ij^(k)`` for ``k = 1 .. kmax``.

    Uses the taboo recursion ``f^(1) = P[:, j]`` and
    ``f^(k) = P[:, not j] @ f^(k-1)[not j]``. For ``i == j`` this is the
    first-return distribution.
    """
    P = as_transition_matrix(P)
    if kmax < 1:
        raise InvalidArgument("kmax must be >= 1")
    keep = np.ones(len(P), dtype=bool)
    keep[j] = False
    Pt = P[:, keep]
    g = P[:, j].copy()
    out = np.empty(kmax)
    out[0] = g[i]
    for k in range(1, kmax):
        g = Pt @ g[keep]
        out[k] = g[i]
    return out


def hit_probability_within(w, start, steps, method="auto"):
    """Probability that the walk started at ``start`` is absorbed within ``steps`` transitions."""
    if start in w.marked:
        return 1.0
    method = _pick_method(w, method)
    if method == "analytic":
        q = w.m / (w.n - 1)
        return float(-np.expm1(steps * np.log1p(-q))) if q < 1 else float(steps > 0)
    Pn = n_step_matrix(w.original_matrix(), steps)
    return float(Pn[start, list(w.marked)].sum())


def stationary_distribution(P):
    """The unique probability vector ``pi`` with ``pi @ P == pi``.

    Raises
    ------
    MultiplicityError
        If the left fixed-point space of ``P`` has dimension other than one,
        e.g. a walk with two or more absorbing states.
    """
    P = as_transition_matrix(P)
    A = P.T - np.eye(len(P))
    s = scipy.linalg.svdvals(A)
    tol = _NULL_RTOL * max(1.0, s[0])
    dim = int(np.sum(s <= tol))
    if dim != 1:
        raise MultiplicityError(
            f"stationary solution space has dimension {dim}; a unique limit needs exactly one"
        )
    v = scipy.linalg.null_space(A, rcond=tol / max(1.0, s[0]))[:, 0]
    pi = np.abs(v) / np.abs(v).sum()
    return pi


@dataclass(frozen=True)
class WalkTrajectory:
    start: int
    steps: tuple
    absorbed_at: Optional[tuple]
    rng_seed: int


class _UniformRows:
    """Inverse-CDF sampling from rows of the uniform walk, O(1) per draw."""

    def __init__(self, n, marked=()):
        self.n = n
        self.absorbing = np.zeros(n, dtype=bool)
        self.absorbing[list(marked)] = True

    def next(self, state, u):
        j = np.floor(u * (self.n - 1)).astype(np.int64)
        j = np.minimum(j, self.n - 2)
        return j + (j >= state)

    def next_scalar(self, state, u):
        j = min(int(u * (self.n - 1)), self.n - 2)
        return j + (j >= state)


class _DenseRows:
    """Inverse-CDF sampling from rows of an arbitrary dense matrix."""

    def __init__(self, P):
        P = as_transition_matrix(P)
        n = len(P)
        self.n = n
        self.absorbing = np.isclose(np.diag(P), 1.0, rtol=0.0, atol=_ROW_SUM_TOL)
        cdf = np.cumsum(P, axis=1)
        cdf[:, -1] = 1.0
        self._flat = (cdf + np.arange(n)[:, None]).ravel()
        self._last = np.array([np.flatnonzero(row > 0)[-1] for row in P])

    def next(self, state, u):
        state = np.asarray(state, dtype=np.int64)
        idx = np.searchsorted(self._flat, state + u, side="right") - state * self.n
        return np.minimum(idx, self._last[state])

    def next_scalar(self, state, u):
        return int(self.next(state, u))


def _sampler(walk_or_matrix):
    if isinstance(walk_or_matrix, MarkedWalk):
        return _UniformRows(walk_or_matrix.n, walk_or_matrix.marked)
    return _DenseRows(walk_or_matrix)


def simulate_trajectory(w, start, max_steps, seed):
    """Sample one walk from ``start`` until absorption or ``max_steps`` transitions.

    ``w`` may be a :class:`MarkedWalk` or a transition matrix; for a matrix
    the absorbing states are those with ``P[i, i] == 1``.
    """
    sampler = _sampler(w)
    if not 0 <= start < sampler.n:
        raise InvalidArgument(f"start {start} out of range")
    if sampler.absorbing[start]:
        return WalkTrajectory(start=start, steps=(), absorbed_at=(start, 0), rng_seed=seed)
    rng = derive_rng(seed)
    absorbing = sampler.absorbing.tolist()
    step_once = sampler.next_scalar
    path = []
    state = start
    absorbed = None
    chunk = []
    pos = 0
    for t in range(1, max_steps + 1):
        if pos == len(chunk):
            chunk = rng.random(min(4096, max_steps)).tolist()
            pos = 0
        state = step_once(state, chunk[pos])
        pos += 1
        path.append(state)
        if absorbing[state]:
            absorbed = (state, t)
            break
    return WalkTrajectory(start=start, steps=tuple(path), absorbed_at=absorbed, rng_seed=seed)


def sample_absorption_times(w, start, trials, seed, max_steps=None, return_states=False):
    """Absorption times of ``trials`` independent walks from ``start``.

    Walks are advanced together, one transition per sweep, so the cost is
    proportional to the total number of transitions. Walks that are still
    transient after ``max_steps`` are reported as ``-1``. With
    ``return_states`` the absorbing state reached (or ``-1``) is returned too.
    """
    sampler = _sampler(w)
    rng = derive_rng(seed)
    times = np.full(trials, -1, dtype=np.int64)
    final = np.full(trials, -1, dtype=np.int64)
    if sampler.absorbing[start]:
        times[:] = 0
        final[:] = start
        return (times, final) if return_states else times
    states = np.full(trials, start, dtype=np.int64)
    active = np.arange(trials)
    t = 0
    while active.size and (max_steps is None or t < max_steps):
        t += 1
        states = sampler.next(states, rng.random(active.size))
        done = sampler.absorbing[states]
        times[active[done]] = t
        final[active[done]] = states[done]
        active = active[~done]
        states = states[~done]
    return (times, final) if return_states else times


def estimate_cover_time(P, start, trials, seed, batch=20_000):
    """Monte Carlo estimate of the expected steps to visit every state.

    Parameters
    ----------
    P : int or array_like
        A transition matrix, or an integer ``n`` for the unmarked uniform walk.

    Returns
    -------
    (mean, stderr) : tuple of float

    Raises
    ------
    InvalidArgument
        If the chain is not irreducible (the cover time would be infinite).
    """
    if np.isscalar(P):
        n = int(P)
        if n < 2:
            raise InvalidArgument("cover time needs n >= 2")
        sampler = _UniformRows(n)
    else:
        P = as_transition_matrix(P)
        cls = classify_states(P)
        if cls.transient or len(cls.recurrent_classes) != 1:
            raise InvalidArgument("chain is not irreducible; cover time is infinite")
        sampler = _DenseRows(P)
        sampler.absorbing[:] = False
    n = sampler.n
    rng = derive_rng(seed)
    results = []
    for lo in range(0, trials, batch):
        size = min(batch, trials - lo)
        visited = np.zeros((size, n), dtype=bool)
        visited[:, start] = True
        remaining = np.full(size, n - 1)
        states = np.full(size, start, dtype=np.int64)
        times = np.zeros(size, dtype=np.int64)
        active = np.arange(size)
        t = 0
        while active.size:
            t += 1
            states = sampler.next(states, rng.random(active.size))
            fresh = ~visited[active, states]
            visited[active[fresh], states[fresh]] = True
            remaining[active[fresh]] -= 1
            done = remaining[active] == 0
            times[active[done]] = t
            active = active[~done]
            states = states[~done]
        results.append(times)
    times = np.concatenate(results)
    return float(times.mean()), float(times.std(ddof=1) / np.sqrt(len(times)))


def matrix_to_json(P):
    """Row-major JSON array of numbers."""
    return json.dumps(np.asarray(P, dtype=float).tolist())


def matrix_from_json(text):
    return as_transition_matrix(json.loads(text))
