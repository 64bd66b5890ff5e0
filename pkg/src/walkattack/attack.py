"""Key-search attacks on toy ciphers driven by a uniform walk or by Grover search.

An attack fixes a candidate subset ``A`` of the key space, a start key
``x0`` in ``A``, a per-walk step budget and a number of independent repeats.
Keys in ``A`` consistent with every constraint of the scenario are the
marked (absorbing) states. The classical walker moves uniformly between
distinct keys of ``A``; the Grover walker runs the optimal number of oracle
queries and measures. Every reported key is re-checked by direct encryption.

Per-trial randomness comes from independent streams keyed by
``(plan.seed, trial)``, so reports are reproducible bit for bit.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from math import ceil, log1p
from typing import Callable, Optional

import numpy as np

from . import grover, markov
from ._rng import derive_rng
from .ciphers import make_cipher
from .errors import InvalidArgument

__all__ = [
    "SCENARIO_KINDS",
    "POLICIES",
    "printable_high_byte",
    "AttackScenario",
    "make_scenario",
    "AttackPlan",
    "AttackReport",
    "SpeedupSummary",
    "parse_hex",
    "parse_subset",
    "key_range",
    "marked_keys",
    "verify_key",
    "plan_attack",
    "run_attack",
    "speedup_report",
    "experiment_from_config",
    "run_experiment",
]

SCENARIO_KINDS = ("ciphertext-only", "known-plaintext", "chosen-plaintext", "chosen-ciphertext")
POLICIES = ("classical-uniform", "grover")


def printable_high_byte(block):
    """Default plaintext model: the block's high byte is printable ASCII."""
    hi = (np.asarray(block) >> 8) & 0xFF
    return (hi >= 0x20) & (hi <= 0x7E)


@dataclass(frozen=True)
class AttackScenario:
    """What the attacker holds.

    ``secret_key`` is experimenter ground truth used only to report whether the
    searched subset contained the key; the search never reads it.
    """

    kind: str
    pairs: tuple = ()
    ciphertexts: tuple = ()
    plaintext_model: Optional[Callable] = None
    secret_key: Optional[int] = None

    def __post_init__(self):
        if self.kind not in SCENARIO_KINDS:
            raise InvalidArgument(f"unknown scenario {self.kind!r}; choose from {SCENARIO_KINDS}")
        if self.kind == "ciphertext-only":
            if not self.ciphertexts:
                raise InvalidArgument("ciphertext-only scenario needs at least one ciphertext")
            if self.plaintext_model is None:
                object.__setattr__(self, "plaintext_model", printable_high_byte)
        elif not self.pairs:
            raise InvalidArgument(f"{self.kind} scenario needs at least one (plaintext, ciphertext) pair")


def make_scenario(cipher, kind, secret_key, blocks, plaintext_model=None):
    """Build a scenario by querying the cipher under ``secret_key``.

    ``blocks`` are plaintexts for every kind except chosen-ciphertext, where
    they are the ciphertexts submitted to the decryption machine.
    """
    blocks = [int(b) for b in blocks]
    if kind == "ciphertext-only":
        cts = tuple(cipher.encrypt(secret_key, x) for x in blocks)
        return AttackScenario(kind, ciphertexts=cts, plaintext_model=plaintext_model, secret_key=secret_key)
    if kind == "chosen-ciphertext":
        pairs = tuple((cipher.decrypt(secret_key, y), y) for y in blocks)
    else:
        pairs = tuple((x, cipher.encrypt(secret_key, x)) for x in blocks)
    return AttackScenario(kind, pairs=pairs, secret_key=secret_key)


def parse_hex(text):
    """Parse a hex key or block; case-insensitive, ``0x`` prefix optional."""
    if isinstance(text, (int, np.integer)):
        return int(text)
    t = str(text).strip().lower()
    if t.startswith("0x"):
        t = t[2:]
    try:
        return int(t, 16)
    except ValueError:
        raise InvalidArgument(f"not a hex number: {text!r}") from None


def key_range(lo, hi):
    """Keys ``lo .. hi`` inclusive."""
    if hi < lo:
        raise InvalidArgument("empty key range")
    return np.arange(lo, hi + 1, dtype=np.int64)


def parse_subset(spec, key_bits):
    """Subset from ``"all"``, ``"lo-hi"`` or a comma list of hex keys."""
    size = 1 << key_bits
    if spec is None or (isinstance(spec, str) and spec.strip().lower() == "all"):
        return key_range(0, size - 1)
    if isinstance(spec, str) and "-" in spec:
        lo, hi = spec.split("-", 1)
        keys = key_range(parse_hex(lo), parse_hex(hi))
    elif isinstance(spec, str):
        keys = np.array([parse_hex(k) for k in spec.split(",") if k.strip()], dtype=np.int64)
    else:
        keys = np.array([parse_hex(k) for k in spec], dtype=np.int64)
    if keys.size == 0:
        raise InvalidArgument("subset is empty")
    if keys.min() < 0 or keys.max() >= size:
        raise InvalidArgument(f"subset keys must lie in 0..{size - 1:#x}")
    return keys


def _marked_mask(cipher, scenario, keys):
    mask = np.ones(len(keys), dtype=bool)
    if scenario.kind == "ciphertext-only":
        for y in scenario.ciphertexts:
            mask &= np.asarray(scenario.plaintext_model(cipher.decrypt(keys, int(y))), dtype=bool)
    else:
        for x, y in scenario.pairs:
            mask &= cipher.encrypt(keys, int(x)) == int(y)
    return mask


def marked_keys(cipher, scenario, subset):
    """Keys of ``subset`` consistent with every scenario constraint, ascending.

    An empty result is legal: the secret lies outside the subset or the
    plaintext model is too strict.
    """
    keys = np.unique(np.asarray(subset, dtype=np.int64))
    if keys.size == 0:
        raise InvalidArgument("subset is empty")
    return keys[_marked_mask(cipher, scenario, keys)]


def verify_key(cipher, scenario, key):
    """Check one key against the scenario by direct encryption or decryption."""
    if scenario.kind == "ciphertext-only":
        return all(bool(scenario.plaintext_model(cipher.decrypt(int(key), int(y)))) for y in scenario.ciphertexts)
    return all(cipher.encrypt(int(key), int(x)) == int(y) for x, y in scenario.pairs)


@dataclass(frozen=True, eq=False)
class AttackPlan:
    """Decisions fixed before the attack runs.

    ``step_budget`` counts walk transitions (classical) or oracle queries per
    attempt (Grover); ``iterations`` is the number of attempts per trial and
    ``trials`` the number of independent attacks to run.
    """

    space_size: int
    subset: np.ndarray
    start: int
    step_budget: int
    iterations: int
    walker: str
    seed: int
    trials: int = 1
    marked_count: int = 0
    per_attempt_success: float = 0.0

    def __post_init__(self):
        if self.walker not in POLICIES:
            raise InvalidArgument(f"unknown policy {self.walker!r}")
        if len(self.subset) == 0:
            raise InvalidArgument("subset is empty")
        if self.iterations < 1 or self.trials < 1 or self.step_budget < 0:
            raise InvalidArgument("iterations and trials must be >= 1, step_budget >= 0")
        if not np.any(self.subset == self.start):
            raise InvalidArgument("start key must belong to the subset")


@dataclass(frozen=True)
class AttackReport:
    found_key: Optional[int]
    trials_run: int
    steps_or_queries_per_trial: tuple
    trial_success: tuple
    empirical_success_rate: float
    predicted_success_rate: float
    predicted_mean_steps: float
    subset_contains_secret: bool
    walker: str
    subset_size: int
    marked_count: int
    start: int
    step_budget: int
    iterations: int
    seed: int
    wall_time: float = field(default=0.0, compare=False)

    def to_dict(self, key_bits=16, timing=False):
        width = max(1, ceil(key_bits / 4))
        d = asdict(self)
        d["found_key"] = None if self.found_key is None else f"0x{self.found_key:0{width}X}"
        d["start"] = f"0x{self.start:0{width}X}"
        d["steps_or_queries_per_trial"] = list(self.steps_or_queries_per_trial)
        d["trial_success"] = list(self.trial_success)
        if not timing:
            del d["wall_time"]
        return d

    def to_json(self, key_bits=16, timing=False):
        return json.dumps(self.to_dict(key_bits, timing), sort_keys=True)


def _iterations_for(p):
    if p <= 0:
        return 1
    return max(1, ceil(1.0 / p - 1e-9))


def _classical_budget(walk, start, confidence):
    q = walk.m / (walk.n - 1)
    if q >= 1:
        return 1
    n = max(1, ceil(log1p(-confidence) / log1p(-q)))
    while markov.hit_probability_within(walk, start, n, method="analytic") < confidence:
        n += 1
    return n


def plan_attack(cipher, scenario, subset, policy, confidence, seed, step_budget=None, trials=1):
    """Choose the start key, step budget and repeat count.

    The classical budget is the smallest ``n`` whose exact within-``n``-steps
    hit probability from the start key reaches ``confidence``; the Grover
    budget is the optimal iteration count. ``iterations`` is ``ceil(1/p)`` for
    the resulting per-attempt success ``p``. Passing ``step_budget`` overrides
    the first choice but not the second.

    Raises
    ------
    InvalidArgument
        If ``confidence`` is not strictly between 1/2 and 1.
    """
    if not 0.5 < confidence < 1:
        raise InvalidArgument("confidence must lie strictly between 1/2 and 1")
    if policy not in POLICIES:
        raise InvalidArgument(f"unknown policy {policy!r}; choose from {POLICIES}")
    keys = np.unique(np.asarray(subset, dtype=np.int64))
    if keys.size == 0:
        raise InvalidArgument("subset is empty")
    mask = _marked_mask(cipher, scenario, keys)
    N, m = len(keys), int(mask.sum())
    # the attacker cannot observe m = 0; plan as if one key were present
    m_plan = max(m, 1)
    rng = derive_rng(seed, 0)
    start_pos = int(rng.integers(N))
    start = int(keys[start_pos])

    if policy == "classical-uniform":
        if mask[start_pos] or N == 1:
            budget = 0 if step_budget is None else step_budget
            p = 1.0 if mask[start_pos] else 0.0
        else:
            walk = markov.build_uniform_walk(N, _plan_marks(N, start_pos, m_plan))
            budget = _classical_budget(walk, start_pos, confidence) if step_budget is None else step_budget
            p = markov.hit_probability_within(walk, start_pos, budget, method="analytic")
    else:
        if m_plan >= N:
            k, p = 0, 1.0
        else:
            k = grover.optimal_iterations(N, m_plan)
            if step_budget is not None:
                k = step_budget
            p = grover.closed_form_success(N, m_plan, k)
        budget = k
    return AttackPlan(
        space_size=cipher.key_space,
        subset=keys,
        start=start,
        step_budget=int(budget),
        iterations=_iterations_for(p),
        walker=policy,
        seed=seed,
        trials=trials,
        marked_count=m,
        per_attempt_success=float(p),
    )


def _plan_marks(N, start_pos, m):
    # the uniform walk is symmetric: only m and whether the start is marked matter
    return [i for i in range(N) if i != start_pos][:m]


def _run_classical(cipher, scenario, plan, keys, mask, rng, explicit_limit):
    N, m = len(keys), int(mask.sum())
    start_pos = int(np.flatnonzero(keys == plan.start)[0])
    if mask[start_pos]:
        return plan.start, 0
    total = 0
    marked_pos = np.flatnonzero(mask)
    walk = None
    if m and N <= explicit_limit:
        walk = markov.build_uniform_walk(N, marked_pos)
    for _ in range(plan.iterations):
        if m == 0:
            total += plan.step_budget
            continue
        if walk is None:
            hit = int(rng.geometric(m / (N - 1)))
            if hit <= plan.step_budget:
                return int(keys[marked_pos[rng.integers(m)]]), total + hit
            total += plan.step_budget
            continue
        traj = markov.simulate_trajectory(walk, start_pos, plan.step_budget, rng) if plan.step_budget else None
        if traj is not None and traj.absorbed_at is not None:
            state, t = traj.absorbed_at
            return int(keys[state]), total + t
        total += plan.step_budget
    return None, total


def _grover_final_state(plan, keys, mask):
    N, m = len(keys), int(mask.sum())
    if N == 1:
        return grover.GroverState(1, np.ones(1, dtype=complex))
    s = grover.init_uniform(N)
    if 1 <= m < N:
        s = grover.grover_iterate(s, grover.OracleSpec(mask), plan.step_budget)
    return s


def _run_grover(cipher, scenario, plan, keys, state, rng):
    total = 0
    for _ in range(plan.iterations):
        total += plan.step_budget
        key = int(keys[grover.sample_measurement(state, rng)])
        if verify_key(cipher, scenario, key):
            return key, total
    return None, total


def run_attack(cipher, scenario, plan, explicit_limit=markov.DENSE_LIMIT):
    """Run ``plan.trials`` independent attacks and compare with the predictions.

    Classical trials walk from ``plan.start``; for subsets larger than
    ``explicit_limit`` the hit time is drawn from its exact geometric law
    instead of stepping through states. Grover trials measure the state after
    ``plan.step_budget`` iterations, which is computed once per plan.
    """
    t0 = time.perf_counter()
    keys = plan.subset
    mask = _marked_mask(cipher, scenario, keys)
    N, m = len(keys), int(mask.sum())
    state = _grover_final_state(plan, keys, mask) if plan.walker == "grover" else None

    found_key = None
    costs, success = [], []
    for t in range(plan.trials):
        rng = derive_rng(plan.seed, 1, t)
        if plan.walker == "grover":
            key, cost = _run_grover(cipher, scenario, plan, keys, state, rng)
        else:
            key, cost = _run_classical(cipher, scenario, plan, keys, mask, rng, explicit_limit)
        ok = key is not None and verify_key(cipher, scenario, key)
        if ok and found_key is None:
            found_key = key
        costs.append(int(cost))
        success.append(bool(ok))

    p = plan.per_attempt_success if m else 0.0
    predicted_rate = 1.0 - (1.0 - p) ** plan.iterations
    if plan.walker == "grover":
        if m == 0:
            predicted_mean = float("inf")
        else:
            p_true = 1.0 if m == N else grover.closed_form_success(N, m, plan.step_budget)
            predicted_mean = plan.step_budget / p_true if p_true > 0 else float("inf")
    else:
        start_marked = bool(mask[np.flatnonzero(keys == plan.start)[0]])
        predicted_mean = 0.0 if start_marked else ((N - 1) / m if m else float("inf"))

    if scenario.secret_key is not None:
        contains = bool(np.any(keys == scenario.secret_key))
    else:
        contains = m > 0
    return AttackReport(
        found_key=found_key,
        trials_run=plan.trials,
        steps_or_queries_per_trial=tuple(costs),
        trial_success=tuple(success),
        empirical_success_rate=sum(success) / plan.trials,
        predicted_success_rate=float(predicted_rate),
        predicted_mean_steps=float(predicted_mean),
        subset_contains_secret=contains,
        walker=plan.walker,
        subset_size=N,
        marked_count=m,
        start=plan.start,
        step_budget=plan.step_budget,
        iterations=plan.iterations,
        seed=plan.seed,
        wall_time=time.perf_counter() - t0,
    )


@dataclass(frozen=True)
class SpeedupSummary:
    subset_size: int
    marked_count: int
    classical_mean_steps: float
    classical_stderr: float
    classical_predicted: float
    quantum_mean_queries: float
    quantum_predicted: int
    quantum_success_rate: float
    ratio: float
    predicted_ratio: float


def speedup_report(cipher, scenario, subset, seed, trials=100):
    """Classical walk versus Grover on the same instance.

    The classical walk runs without a practical budget so its mean measures
    the hitting time; Grover runs its optimal iteration count.
    """
    keys = np.unique(np.asarray(subset, dtype=np.int64))
    m = int(_marked_mask(cipher, scenario, keys).sum())
    N = len(keys)
    unbounded = 64 * ceil((N - 1) / max(m, 1)) + 64
    cplan = plan_attack(cipher, scenario, keys, "classical-uniform", 0.75, seed, step_budget=unbounded, trials=trials)
    qplan = plan_attack(cipher, scenario, keys, "grover", 0.75, seed, trials=trials)
    crep = run_attack(cipher, scenario, cplan)
    qrep = run_attack(cipher, scenario, qplan)
    csteps = np.asarray(crep.steps_or_queries_per_trial, dtype=float)
    qmean = float(np.mean(qrep.steps_or_queries_per_trial))
    cmean = float(csteps.mean())
    stderr = float(csteps.std(ddof=1) / np.sqrt(len(csteps))) if len(csteps) > 1 else 0.0
    k = qplan.step_budget
    ratio = cmean / qmean if qmean > 0 else float("nan")
    predicted = crep.predicted_mean_steps / k if k > 0 else float("nan")
    return SpeedupSummary(
        subset_size=N,
        marked_count=m,
        classical_mean_steps=cmean,
        classical_stderr=stderr,
        classical_predicted=crep.predicted_mean_steps,
        quantum_mean_queries=qmean,
        quantum_predicted=k,
        quantum_success_rate=qrep.empirical_success_rate,
        ratio=ratio,
        predicted_ratio=predicted,
    )


_CONFIG_FIELDS = {
    "cipher", "scenario", "pairs", "ciphertexts", "plaintexts", "secret",
    "subset", "policy", "confidence", "seed", "trials", "step_budget",
}


def _parse_pair(item):
    if isinstance(item, str):
        x, _, y = item.partition(":")
        if not y:
            raise InvalidArgument(f"pair must look like PLAIN:CIPHER, got {item!r}")
        return parse_hex(x), parse_hex(y)
    x, y = item
    return parse_hex(x), parse_hex(y)


def experiment_from_config(cfg):
    """Cipher, scenario and plan from one experiment mapping.

    Recognized keys: ``cipher``, ``scenario``, ``pairs`` (``"X:Y"`` hex strings),
    ``ciphertexts``, ``plaintexts``, ``secret``, ``subset``, ``policy``,
    ``confidence``, ``seed``, ``trials``, ``step_budget``. Unknown keys are
    rejected. With ``secret`` set and no ``pairs``/``ciphertexts`` the scenario
    is generated by querying the cipher on ``plaintexts``.
    """
    unknown = set(cfg) - _CONFIG_FIELDS
    if unknown:
        raise InvalidArgument(f"unknown config fields: {sorted(unknown)}")
    cipher = make_cipher(cfg.get("cipher", "xor16"))
    kind = cfg.get("scenario", "known-plaintext")
    secret = cfg.get("secret")
    secret = None if secret is None else parse_hex(secret)
    pairs = tuple(_parse_pair(p) for p in cfg.get("pairs") or ())
    cts = tuple(parse_hex(c) for c in cfg.get("ciphertexts") or ())
    if secret is not None and not pairs and not cts:
        blocks = [parse_hex(b) for b in cfg.get("plaintexts") or ()]
        if not blocks:
            raise InvalidArgument("with only a secret, supply plaintexts (or ciphertexts) to query")
        scenario = make_scenario(cipher, kind, secret, blocks)
    else:
        scenario = AttackScenario(kind, pairs=pairs, ciphertexts=cts, secret_key=secret)
    subset = parse_subset(cfg.get("subset"), cipher.key_bits)
    plan = plan_attack(
        cipher,
        scenario,
        subset,
        cfg.get("policy", "classical-uniform"),
        float(cfg.get("confidence", 0.75)),
        int(cfg.get("seed", 0)),
        step_budget=cfg.get("step_budget"),
        trials=int(cfg.get("trials", 1)),
    )
    return cipher, scenario, plan


def run_experiment(cfg):
    cipher, scenario, plan = experiment_from_config(cfg)
    return cipher, run_attack(cipher, scenario, plan)
