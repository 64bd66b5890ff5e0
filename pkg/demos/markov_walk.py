# # Absorbing uniform walks
#
# A walker moves uniformly at random between n states. Some states are
# "marked": once the walker lands on one it stays there. This script builds
# such a walk, solves for absorption probabilities and expected hitting times,
# and checks them against simulation.

import numpy as np

from walkattack import markov

# ## Build the walk
#
# Ten states, two of them marked. In canonical order the marked states come
# first, so P splits into an identity block, P1 and Q.

w = markov.build_uniform_walk(10, {2, 7})
print("ordering:", w.ordering)
print("Q shape:", w.Q.shape, " P1 shape:", w.P1.shape)
print("classification:", markov.classify_states(w.original_matrix()))

# ## Absorption probabilities and expected time
#
# By symmetry each marked state captures the walker with probability 1/m, and
# the hitting time is geometric with mean (n - 1) / m.

for j in w.marked:
    print(f"P(absorbed at {j}) from each transient state:", np.round(markov.absorption_probabilities(w, j), 12))
t = markov.expected_absorption_time(w)
print("expected steps:", t[:3], "...  (n-1)/m =", 9 / 2)

# ## Monte Carlo check

times = markov.sample_absorption_times(w, int(w.transient[0]), 50_000, seed=1)
print(f"simulated mean {times.mean():.3f} +- {times.std(ddof=1) / np.sqrt(times.size):.3f}")

# ## First passage and the n-step view
#
# The first-passage distribution is geometric; the probability of having been
# absorbed within k steps is 1 - (1 - m/(n-1))^k.

f = markov.first_passage_distribution(w.original_matrix(), 0, 2, 5)
print("first passage 0 -> 2, k = 1..5:", np.round(f, 5))
print("hit within 10 steps:", markov.hit_probability_within(w, 0, 10))

# ## Large walks
#
# Above ten thousand states the analytic path is used; no matrix is built.

big = markov.build_uniform_walk(2**16, {0})
print("expected time on 2^16 states:", markov.expected_absorption_time(big)[0])

# ## Cover time of the unmarked walk
#
# With every state visited the coupon-collector law gives (n-1) H_{n-1}.

mean, se = markov.estimate_cover_time(8, 0, 20_000, seed=3)
exact = 7 * sum(1 / k for k in range(1, 8))
print(f"cover time n=8: {mean:.2f} +- {se:.2f} (exact {exact:.2f})")
