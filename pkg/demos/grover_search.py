# # Grover search
#
# Amplitude amplification on N items with m marked. Each iteration is one
# oracle query followed by inversion about the mean.

import numpy as np

from walkattack import grover

# ## A single marked item among 1024

N = 1024
oracle = grover.OracleSpec.from_marked(N, [700])
k = grover.optimal_iterations(N, 1)
s = grover.grover_iterate(grover.init_uniform(N), oracle, k)
print(f"k={k} success={grover.success_probability(s, oracle):.6f} closed form={grover.closed_form_success(N, 1, k):.6f}")
print("measurements:", [grover.sample_measurement(s, seed) for seed in range(5)])

# ## Overshooting
#
# The state keeps rotating, so running past the optimum loses probability.

rows, _ = grover.success_curve(N, 1, 60)
curve = np.array([p for _, p in rows])
print("peak at k =", int(curve.argmax()), " trough near k =", int(curve[25:].argmin()) + 25)

# ## Query counts against a classical scan
#
# A uniform classical walk needs (N - 1)/m steps on average.

for e in (8, 12, 16, 20):
    N = 2**e
    q = grover.optimal_iterations(N, 1)
    print(f"N=2^{e:2d}: grover {q:5d} queries, classical mean {N - 1:8d} steps, ratio {(N - 1) / q:8.1f}")
