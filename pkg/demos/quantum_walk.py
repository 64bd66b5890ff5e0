# # The Hadamard walk on the line
#
# The walker carries a two-state coin. Each step applies the Hadamard coin and
# then shifts right on coin 0 and left on coin 1.

from math import sqrt

from walkattack import qwalk

# ## Exact distributions for the first steps
#
# Exact mode keeps amplitudes as Gaussian integers over a power of sqrt(2), so
# the probabilities come out as fractions.

s = qwalk.initial_state("coin0", 4, exact=True)
for n in range(1, 5):
    s = qwalk.step(s)
    print(n, {i: str(p) for i, p in qwalk.distribution(s).as_dict().items()})

# Starting on coin 1 gives the mirror image.

d1 = qwalk.distribution(qwalk.evolve(qwalk.initial_state("coin1", 4, exact=True), 4))
print("coin1, n=4:", {i: str(p) for i, p in d1.as_dict().items()})

# ## Closed form
#
# Amplitudes at any (n, i) follow from counting runs of left and right moves.

for i in (-4, -2, 0, 2, 4):
    print(f"n=4 i={i:+d}: closed form {qwalk.closed_form_distribution(4, i):.4f}")

# ## Symmetric start
#
# (|0> - i|1>)/sqrt(2) gives a symmetric distribution; (|0> - |1>)/sqrt(2)
# does not.

d = qwalk.distribution(qwalk.evolve(qwalk.initial_state("balanced-imag", 100), 100))
print("balanced-imag symmetric:", bool(abs(d.probabilities - d.probabilities[::-1]).max() < 1e-12))
print("balanced-real n=2:", qwalk.distribution(qwalk.evolve(qwalk.initial_state("balanced-real", 2, exact=True), 2)).as_dict())

# ## Ballistic spread
#
# The quantum walk spreads linearly in n; a classical walk spreads as sqrt(n).

for n in (25, 50, 100, 200):
    _, sd = qwalk.spread_statistics(qwalk.distribution(qwalk.evolve(qwalk.initial_state("balanced-imag", n), n)))
    print(f"n={n:4d}  sd={sd:7.2f}  sd/n={sd / n:.3f}  classical sd={sqrt(n):5.2f}")
