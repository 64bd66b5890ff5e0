# # Random-walk key search on a toy cipher
#
# The attacker knows one plaintext/ciphertext pair under a 16-bit XOR cipher
# and searches a chosen subset A of the key space, either by walking A
# uniformly at random or with Grover.

from walkattack import attack
from walkattack.attack import AttackScenario, key_range, plan_attack, run_attack
from walkattack.ciphers import make_cipher

xor = make_cipher("xor16")
scen = AttackScenario("known-plaintext", pairs=((0x1234, 0xACDB),), secret_key=0xBEEF)
full = key_range(0, 0xFFFF)

# ## Planning
#
# The classical plan picks the smallest step budget whose hit probability
# reaches the requested confidence, then repeats ceil(1/p) times.

for policy in attack.POLICIES:
    plan = plan_attack(xor, scen, full, policy, 0.63, seed=1, trials=200)
    report = run_attack(xor, scen, plan)
    print(policy, "budget", plan.step_budget, "iterations", plan.iterations, "found", report.to_dict()["found_key"],
          f"success {report.empirical_success_rate:.3f} (predicted {report.predicted_success_rate:.3f})")

# ## Smaller A, higher chance
#
# With the step budget fixed, shrinking A raises the per-walk success rate.

for bits in (16, 14, 12, 10):
    sub = key_range(0xBEEF - (1 << bits) + 1, 0xBEEF) if bits < 16 else full
    plan = plan_attack(xor, scen, sub, "classical-uniform", 0.7, seed=6, step_budget=500)
    print(f"|A| = 2^{bits}: per-walk success {plan.per_attempt_success:.4f}")

# ## A that misses the key
#
# If A excludes the secret nothing can be found; the report says so.

plan = plan_attack(xor, scen, key_range(0, 0x7FFF), "grover", 0.9, seed=2, trials=5)
r = run_attack(xor, scen, plan)
print("excluded secret:", r.found_key, r.subset_contains_secret)

# ## Speedup
#
# Mean classical steps over mean Grover queries; for m = 1 this tends to
# (|A| - 1) / floor(pi/4 sqrt|A|).

s = attack.speedup_report(xor, scen, full, seed=2024, trials=300)
print(f"classical {s.classical_mean_steps:.0f}, quantum {s.quantum_mean_queries:.0f}, "
      f"ratio {s.ratio:.1f} (predicted {s.predicted_ratio:.1f})")
