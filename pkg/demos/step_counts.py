"""
How much work does branch and bound save?
=========================================

Brute force adds M + 1 terms for every L in [1, T1]. Branch and bound adds one
term per node it generates. Efficiency is 1 - steps_bnb / steps_bf, averaged
over seeded instances from three period generators.
"""

# %%
from cyclosched.bench import (
    COPRIME_DENSITY, REFERENCE_EFFICIENCY, GeneratorConfig, coprime_fraction,
    efficiency_experiment)

configs = [
    GeneratorConfig(kind="random", M=4, period_min=5, period_max=50, seed=1, runs=200),
    GeneratorConfig(kind="prime", M=4, start_index=2, seed=1, runs=200),
    GeneratorConfig(kind="fibonacci", M=4, start_index=5, seed=1, runs=200),
]
for cfg in configs:
    rep = efficiency_experiment(cfg)
    print(f"{cfg.kind:9s} mean efficiency {float(rep.mean_efficiency):6.1%}"
          f"  (reference {REFERENCE_EFFICIENCY[cfg.kind]}%)"
          f"  coprime pairs {float(rep.coprime_pair_fraction):.2f}")

# %%
# Random periods are coprime a bit over 60% of the time, close to 6/pi^2.
print(coprime_fraction(5, 10000, 10000, seed=0), round(COPRIME_DENSITY, 4))
