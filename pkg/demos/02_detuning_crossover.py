"""Memory measure versus detuning: the Markovian/non-Markovian crossover.

With the excitation-conserving coupling (chi=0) the trace distance between
the optimally chosen pair of initial states decays monotonically for small
detuning: no information flows back, the measure is zero.  Beyond a
critical detuning near 3.5 spectral widths the decay factor starts to
oscillate and the measure turns positive.  Switching the counter-rotating
coupling on (chi=1) lifts the measure everywhere, by more than an order of
magnitude over much of the range.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from nmheom import BathModel, CouplingOperator, PairSampler, PropagatorConfig, maximize

EPSILON, LAM = 2.0, 0.1
cfg = PropagatorConfig(dt=0.01, t_final=50.0, depth=6)
sampler = PairSampler(grid_size=9, random_count=8, seed=1)
detunings = [k * LAM for k in (0, 1, 2, 3, 4, 5, 7, 10, 13, 15)]

print(f"{'delta/lam':>10} {'N (chi=0)':>12} {'N (chi=1)':>12}  best pair (chi=1)")
curves = {0.0: [], 1.0: []}
for delta in detunings:
    bath = BathModel(epsilon=EPSILON, lam=LAM, gamma0=0.02, delta=delta)
    row = {}
    for chi in (0.0, 1.0):
        result = maximize(bath, CouplingOperator(chi), EPSILON, cfg, sampler=sampler)
        curves[chi].append(result.value)
        row[chi] = result
    best = row[1.0].best_pair
    print(
        f"{delta / LAM:>10.1f} {row[0.0].value:>12.3e} {row[1.0].value:>12.3e}"
        f"  (theta={best.theta:.2f}, phi={best.phi:.2f})"
    )

fig, ax = plt.subplots(figsize=(6, 4))
x = [d / LAM for d in detunings]
ax.plot(x, curves[1.0], "o-", label=r"$\chi=1$ (full coupling)")
ax.plot(x, curves[0.0], "s-", label=r"$\chi=0$ (excitation conserving)")
ax.set_xlabel(r"detuning $\Delta/\lambda$")
ax.set_ylabel(r"non-Markovianity $\mathcal{N}$")
ax.legend()
fig.tight_layout()
out = os.path.join(os.path.dirname(__file__), "02_detuning_crossover.png")
fig.savefig(out, dpi=120)
print(f"figure written to {out}")
