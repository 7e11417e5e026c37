"""Where recovery collapses: query budget and bias sweeps.

Two sweeps, both written as the harness would write them (same CSV
schema, fully seeded):

1. budget: at a fixed solvable instance, shrink the seed set by a
   budget_scale multiplier and watch exact recovery collapse once the
   per-node vote counts drop below the concentration threshold;
2. bias: at fixed n and full budget, sweep delta through the validity
   boundary (ln n/(n k))^(1/4), below which the seed-reconciliation
   votes (whose bias is only k delta^2/(k-1)) starve.
"""

import warnings

import cycalign as ca

warnings.simplefilter("ignore", ca.ValidityRegimeWarning)

n, k, delta = 300, 2, 0.4
trials = 60

print("=" * 72)
print(f"budget sweep at n={n}, k={k}, delta={delta}, {trials} trials per scale")
print("=" * 72)
print(f"{'scale':>7} {'seed':>5} {'queries':>8} {'success':>8} {'mean err':>9}")
for scale in (1.0, 0.3, 0.1, 0.05, 0.02, 0.01):
    config = ca.SweepConfig(n_values=(n,), k_values=(k,), delta_values=(delta,),
                            trials=trials, base_seed=17, budget_scale=scale)
    record, = ca.run_sweep(config)
    print(f"{scale:>7g} {record.seed_size:>5} {record.query_count:>8} "
          f"{record.successes / trials:>8.2f} {record.mean_hamming:>9.2f}")

print()
print("=" * 72)
print(f"bias sweep at n={n}, k={k}, full budget, {trials} trials per point")
print("=" * 72)
boundary = ca.validity_threshold(n, k)
print(f"validity boundary here: delta ~ {boundary:.3f}")
print(f"{'delta':>7} {'seed':>5} {'success':>8} {'mean err':>9}")
for d in (0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45):
    config = ca.SweepConfig(n_values=(n,), k_values=(k,), delta_values=(d,),
                            trials=trials, base_seed=23)
    record, = ca.run_sweep(config)
    marker = " <- boundary" if abs(d - boundary) < 0.035 else ""
    print(f"{d:>7g} {record.seed_size:>5} {record.successes / trials:>8.2f} "
          f"{record.mean_hamming:>9.2f}{marker}")

print()
print("CSV as the harness writes it (timing zeroed for reproducibility):")
config = ca.SweepConfig(n_values=(n,), k_values=(k,), delta_values=(0.35, 0.45),
                        trials=20, base_seed=5)
print(ca.records_to_csv(ca.run_sweep(config), include_timing=False), end="")
