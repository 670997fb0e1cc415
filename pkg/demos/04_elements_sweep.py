"""Mean secrecy versus the number of IRS elements at a 3 W cap.

Run: python demos/04_elements_sweep.py [trials]
"""
import sys

from irs_secrecy import ScenarioConfig, SweepSpec, run_sweep

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 300
config = ScenarioConfig(power_max=3.0, k_eves=3)
result = run_sweep(config, SweepSpec("m_elements", (0, 2, 4, 6, 8, 10), trials))

zeros = {r.swept_value: r.zero_fraction for r in result.rows if r.baseline == "optimized_irs"}
print(f"{'M':>3} {'optimized':>11} {'no IRS':>11} {'zero frac':>10}")
for i, m in enumerate(result.values):
    print(f"{m:3d} {result.mean('optimized_irs')[i]:11.3e} {result.mean('no_irs')[i]:11.3e} {zeros[m]:10.3f}")
print("\nEvery trial reuses its draws across M, so the M = 0 row is exactly the no-IRS baseline.")
