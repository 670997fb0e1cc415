"""Optimize IRS phases and power for one trial and compare with the baselines.

Run: python demos/02_phase_optimization.py
"""
import numpy as np

from irs_secrecy import ScenarioConfig, run_trial

config = ScenarioConfig(m_elements=10, k_eves=3)

# hunt for a trial where the eves beat the user on the direct path
for trial in range(200):
    traces = []
    outcomes = run_trial(config, trial, traces=traces)
    if outcomes["no_irs"].secrecy_capacity == 0 and outcomes["optimized_irs"].secrecy_capacity > 0:
        break
print(f"Trial {trial}: an eavesdropper hears the UAV better than the user does.")
for name, outcome in outcomes.items():
    print(f"  {name:>14}: power {outcome.power:.1f} W, secrecy {outcome.secrecy_capacity:.3e} bits/s/Hz")

best = outcomes["optimized_irs"]
print("\nOptimized phases (rad):", np.round(best.profile.phases, 3))
print("Strongest eve after optimization:", best.active_eve)

trace = traces[0]
print(f"\nAscent over {trace.restarts_tried} restarts (converged: {trace.converged}):")
for restart in range(trace.restarts_tried):
    values = trace.objective_per_iter[trace.restart_index == restart]
    print(f"  restart {restart}: {values.size:3d} steps, margin {values[0]:+.3e} -> {values[-1]:+.3e}")
