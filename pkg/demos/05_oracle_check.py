"""Check the gradient optimizer against an exhaustive phase grid on tiny surfaces.

Run: python demos/05_oracle_check.py
"""
import numpy as np

from irs_secrecy import ScenarioConfig
from irs_secrecy.cli import ORACLE_RATIO, run_oracle_check

config = ScenarioConfig(k_eves=3)
for m, levels in ((1, 360), (2, 64)):
    rows = np.array(run_oracle_check(config, 100, m, levels))
    positive = rows[:, 1] > 0
    print(f"M={m}, {levels} grid levels: {positive.sum()} of 100 instances have positive oracle secrecy")
    print(f"  pass fraction at ratio >= {ORACLE_RATIO}: {np.mean(rows[:, 2] >= ORACLE_RATIO):.2f}")
    if positive.any():
        print(f"  worst ratio among positive instances: {rows[positive, 2].min():.4f}")
