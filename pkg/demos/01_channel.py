"""Draw one channel realization on the default road scene and inspect it.

Run: python demos/01_channel.py
"""
import numpy as np

from irs_secrecy import ScenarioConfig, draw_realization, path_loss

config = ScenarioConfig(m_elements=4, k_eves=3)
rng = np.random.default_rng(1)
topology = config.topology.sample(config.k_eves, rng)

names = ["uav-user", "uav-irs", "irs-user"]
for k in range(config.k_eves):
    names += [f"uav-eve{k}", f"irs-eve{k}"]
print("Average gain of each link (path loss only):")
for name, (a, b) in zip(names, topology.links()):
    print(f"  {name:>10}: {path_loss(a, b, config.fading):.3e}")

realization = draw_realization(topology, config.fading, config.m_elements, rng)
print(f"\nUser direct coefficient     |h_du| = {abs(realization.h_du):.3e}")
print(f"Eve direct coefficients     |h_de| = {np.abs(realization.h_de)}")
print(f"Cascade magnitudes |g_ui * g_iu|  = {np.abs(realization.g_ui * realization.g_iu)}")

# the same stream with fewer elements yields a prefix of the larger draw
small = draw_realization(topology, config.fading, 2, np.random.default_rng(7))
large = draw_realization(topology, config.fading, 4, np.random.default_rng(7))
print("\n2-element draw is a prefix of the 4-element draw:",
      np.array_equal(small.g_ui, large.g_ui[:2]))
