"""
Checking the approximation guarantee
====================================

On small teams the exhaustive robust optimum is affordable, so the ratio of
the attack-aware plan to the optimum can be compared with the
curvature-dependent lower bound.
"""

from robust_tracking import GeneratorSpec, certify_bound, generate_scenario
from robust_tracking.models import ControlInput

# four straight-line inputs per robot keep the exhaustive search small
inputs = tuple(ControlInput(nu, 0.0) for nu in (-3.0, -1.0, 1.0, 3.0))
spec = GeneratorSpec(n_robots=4, n_targets=2, inputs=inputs)

print("seed   ratio   bound   c_phi")
for seed in range(5):
    cert = certify_bound(generate_scenario(spec, seed), alpha_s=1, alpha_c=3)
    print(f"{seed:4d}  {cert.ratio:.4f}  {cert.bound:.4f}  {cert.c_phi:.4f}")

# tracking quality is far from modular here, so the bound is loose
