"""A singular diagonal scaling that separates two box-product trajectories.

With box halfwidths a_n = sqrt(2 ln n**beta), the product of Gaussian
masses of the boxes stays bounded away from zero, while the same product
for the scaled measure (contraction factor alpha) collapses to zero.
The script prints a few milestones of both trajectories and the certified
positive lower limit of the first.
"""

import numpy as np

from gausscomp import singular_scaling_demo

rep = singular_scaling_demo(0.5, N=10_000)

print(f"alpha = {rep.alpha}, exponent beta = {rep.beta:.6f}")
print(f"scaled-trajectory exponent {rep.q_exponent:.6f} < 1, "
      "so that product diverges to zero\n")

print("     n       P_n        log Q_n")
for idx in (0, 9, 99, 999, 9999):
    print(f"{idx + 2:6d}  {rep.p_trajectory[idx]:.6f}  "
          f"{rep.log_q_trajectory[idx]:12.4f}")

print(f"\ncertified lower bound on lim P_n: {rep.p_limit_lower:.6f}")
assert rep.p_trajectory[-1] >= 0.9 * rep.p_limit_lower
assert rep.log_q_trajectory[-1] < -5.0
