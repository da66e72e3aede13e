"""Design an optimal frame for three channels, one of them far more reliable.

Run: python demos/01_design_walkthrough.py
"""

import numpy as np

from erasure_frames import ErasureDistribution, certify_parseval, construct_parseval_with_norms, rpm_design
from erasure_frames.metrics import d_p_r

p = [0.01, 0.5, 0.5]
n = 2
dist = ErasureDistribution(p)
design = rpm_design(dist, n)

print(f"loss probabilities      {p}")
print(f"single-loss weights     {np.round(design.weights.singles, 6)}")
print(f"condition (H) holds     {design.holds_H}")
print(f"index i(p)              {design.index}")
# the reliable channel is saturated at norm 1; the rest share what is left
print(f"optimal squared norms   {design.norms_sq}")
print(f"optimal one-loss risk   {design.e_p1:.6f}")

frame = construct_parseval_with_norms(design.norms_sq_user_order, n)
cert = certify_parseval(frame)
print("\nframe vectors (rows):")
print(np.array2string(frame.vectors, precision=6, suppress_small=True))
print(f"Parseval residual       {cert.residual:.1e}")

report = d_p_r(frame, dist, 1)
print(f"\nworst weighted single loss, by enumeration: {report.d_p_r:.6f} at channel {report.argmax_pattern.lost}")
print(f"expected error given one loss:              {report.conditional_expectation:.6f}")
