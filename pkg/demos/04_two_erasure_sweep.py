"""Two-erasure risk of harmonic frames as the channel count grows.

The last column divides by n p^2 / (m (1 - p)).  The ratio equals
2 (1 - p)^(m - 1) here, so it falls to zero instead of settling near 1.

Run: python demos/04_two_erasure_sweep.py
"""

from erasure_frames.metrics import harmonic_two_erasure_sweep

p, n = 0.3, 2
print(f"{'m':>4} {'d_p2':>14} {'reference':>14} {'ratio':>12} {'2(1-p)^(m-1)':>14}")
for row in harmonic_two_erasure_sweep(p, n, [4, 6, 8, 16, 32, 64]):
    m = row["m"]
    print(f"{m:>4} {row['d_p2']:>14.6e} {row['reference']:>14.6e} {row['ratio']:>12.4e} {2 * (1 - p) ** (m - 1):>14.4e}")
