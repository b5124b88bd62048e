"""The three-point turbulent-wind demonstration model and its reference tables.

The model prescribes cross-spectra and cross-bispectra for wind velocity
fluctuations at heights 35 m, 40 m and 140 m.  Its reference statistics
(second moments and zero-lag third moments) are reproduced exactly by the
package's discrete targets.  The script then runs a Gaussian (second-order)
ensemble against the second-moment table, and shows why the full-amplitude
bispectrum cannot be synthesized: the quadratic waves it demands would carry
far more energy than the prescribed spectrum holds at low frequency, so the
pure-spectrum split fails -- loudly, with the offending bin.  A scaled-down
bispectrum is realizable and its ensemble hits the (scaled) targets.
"""

import numpy as np

from srm3 import (
    CrossBispectrum,
    InfeasibleBispectrumError,
    SamplingPlan,
    build_example_targets,
    build_terms,
    compute_pure_multivariate,
    draw_phases,
    example_grid,
    simulate_2nd_order_mv,
    simulate_3rd_order_mv_fft,
)
from srm3.simulate import Method
from srm3.wind import TABLE_SECOND_ORDER, TABLE_THIRD_ORDER
from srm3.workbench import zero_lag_third_target

grid = example_grid()  # m = 3, N = 100, cutoff 2 rad/s
S, B = build_example_targets(grid)
print(f"grid: m=3, N=100, delta_omega={grid.delta_omega}, "
      f"dt={SamplingPlan.for_grid(grid, blocks=1).delta_t:.2f} s")

# --- reference moment tables vs the package's discrete targets ---------
terms2 = build_terms(S, method=Method.SECOND_ORDER)
print("\nsecond moments E[f_a f_b]   (table | discrete target)")
for (a, b), published in TABLE_SECOND_ORDER.items():
    mine = terms2.target_second(a, b, 0.0)
    print(f"  E[f{a+1} f{b+1}]: {published:7.3f} | {mine:8.4f}")
print("\nzero-lag third moments E[f_a f_b f_c]   (table | discrete target)")
for (a, b, c), published in TABLE_THIRD_ORDER.items():
    mine = zero_lag_third_target(B, a, b, c)
    print(f"  E[f{a+1} f{b+1} f{c+1}]: {published:6.3f} | {mine:7.4f}")

# --- Gaussian ensemble vs the second-moment table ----------------------
R = 50
plan = SamplingPlan.for_grid(grid, blocks=4)
acc = np.zeros((3, 3))
for r in range(R):
    rec = simulate_2nd_order_mv(S, draw_phases(0, r, grid), plan)
    acc += rec.values @ rec.values.T / rec.n_samples
acc /= R
print(f"\nsecond-order ensemble ({R} realizations): E[f_a^2] =",
      np.round(np.diag(acc), 3), "(table: 14.539, 14.722, 14.723)")

# --- the full-amplitude bispectrum is not realizable --------------------
try:
    compute_pure_multivariate(S, B)
except InfeasibleBispectrumError as exc:
    print(f"\nfull-amplitude bispectrum refused: {exc}")
    print("  (matching the third-moment table would force quadratic waves"
          " whose energy exceeds the spectrum's low-frequency content)")

# --- a realizable scaled variant ----------------------------------------
scale = 0.04
small = CrossBispectrum(grid, B.values * scale)
terms3 = build_terms(S, small)
plan = SamplingPlan.for_grid(grid)  # full fundamental period
third = np.zeros(3)
for r in range(20):
    rec = simulate_3rd_order_mv_fft(S, small, draw_phases(1, r, grid), plan)
    third += [np.mean(rec.values[a] ** 3) for a in range(3)]
third /= 20
targets = [terms3.target_third(a, a, a, 0.0, 0.0) for a in range(3)]
print(f"\nscaled ({scale}) third-order ensemble (20 realizations):")
print("  E[f_a^3] estimated:", np.round(third, 4))
print("  exact targets:     ", np.round(targets, 4))
print("  (equal to the table values scaled by", scale, "up to the small"
      " equal-bin coherence correction)")
