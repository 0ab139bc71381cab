"""
How many copies of the simplex code make every extension proper
================================================================

Past some number of stacked copies of the simplex code, every longer
punctured code is proper.  Three estimates of that point are compared
with the exact scan, which is cheap up to k = 12.
"""

from simplexdet import properness_threshold, proper_length_count

print("k  explicit  midpoint  root-test  exact")
for k in range(6, 13):
    rec = properness_threshold(k, full=True)
    print(f"{k:<3}{rec.explicit_lower:>8}{rec.first_proper_midpoint:>10}{rec.vartheta_ceiling:>11}{rec.threshold:>7}")

# the non-proper lengths above 2^(k-1), as maximal runs
rep = proper_length_count(10)
for (t, m), runs in rep.sets.items():
    print(f"copies {t}, band {m}: {runs}")
print("proper lengths counted:", rep.count, "lower bound:", rep.bound)
