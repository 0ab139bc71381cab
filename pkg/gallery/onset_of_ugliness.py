"""
Where ugliness starts, band by band
===================================

For each band m the minimum-weight test first fires at the band midpoint
once k reaches an onset value.  The onsets grow like 2m plus a slowly
creeping offset.
"""

from simplexdet.asymptotics import onset_bands, onset_root, ugliness_onset

# the first few onsets, with a tight bracket of the real root behind each
for m in range(1, 8):
    K = ugliness_onset(m)
    root = onset_root(m, K, bits=30)
    print(m, K, f"{float(root.lower):.6f}")

# grouped into runs with a constant offset K - 2m
for first, last, offset in onset_bands(356):
    print(f"m in [{first}, {last}]: onset 2m+{offset}")
