"""
A punctured simplex code that is worse than random
==================================================

Dropping 191 columns from the [511, 9] simplex code leaves a code of
length 320 whose undetected-error probability climbs above 2^(9-320)
somewhere inside (0, 1/2).  This walks through why.
"""

from fractions import Fraction

from simplexdet import classify, emit_fig1, pue_of, weight_distribution

# four distinct nonzero weights, with two codewords at the minimum weight 128
dist = weight_distribution(9, 320)
print(dist.entries)

# P_ue is a sum of count * p^w (1-p)^(n-w) over those weights
poly = pue_of(9, 320)
print(poly)

# the cascade stops at its cheapest decisive test: the two weight-128
# codewords alone already push P_ue past the level at p = 128/320
v = classify(9, 320)
print(v.decided_by, v.satisfactory)

# the figure data brackets where the total crosses the level
fig = emit_fig1(samples=200)
lo, hi = fig.crossing
print(f"P_ue crosses 2^-311 for p in [{float(lo):.5f}, {float(hi):.5f}]")

# and where the 504 codewords of weight 160 overtake the minimum-weight pair
lo, hi = fig.switch
print(f"weight 160 dominates from p ~ {float(lo):.4f}")

# at p = 1/2 every nonzero codeword contributes 2^-320, so P_ue = 511 / 2^320
half = fig.csv.splitlines()[-1].split(",")
print("log2 P_ue(1/2) + 320 =", float(half[1]) + 320)
