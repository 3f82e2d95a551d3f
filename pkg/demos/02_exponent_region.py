# Where is the bilinear inequality uniform in q?  Two test-function pairs
# decide it: their ratios are exact powers of q.
from heislw.constants import family_ratio, region_classify, region_scan

for u1, u2 in [("3/2", "3/2"), (2, 2), (1, 1), ("inf", 1), (3, "6/5")]:
    cls = region_classify(u1, u2).cls
    a = family_ratio(13, u1, u2, "A")
    b = family_ratio(13, u1, u2, "B")
    print(f"(u1, u2) = ({u1}, {u2}): {cls:8s}  A ~ q^{a.extra['log_q']}: {a.value:.4g}  "
          f"B ~ q^{b.extra['log_q']}: {b.value:.4g}")

# Growth outside the region at q = 3 .. 13
rows = region_scan([3, 5, 7, 11, 13], steps=10)
for q in (3, 5, 7, 11, 13):
    worst = max(r["ratio"] for r in rows if r["q"] == q)
    inside = max(r["ratio"] for r in rows if r["q"] == q and r["class"] != "outside")
    print(f"q={q:2d}: max ratio inside = {inside:.3f}, max over grid = {worst:.1f}")
