# Set versions: |K| against its vertical projections, and the incidence chain
# through Vinh's point-line bound.
import numpy as np

from heislw.group import HeisenbergGroup
from heislw.sets import incidence_set_check, lw_set_check, random_subset, sharp_example

for n, q in [(1, 5), (2, 3), (3, 3)]:
    flat = lw_set_check(sharp_example(HeisenbergGroup(n, q), "flat"))
    print(f"flat set n={n} q={q}: |K|={flat.lhs} proj={flat.proj_sizes} ratio=q^{flat.log_q_ratio}")

g = HeisenbergGroup(1, 7)
rng = np.random.default_rng(0)
worst = 0.0
for _ in range(300):
    K = random_subset(g, rng)
    worst = max(worst, lw_set_check(K).ratio)
    assert incidence_set_check(K).ok
print("random sets at q=7: max |K| / bound =", round(worst, 4))

box = incidence_set_check(sharp_example(g, "box", A=range(3), B=range(3)))
print(f"box 3x3xF_7: |K|={box.size} <= I={box.incidences} <= {box.bound:.1f}")
