# Lower bounds for the best constants at the critical point (3/2, 3/2).
# Indicators alone reach exactly 1; general nonnegative functions do better.
from heislw.constants import (
    endpoint_opnorms,
    exhaustive_indicator_constant,
    extremize_ratio,
    opnorm_lower_bound,
)
from heislw.group import HeisenbergGroup

ex = exhaustive_indicator_constant(3, "3/2", "3/2")
print("indicator pairs at q=3:", ex.value, ex.witness_ref, ex.extra["incidences"], "incidences")

for q in (3, 5, 7):
    r = extremize_ratio(HeisenbergGroup(1, q), ["3/2", "3/2"], restarts=8, seed=0)
    h = r.extra["history"]
    print(f"q={q}: ascent {h[0]:.4f} -> {r.value:.6f} in {r.iterations} sweeps (restart {r.witness_ref['restart']})")

# The averaging operator behind the bilinear form
for q in (3, 5, 7, 11):
    ends = endpoint_opnorms(q)
    mid = opnorm_lower_bound(q, "3/2", 3, restarts=4)
    print(f"q={q}: A(1->1)={ends['A_1to1']}, A(inf->inf)={ends['A_inf_to_inf']}, A(3/2->3) >= {mid.value:.6f}")
