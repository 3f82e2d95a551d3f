# Subgroups of H^1(F_p): each is S x F_p or the graph of a linear map on an
# isotropic S.  The count formula weights k-dimensional S by p^k maps.
from heislw.group import HeisenbergGroup
from heislw.subgroups import enumerate_subgroups, homogeneous_count_formula, subgroup_count_formula

for p in (3, 5, 7):
    recs = enumerate_subgroups(HeisenbergGroup(1, p))
    kinds = {}
    for r in recs:
        kinds[r.kind] = kinds.get(r.kind, 0) + 1
    print(f"p={p}: {len(recs)} subgroups {kinds}, formula p^k: {subgroup_count_formula(1, p)}, "
          f"k*p: {subgroup_count_formula(1, p, 'kp')}; homogeneous {sum(r.homogeneous for r in recs)}"
          f" (formula {homogeneous_count_formula(1, p)})")

H = HeisenbergGroup(2, 3)
recs = enumerate_subgroups(H)
print("H^2(F_3):", len(recs), "subgroups; formula", subgroup_count_formula(2, 3))
