"""K_1 is the infinite dihedral group: b e_0 has infinite order.

The exact order computation finds a section loop that passes through a
squaring step, and the orders on finite truncations keep doubling.

    python demos/infinite_dihedral.py
"""

from __future__ import annotations

from branchwork import Kr, directed, rooted
from branchwork.f2 import basis
from branchwork.order import order, truncated_exponent

k1 = Kr(1)
w = directed(k1) * rooted(k1, 0, basis(0))
res = order(w)
print("order(b e_0):", res.to_json())
for depth in range(1, 11):
    print(f"  on the first {depth:2d} layers: order {1 << truncated_exponent(w, depth)}")

k2 = Kr(2)
w2 = directed(k2) * rooted(k2, 0, basis(0))
# K_2 has infinite-order elements as well; from rank 3 on the groups are 2-groups
print("in K_2, order(b e_0):", order(w2).to_json())
k3 = Kr(3)
print("in K_3, order(b e_0):", order(directed(k3) * rooted(k3, 0, basis(0))).order)
