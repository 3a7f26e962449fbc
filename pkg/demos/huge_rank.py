"""Sections at astronomically large ranks.

Level 9 of the growing group with f(0) = 3 has rank 2^127 - 1.  Vectors
there are stored by support or co-support, so the directed generator's
sections stay exact.

    python demos/huge_rank.py
"""

from __future__ import annotations

from branchwork import Growing, VertexPath, act, active_vertices, commutator, directed, rooted, section
from branchwork.f2 import ZERO, bar_basis, basis

g = Growing(3)
for level in range(10):
    print(f"level {level}: rank {g.rank(level)}, rule {g.rule(level)}")

level = 9
d = directed(g, level)
i = 2**126 + 5
print("section of d at the bar of e_i:", section(d, bar_basis(i)))
print("section of d at e_i:", section(d, basis(i)))
v = VertexPath(g, level, (bar_basis(i), ZERO))
print("image of (bar e_i, 1):", act(d, v).letters)
print("active vertices of d:", active_vertices(d))

c = commutator(d, rooted(g, level, basis(7)))
print("[d, e_7] =", c)
print("its active first-layer vertices:", sorted(active_vertices(c)))
