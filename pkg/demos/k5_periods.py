"""Orders of short elements of K_5 and its period growth.

    python demos/k5_periods.py
"""

from __future__ import annotations

from branchwork import DIRECTED, Kr, Word, conjugate, directed, rooted
from branchwork.f2 import basis, from_mask
from branchwork.order import get_ball, order, period_growth


def main():
    k5 = Kr(5)
    b = directed(k5)
    print("K_5: rank", k5.rank(0), "at every level")

    # b times a rooted element: the first-layer translation forces a doubling
    for mask in (1, 3, 7, 31):
        w = b * rooted(k5, 0, from_mask(mask, 5))
        print(f"  ord(b * a) with a = {mask:05b}: {order(w).order}")

    # a product of conjugates b^(e_i)
    w = b
    for i in range(1, 5):
        w = w * conjugate(b, rooted(k5, 0, basis(i)))
    print("  ord(b b^e1 b^e2 b^e3 b^e4) =", order(w).order)

    ball = get_ball(k5, 0, "S", 2)
    print("S-ball sizes:", [ball.size(n) for n in range(3)])

    table = period_growth(k5, 0, "S", 5, method="classes")
    print("period growth pi(n) for n = 0..5:")
    for row in table.rows:
        print(f"  n={row.n}  pi={row.pi:3d}  witness {row.witness!r}")


if __name__ == "__main__":
    main()
