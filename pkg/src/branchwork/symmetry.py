"""Orbit representatives of letter tuples under coordinate permutations.

Permuting the coordinates of ``A_r`` by ``sigma`` is an automorphism of
``K_r`` that fixes the directed generator and maps the ``S`` generating set
onto itself, so word lengths, orders and section lengths are invariant.
Combined with moves on tuple positions (rotations, reversals) this cuts the
large exhaustive sweeps down by a factor close to ``2 * m * r!``.
"""

from __future__ import annotations

import itertools

import numpy as np

__all__ = [
    "coordinate_permutations",
    "orbit_representatives",
    "dihedral_moves",
    "reversal_moves",
    "class_representatives",
    "reduced_products",
]

# the seen-table is a dense array over the whole code space
MAX_CODE_BITS = 28


def coordinate_permutations(r: int) -> np.ndarray:
    """``(r!, 2^r)`` table: row ``k`` maps a mask to its image under the
    ``k``-th permutation of coordinates."""
    masks = np.arange(1 << r, dtype=np.int64)
    rows = []
    for sigma in itertools.permutations(range(r)):
        img = np.zeros_like(masks)
        for i, j in enumerate(sigma):
            img |= ((masks >> i) & 1) << j
        rows.append(img)
    return np.stack(rows)


def reversal_moves(m: int) -> list:
    return [tuple(range(m)), tuple(range(m - 1, -1, -1))]


def dihedral_moves(m: int) -> list:
    """Position maps for cyclic words ``D x_1 D x_2 ... D x_m``.

    Rotations come from conjugating by ``D x_1``.  The reflection
    ``(x_(m-1), ..., x_1, x_m)`` is the inverse conjugated back into the
    same shape.
    """
    base = list(range(m))
    refl = list(range(m - 2, -1, -1)) + [m - 1] if m >= 2 else base
    out = []
    for shape in (base, refl):
        for k in range(m):
            out.append(tuple(shape[(i + k) % m] for i in range(m)))
    return sorted(set(out))


def _all_tuples(values: np.ndarray, m: int) -> np.ndarray:
    if m == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*([values] * m), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def orbit_representatives(r: int, m: int, moves: list, nonzero: bool = True, keep=None) -> np.ndarray:
    """Lexicographically least member of every orbit of ``m``-tuples of
    masks under ``coordinate permutations x moves``.

    ``keep`` is an optional vectorized filter ``(N, m) -> bool``; it must
    be invariant under the group.  Returns a ``(k, m)`` array sorted
    lexicographically.
    """
    if m == 0:
        return np.zeros((1, 0), dtype=np.int64)
    if r * m > MAX_CODE_BITS:
        raise ValueError("tuple space too large for exhaustive orbit enumeration")
    start = 1 if nonzero else 0
    tuples = _all_tuples(np.arange(start, 1 << r, dtype=np.int64), m)
    if keep is not None:
        tuples = tuples[keep(tuples)]
    weights = np.array([1 << (r * (m - 1 - i)) for i in range(m)], dtype=np.int64)
    codes = tuples @ weights  # already ascending: meshgrid order is lexicographic
    perms = coordinate_permutations(r)
    mv = np.array(moves, dtype=np.int64)
    seen = np.zeros(1 << (r * m), dtype=bool)
    reps = []
    for idx in range(len(codes)):
        c = codes[idx]
        if seen[c]:
            continue
        x = tuples[idx]
        reps.append(idx)
        images = perms[:, x][:, mv]  # (r!, moves, m)
        seen[images.reshape(-1, m) @ weights] = True
    return tuples[np.asarray(reps, dtype=np.int64)]


def class_representatives(r: int, n: int) -> list:
    """Conjugacy-and-symmetry representatives covering ``B^S(n)`` in ``K_r``.

    Items are ``(length, t)``: ``t = ("rooted", mask)`` for rooted elements
    and otherwise a tuple of masks ``(x_1, ..., x_m)`` standing for
    ``D x_1 D x_2 ... D x_m``.  ``length`` is ``m`` plus one if the masks do
    not xor to zero; every element of the ball is conjugate, up to a
    coordinate permutation, to a listed word whose ``length`` is at most
    its own word length.
    """
    out = [(0, ("rooted", 0))]
    if n >= 1:
        out.append((1, ("rooted", 1)))
        out.append((1, (0,)))
    if n >= 2:
        for row in orbit_representatives(r, 1, [(0,)], True):
            out.append((2, (int(row[0]),)))
    for m in range(2, n + 1):
        moves = dihedral_moves(m)
        need_zero = m == n

        def keep(t, need_zero=need_zero):
            x = np.bitwise_xor.reduce(t, axis=1)
            return x == 0 if need_zero else np.ones(len(t), dtype=bool)

        for row in orbit_representatives(r, m, moves, True, keep):
            t = tuple(int(v) for v in row)
            xor = 0
            for v in t:
                xor ^= v
            out.append((m + (1 if xor else 0), t))
    out.sort(key=lambda item: (item[0], len(item[1]) if item[1][0] != "rooted" else -1, str(item[1])))
    return out


def reduced_products(r: int, k: int) -> np.ndarray:
    """Representatives of ``D x_1 D ... x_(k-1) D`` with every ``x_i != 0``,
    up to coordinate permutations and reversal."""
    if k <= 1:
        return np.zeros((1, 0), dtype=np.int64)
    return orbit_representatives(r, k - 1, reversal_moves(k - 1), True)
