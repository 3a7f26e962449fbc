"""Tower integers, the valency function ``f``, tetration and super-log."""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "TowerInt",
    "TowerRange",
    "exact",
    "tower",
    "f_value",
    "f_exact",
    "tetr",
    "slog",
    "thm1_steps",
    "thm1_bound_u",
    "bit_budget",
    "set_bit_budget",
]

_BIT_BUDGET = 1 << 20

# floats above this are folded into one more exponential level
_FOLD = 1000.0


def bit_budget() -> int:
    return _BIT_BUDGET


def set_bit_budget(n: int) -> int:
    global _BIT_BUDGET
    old, _BIT_BUDGET = _BIT_BUDGET, int(n)
    return old


@dataclass(frozen=True)
class TowerInt:
    """Either an exact non-negative int, or ``base^base^...^top`` with
    ``height`` exponentiations."""

    value: int | None = None
    base: int = 0
    height: int = 0
    top: TowerInt | None = None

    def __post_init__(self):
        if self.value is not None:
            if self.value < 0:
                raise ValueError("TowerInt values are non-negative")
        elif self.top is None or self.base < 2 or self.height < 1:
            raise ValueError("malformed tower")

    @property
    def is_exact(self) -> bool:
        return self.value is not None

    def _rep(self) -> tuple[int, float]:
        """``(n, x)`` with value ~ ``2^2^...^x`` (n exponentials)."""
        if self.value is not None:
            v = self.value
            if v < (1 << 1000):
                return _fold(0, float(v))
            return _fold(1, math.log2(v))
        n, x = self.top._rep()
        lb = math.log2(self.base)
        for _ in range(self.height):
            # b^V = 2^(V * log2 b)
            if n == 0:
                n, x = _fold(1, x * lb)
            elif n == 1:
                n, x = _fold(2, x + math.log2(lb)) if lb != 1 else _fold(2, x)
            else:
                n, x = n + 1, x
        return n, x

    def _cmp(self, other: TowerInt) -> int:
        if self.value is not None and other.value is not None:
            return (self.value > other.value) - (self.value < other.value)
        a, b = self._rep(), other._rep()
        return (a > b) - (a < b)

    def __lt__(self, other):
        return self._cmp(_coerce(other)) < 0

    def __le__(self, other):
        return self._cmp(_coerce(other)) <= 0

    def __gt__(self, other):
        return self._cmp(_coerce(other)) > 0

    def __ge__(self, other):
        return self._cmp(_coerce(other)) >= 0

    def __int__(self):
        if self.value is None:
            raise OverflowError("tower value is not exactly representable")
        return self.value

    def __repr__(self):
        if self.value is not None:
            v = self.value
            return f"Exact({v})" if v.bit_length() < 80 else f"Exact(<{v.bit_length()} bits>)"
        return f"Tower({self.base}, {self.height}, {self.top!r})"

    def to_json(self) -> dict:
        if self.value is not None:
            return {"exact": str(self.value)}
        return {"tower": {"base": self.base, "height": self.height, "top": self.top.to_json()}}

    @classmethod
    def from_json(cls, obj: dict) -> TowerInt:
        if "exact" in obj:
            return cls(int(obj["exact"]))
        t = obj["tower"]
        return cls(None, int(t["base"]), int(t["height"]), cls.from_json(t["top"]))


def _fold(n: int, x: float) -> tuple[int, float]:
    while n > 0 and x < _FOLD:
        x = 2.0 ** x
        n -= 1
    while x >= 2.0 ** _FOLD:
        x = math.log2(x)
        n += 1
    return n, x


def _coerce(x) -> TowerInt:
    return x if isinstance(x, TowerInt) else TowerInt(int(x))


def exact(v: int) -> TowerInt:
    return TowerInt(int(v))


def tower(base: int, height: int, top: TowerInt | int) -> TowerInt:
    top = _coerce(top)
    if height == 0:
        return top
    if top.value is None and top.base == base:
        return TowerInt(None, base, height + top.height, top.top)
    return TowerInt(None, base, height, top)


@dataclass(frozen=True)
class TowerRange:
    """Bracket ``lower <= value <= upper`` for values too large to store."""

    lower: TowerInt
    upper: TowerInt

    is_exact = False

    def to_json(self) -> dict:
        return {"lower": self.lower.to_json(), "upper": self.upper.to_json()}


def _pow_fits(base: int, e: int) -> bool:
    if e > _BIT_BUDGET:
        return False
    return e * math.log2(base) <= _BIT_BUDGET


def f_exact(f0: int, k: int) -> int | None:
    """``f(k)`` as an int, or ``None`` if it exceeds the bit budget."""
    v = f0
    for _ in range(k):
        if not _pow_fits(2, v):
            return None
        v = (1 << v) - 1
    return v


def f_value(f0: int, k: int) -> TowerInt | TowerRange:
    """``f(0) = f0``, ``f(k+1) = 2^f(k) - 1``.

    Beyond the bit budget a :class:`TowerRange` is returned, using
    ``f(k+1) - 1 >= 2^(f(k) - 1)`` for the lower end and ``f(k+1) < 2^f(k)``
    for the upper end.
    """
    if f0 < 3:
        raise ValueError("f0 must be at least 3")
    v = f0
    j = 0
    while j < k and _pow_fits(2, v):
        v = (1 << v) - 1
        j += 1
    if j == k:
        return TowerInt(v)
    h = k - j
    return TowerRange(tower(2, h, v - 1), tower(2, h, v))


def tetr(base: int, n: int) -> TowerInt:
    """``tetr_base(0) = 1``, ``tetr_base(n+1) = base^tetr_base(n)``."""
    if base < 2:
        raise ValueError("base must be at least 2")
    v = 1
    for j in range(n):
        if not _pow_fits(base, v):
            return tower(base, n - j, v)
        v = base ** v
    return TowerInt(v)


def slog(base: int, n: int) -> int:
    """Largest ``l`` with ``tetr_base(l) <= n``."""
    if base < 2 or n < 1:
        raise ValueError("need base >= 2 and n >= 1")
    l, t = 0, 1
    bits = n.bit_length()
    while True:
        if t * math.log2(base) > bits + 1:
            return l
        nxt = base ** t
        if nxt > n:
            return l
        l, t = l + 1, nxt


def thm1_steps(n: int, f0: int) -> list[int]:
    """Orbit ``n, v_0(n), v_1(v_0(n)), ...`` stopping at the first 2,
    with ``v_l(m) = ceil(4m / f(l)) + 1``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    seq = [n]
    m, l = n, 0
    while True:
        fl = f_exact(f0, l)
        if fl is None or 4 * m <= fl:
            m = 2
        else:
            m = -(-4 * m // fl) + 1
        seq.append(m)
        if m == 2:
            return seq
        l += 1


def thm1_bound_u(n: int, f0: int) -> int:
    """``u(n) = min{l : v_l(...v_0(n)...) = 2}``."""
    return len(thm1_steps(n, f0)) - 2
