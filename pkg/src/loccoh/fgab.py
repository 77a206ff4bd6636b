"""Finitely generated abelian groups in invariant-factor normal form.

An FGAbGroup is ``Z^free_rank (+) Z/d_1 (+) ... (+) Z/d_k`` with
``d_1 | d_2 | ... | d_k`` and every ``d_i >= 2``.  This is the canonical
value type for every degreewise answer the engine produces; over a field
the torsion list is empty and ``free_rank`` is the dimension.

>>> FGAbGroup.from_divisors([2, 3, 0])
FGAbGroup(free_rank=1, torsion=(6,))
>>> print(FGAbGroup.from_divisors([4, 6]))
Z/2 + Z/12
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod


def _invariant_factors(divisors):
    """Normalize a list of cyclic orders (>= 2) into a divisibility chain.

    >>> _invariant_factors([4, 6])
    [2, 12]
    >>> _invariant_factors([2, 2, 3])
    [2, 6]
    """
    factors = [d for d in divisors if d != 1]
    changed = True
    while changed:
        changed = False
        for i in range(len(factors)):
            for j in range(i + 1, len(factors)):
                a, b = factors[i], factors[j]
                if b % a != 0:
                    g = gcd(a, b)
                    factors[i], factors[j] = g, a * b // g
                    changed = True
        factors = [d for d in factors if d != 1]
    return sorted(factors)


@dataclass(frozen=True)
class FGAbGroup:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        for d in self.torsion:
            if d < 2:
                raise ValueError("torsion coefficients must be >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError("torsion coefficients must form a divisibility chain")

    @classmethod
    def from_divisors(cls, divisors) -> "FGAbGroup":
        """Build from arbitrary cyclic orders; 0 means an infinite summand."""
        rank = sum(1 for d in divisors if d == 0)
        return cls(rank, tuple(_invariant_factors([abs(d) for d in divisors if d != 0])))

    @classmethod
    def zero(cls) -> "FGAbGroup":
        return cls(0, ())

    @classmethod
    def free(cls, rank: int) -> "FGAbGroup":
        return cls(rank, ())

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def torsion_order(self) -> int:
        return prod(self.torsion) if self.torsion else 1

    def direct_sum(self, other: "FGAbGroup") -> "FGAbGroup":
        return FGAbGroup(
            self.free_rank + other.free_rank,
            tuple(_invariant_factors(list(self.torsion) + list(other.torsion))),
        )

    def tensor_with_rationals(self) -> "FGAbGroup":
        """Kill torsion; what survives after -- (x) Q."""
        return FGAbGroup(self.free_rank, ())

    def render(self, scalars=None) -> str:
        """Canonical human string, e.g. ``Z^2 + Z/2 + Z/4`` or ``Q^3``.

        >>> FGAbGroup(2, (2, 4)).render()
        'Z^2 + Z/2 + Z/4'
        >>> FGAbGroup.zero().render()
        '0'
        """
        if self.is_zero():
            return "0"
        if scalars is not None and scalars.is_field:
            sym = "Q" if scalars.characteristic == 0 else f"F{scalars.characteristic}"
            return sym if self.free_rank == 1 else f"{sym}^{self.free_rank}"
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts)

    def __str__(self):
        return self.render()

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, obj: dict) -> "FGAbGroup":
        return cls(int(obj["free_rank"]), tuple(int(d) for d in obj["torsion"]))
