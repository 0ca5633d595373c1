"""Finitely generated abelian groups Z^r x Z_{n_1} x ... x Z_{n_t}."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

from .errors import StructuralError


@dataclass(frozen=True)
class GroupSpec:
    free_rank: int = 0
    torsion_orders: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion_orders", tuple(int(n) for n in self.torsion_orders))
        if self.free_rank < 0:
            raise StructuralError("free_rank must be nonnegative")
        if any(n < 2 for n in self.torsion_orders):
            raise StructuralError("torsion orders must be >= 2")

    @property
    def torsion_free_rank(self) -> int:
        return self.free_rank

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int:
        """Cardinality of a finite group."""
        if not self.is_finite:
            raise StructuralError("group is infinite")
        return math.prod(self.torsion_orders)

    @property
    def exponent_lcm(self) -> int:
        return math.lcm(1, *self.torsion_orders)

    def zero(self) -> GroupElement:
        return GroupElement(self, (0,) * self.free_rank, (0,) * len(self.torsion_orders))

    def element(self, free: Sequence[int] = (), torsion: Sequence[int] = ()) -> GroupElement:
        return GroupElement(self, tuple(free), tuple(torsion))

    def free_generator(self, i: int) -> GroupElement:
        free = [0] * self.free_rank
        free[i] = 1
        return GroupElement(self, tuple(free), (0,) * len(self.torsion_orders))

    def torsion_generator(self, j: int) -> GroupElement:
        tors = [0] * len(self.torsion_orders)
        tors[j] = 1
        return GroupElement(self, (0,) * self.free_rank, tuple(tors))

    def generators(self) -> list[GroupElement]:
        return [self.free_generator(i) for i in range(self.free_rank)] + [
            self.torsion_generator(j) for j in range(len(self.torsion_orders))
        ]

    def torsion_elements(self) -> Iterator[tuple[int, ...]]:
        return product(*(range(n) for n in self.torsion_orders))

    def elements(self) -> list[GroupElement]:
        """All elements of a finite group, in lexicographic order of residues."""
        if not self.is_finite:
            raise StructuralError("cannot enumerate an infinite group")
        return [GroupElement(self, (), t) for t in self.torsion_elements()]

    def box(self, lo: int, hi: int) -> list[GroupElement]:
        """Free coordinates in [lo, hi]^r times every torsion residue."""
        frees = product(range(lo, hi + 1), repeat=self.free_rank)
        return [GroupElement(self, f, t) for f in frees for t in self.torsion_elements()]

    def product(self, other: GroupSpec) -> GroupSpec:
        return GroupSpec(self.free_rank + other.free_rank, self.torsion_orders + other.torsion_orders)

    def embed_pair(self, other: GroupSpec, a: GroupElement, b: GroupElement) -> GroupElement:
        self.check(a)
        other.check(b)
        return GroupElement(self.product(other), a.free + b.free, a.torsion + b.torsion)

    def project_pair(self, other: GroupSpec, c: GroupElement) -> tuple[GroupElement, GroupElement]:
        self.product(other).check(c)
        r, t = self.free_rank, len(self.torsion_orders)
        return (
            GroupElement(self, c.free[:r], c.torsion[:t]),
            GroupElement(other, c.free[r:], c.torsion[t:]),
        )

    def check(self, x: GroupElement) -> None:
        if x.group != self:
            raise StructuralError(f"element of {x.group} used on {self}")

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z{n}" for n in self.torsion_orders)
        return "x".join(parts) if parts else "Z^0"


_GROUP_PART = re.compile(r"^Z(?:\^(\d+)|(\d+))?$")


def parse_group(text: str) -> GroupSpec:
    """Parse literals such as ``"Z"``, ``"Z^2xZ4"`` or ``"Z^3 x Z6 x Z4"``.

    Free factors are collected first; torsion factors keep their listed order.
    """
    free, torsion = 0, []
    cleaned = text.replace(" ", "").replace("×", "x")
    if cleaned in ("", "0", "1", "Z^0", "trivial"):
        return GroupSpec()
    for part in cleaned.split("x"):
        m = _GROUP_PART.match(part)
        if not m:
            raise StructuralError(f"bad group factor {part!r} in {text!r}")
        if m.group(2) is not None:
            torsion.append(int(m.group(2)))
        else:
            free += int(m.group(1)) if m.group(1) is not None else 1
    return GroupSpec(free, tuple(torsion))


@dataclass(frozen=True)
class GroupElement:
    group: GroupSpec
    free: tuple[int, ...]
    torsion: tuple[int, ...]

    def __post_init__(self):
        g = self.group
        if len(self.free) != g.free_rank or len(self.torsion) != len(g.torsion_orders):
            raise StructuralError(f"element shape does not match {g}")
        object.__setattr__(self, "free", tuple(int(v) for v in self.free))
        object.__setattr__(
            self, "torsion", tuple(int(v) % n for v, n in zip(self.torsion, g.torsion_orders))
        )

    def __add__(self, other: GroupElement) -> GroupElement:
        if not isinstance(other, GroupElement):
            return NotImplemented
        self.group.check(other)
        return GroupElement(
            self.group,
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple(a + b for a, b in zip(self.torsion, other.torsion)),
        )

    def __neg__(self) -> GroupElement:
        return GroupElement(self.group, tuple(-a for a in self.free), tuple(-a for a in self.torsion))

    def __sub__(self, other: GroupElement) -> GroupElement:
        return self + (-other)

    def __rmul__(self, k: int) -> GroupElement:
        return GroupElement(self.group, tuple(k * a for a in self.free), tuple(k * a for a in self.torsion))

    def is_zero(self) -> bool:
        return not any(self.free) and not any(self.torsion)

    def sort_key(self) -> tuple:
        return (self.free, self.torsion)

    def __str__(self) -> str:
        free = ",".join(map(str, self.free))
        if self.torsion:
            return f"{free};{','.join(map(str, self.torsion))}"
        return free


def group_add(a: GroupElement, b: GroupElement) -> GroupElement:
    return a + b


def group_product(g1: GroupSpec, g2: GroupSpec) -> GroupSpec:
    return g1.product(g2)


def parse_element(text: str, group: GroupSpec) -> GroupElement:
    """``"1,2"`` for free coordinates, ``"1,2;3"`` with torsion residues after ``;``."""
    free_txt, _, tors_txt = text.strip().partition(";")

    def ints(s):
        s = s.strip()
        return tuple(int(v) for v in s.split(",")) if s else ()

    return GroupElement(group, ints(free_txt), ints(tors_txt))
