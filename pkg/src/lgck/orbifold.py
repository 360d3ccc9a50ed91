"""Finite abelian symmetry groups acting diagonally: elements, sectors, ages.

Group elements are phase vectors in (Q/Z)^n; the element acts on the i-th
coordinate by exp(2 pi i phase_i).  Everything is abelian, so conjugacy
classes are singletons and centralizers are the whole group.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .glsm import GlsmModel, semistable_locus

DEFAULT_GROUP_BOUND = 10 ** 6


class GroupElement:
    """Diagonal symmetry, stored as a reduced phase vector."""

    __slots__ = ("phases",)

    def __init__(self, phases):
        self.phases = tuple(Fraction(p) % 1 for p in phases)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if len(self.phases) != len(other.phases):
            raise ValueError("phase vectors of different lengths")
        return GroupElement(a + b for a, b in zip(self.phases, other.phases))

    def inverse(self) -> "GroupElement":
        return GroupElement(-p for p in self.phases)

    def __pow__(self, k: int) -> "GroupElement":
        return GroupElement(k * p for p in self.phases)

    def is_identity(self) -> bool:
        return all(p == 0 for p in self.phases)

    def order(self) -> int:
        return lcm(*[p.denominator for p in self.phases]) if self.phases else 1

    def fixed_support(self) -> frozenset[int]:
        return frozenset(i for i, p in enumerate(self.phases) if p == 0)

    def age(self) -> Fraction:
        return sum(self.phases, Fraction(0))

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.phases == other.phases

    def __hash__(self):
        return hash(self.phases)

    def __lt__(self, other):
        return self.phases < other.phases

    def __repr__(self):
        return "GroupElement(" + ", ".join(str(p) for p in self.phases) + ")"

    def label(self) -> str:
        return "(" + ",".join(str(p) for p in self.phases) + ")"


def age(h: GroupElement) -> Fraction:
    """Sum of the fractional rotation exponents over all coordinates."""
    return h.age()


def enumerate_group(generators, bound: int = DEFAULT_GROUP_BOUND) -> list[GroupElement]:
    """All products of the generators; deterministic phase-vector order."""
    gens = [g if isinstance(g, GroupElement) else GroupElement(g) for g in generators]
    if not gens:
        raise ValueError("need at least one generator (the identity is fine)")
    n = len(gens[0].phases)
    identity = GroupElement([Fraction(0)] * n)
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > bound:
                        raise ValueError(f"group order exceeds bound {bound}")
        frontier = nxt
    return sorted(seen)


@dataclass(frozen=True)
class Sector:
    """One inertia component: a group element with its fixed-locus data."""

    element: GroupElement
    fixed_support: frozenset[int]
    narrow: bool
    age: Fraction

    @classmethod
    def of(cls, h: GroupElement) -> "Sector":
        support = h.fixed_support()
        return cls(h, support, not support, h.age())

    def inverse_key(self):
        return self.element.inverse().phases

    def to_jsonable(self, variables):
        return {
            "element": [str(p) for p in self.element.phases],
            "fixed_support": sorted(variables[i] for i in self.fixed_support),
            "narrow": self.narrow,
            "age": str(self.age),
        }


def sector_group(model: GlsmModel, bound: int = DEFAULT_GROUP_BOUND) -> list[GroupElement]:
    """The finite diagonal group generated by J and the finite generators."""
    gens = [GroupElement(model.j_phases)]
    gens += [GroupElement(g) for g in model.finite_generators]
    return enumerate_group(gens, bound)


def inertia_sectors(model: GlsmModel, bound: int = DEFAULT_GROUP_BOUND) -> list[Sector]:
    """One sector per group element; requires the affine regime V^ss = V."""
    if model.torus_rank:
        phase = semistable_locus(model, model.nu)
        if phase.max_unstable_supports:
            raise ValueError(
                "model is not in the affine regime (V^ss != V); only "
                "narrow-sector bookkeeping is available for geometric phases"
            )
    return [Sector.of(h) for h in sector_group(model, bound)]
