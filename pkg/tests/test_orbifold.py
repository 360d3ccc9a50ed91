"""Group enumeration, sectors, ages."""

from fractions import Fraction

import pytest

from lgck.orbifold import GroupElement, Sector, age, enumerate_group, inertia_sectors

from conftest import make_quintic_glsm


def test_enumerate_cyclic():
    group = enumerate_group([GroupElement([Fraction(1, 5)] * 5)])
    assert len(group) == 5


def test_enumerate_klein():
    group = enumerate_group([GroupElement([Fraction(1, 2), 0]),
                             GroupElement([0, Fraction(1, 2)])])
    assert len(group) == 4


def test_generator_and_inverse_agree():
    g1 = enumerate_group([GroupElement([Fraction(1, 3), Fraction(1, 3)])])
    g2 = enumerate_group([GroupElement([Fraction(2, 3), Fraction(2, 3)])])
    assert g1 == g2


def test_group_order_bound():
    with pytest.raises(ValueError):
        enumerate_group([GroupElement([Fraction(1, 101)])], bound=50)


def test_age_values():
    assert age(GroupElement([0, 0])) == 0
    for k in range(1, 5):
        assert age(GroupElement([Fraction(k, 5)] * 5)) == k
    assert age(GroupElement([Fraction(1, 2), Fraction(1, 2)])) == 1


def test_age_inverse_sum_property():
    """age(h) + age(h^{-1}) = number of moving coordinates."""
    gens = [GroupElement([Fraction(1, 5), Fraction(2, 5), 0, Fraction(1, 2)])]
    for h in enumerate_group(gens):
        moving = sum(1 for p in h.phases if p != 0)
        assert age(h) + age(h.inverse()) == moving
        assert h.fixed_support() == h.inverse().fixed_support()


def test_quintic_sectors(quintic_lg):
    sectors = inertia_sectors(quintic_lg)
    assert len(sectors) == 5
    broad = [s for s in sectors if not s.narrow]
    assert len(broad) == 1
    assert broad[0].fixed_support == frozenset(range(5))
    narrow_ages = sorted(s.age for s in sectors if s.narrow)
    assert narrow_ages == [1, 2, 3, 4]


def test_trivial_group_single_broad_sector():
    from lgck.glsm import GlsmModel
    model = GlsmModel.from_dict({
        "variables": ["x"],
        "torus_weights": [[1]],
        "finite_generators": [],
        "chi": [1],
        "nu": [0],
        "r_charges": [1],
        "d_w": 1,
        "potential": "x",
    })
    sectors = inertia_sectors(model)
    assert len(sectors) == 1 and not sectors[0].narrow


def test_z2_partial_fixed_support():
    group = enumerate_group([GroupElement([Fraction(1, 2), 0])])
    h = [g for g in group if not g.is_identity()][0]
    assert Sector.of(h).fixed_support == frozenset({1})


def test_fixed_support_of_j_matches_charges(quintic_lg):
    from corpus import corpus
    for name, model in [("quintic", quintic_lg)] + corpus():
        j = GroupElement(model.j_phases)
        expect = frozenset(i for i, c in enumerate(model.r_charges)
                           if c % model.d_w == 0)
        assert j.fixed_support() == expect, name


def test_non_affine_regime_rejected():
    model = make_quintic_glsm([1, 0], [0, 0, 0, 0, 0, 1], 1)
    with pytest.raises(ValueError, match="narrow-sector bookkeeping"):
        inertia_sectors(model)
