"""Tests for the Veldkamp space of the doily."""

from itertools import combinations

import pytest

from doilyspace.doily import (
    apply_duad_permutation,
    build_doily,
    grid,
    ovoid,
    perp_set,
)
from doilyspace.incidence import IncidenceStructure, veldkamp_sum_mask
from doilyspace.veldkamp import (
    FAMILIES,
    FAMILY_OVOID_OVOID_PERP,
    FAMILY_OVOID_PERP_GRID,
    FAMILY_PERP_GRID_GRID,
    FAMILY_PERP_TRIPLE_DISJOINT,
    FAMILY_PERP_TRIPLE_TRIANGLE,
    VeldkampLine,
    build_veldkamp_space,
    classify_veldkamp_line,
    family_census,
)

# pinned from the enumeration oracle on its first run
PINNED_CENSUS = {
    FAMILY_PERP_GRID_GRID: 45,
    FAMILY_PERP_TRIPLE_DISJOINT: 15,
    FAMILY_PERP_TRIPLE_TRIANGLE: 20,
    FAMILY_OVOID_PERP_GRID: 60,
    FAMILY_OVOID_OVOID_PERP: 15,
}


def doily_line(h1, h2) -> VeldkampLine:
    g = build_doily()
    third = veldkamp_sum_mask(g.full_mask, h1.mask, h2.mask)
    return VeldkampLine(g, tuple(sorted((h1.mask, h2.mask, third))))


def test_space_counts():
    vs = build_veldkamp_space(build_doily())
    assert len(vs.points) == 31
    assert len(vs.lines) == 155


def test_every_pair_on_exactly_one_line():
    vs = build_veldkamp_space(build_doily())
    pairs = []
    for line in vs.lines:
        pairs.extend(frozenset(p) for p in combinations(line.members, 2))
    assert len(pairs) == 465
    assert len(set(pairs)) == 465  # = C(31, 2): all pairs, none twice


def test_fifteen_lines_per_point():
    vs = build_veldkamp_space(build_doily())
    through = {h.mask: 0 for h in vs.points}
    for line in vs.lines:
        for m in line.members:
            through[m] += 1
    assert set(through.values()) == {15}


def test_member_intersections_coincide():
    vs = build_veldkamp_space(build_doily())
    for line in vs.lines:
        m1, m2, m3 = line.members
        assert m1 & m2 == m1 & m3 == m2 & m3


def test_sum_closure_within_the_31():
    vs = build_veldkamp_space(build_doily())
    masks = {h.mask for h in vs.points}
    full = build_doily().full_mask
    for m1, m2 in combinations(sorted(masks), 2):
        assert veldkamp_sum_mask(full, m1, m2) in masks


def test_line_validation():
    g = build_doily()
    good = doily_line(ovoid(1), ovoid(2))
    assert good.members[0] & good.members[1] == good.core_mask
    with pytest.raises(ValueError):
        VeldkampLine(g, (ovoid(1).mask, ovoid(2).mask, ovoid(3).mask))
    with pytest.raises(ValueError):
        VeldkampLine(g, (ovoid(1).mask, ovoid(1).mask, ovoid(2).mask))


def test_classify_representatives():
    assert classify_veldkamp_line(
        doily_line(perp_set(1, 2), grid(1, 3, 4))) == FAMILY_PERP_GRID_GRID
    assert classify_veldkamp_line(
        doily_line(perp_set(1, 2), perp_set(3, 4))) == FAMILY_PERP_TRIPLE_DISJOINT
    assert classify_veldkamp_line(
        doily_line(perp_set(1, 2), perp_set(1, 3))) == FAMILY_PERP_TRIPLE_TRIANGLE
    assert classify_veldkamp_line(
        doily_line(ovoid(1), perp_set(2, 3))) == FAMILY_OVOID_PERP_GRID
    assert classify_veldkamp_line(
        doily_line(ovoid(1), ovoid(2))) == FAMILY_OVOID_OVOID_PERP


def test_representative_membership_details():
    # {p_12, g_134, g_234} really is the line spanned by p_12 and g_134
    line = doily_line(perp_set(1, 2), grid(1, 3, 4))
    assert set(line.members) == {perp_set(1, 2).mask, grid(1, 3, 4).mask,
                                 grid(2, 3, 4).mask}
    line = doily_line(ovoid(1), perp_set(2, 3))
    assert set(line.members) == {ovoid(1).mask, perp_set(2, 3).mask,
                                 grid(1, 2, 3).mask}
    line = doily_line(perp_set(1, 2), perp_set(3, 4))
    assert set(line.members) == {perp_set(1, 2).mask, perp_set(3, 4).mask,
                                 perp_set(5, 6).mask}


def test_census_pinned_values():
    vs = build_veldkamp_space(build_doily())
    census = family_census(vs.lines)
    assert census == PINNED_CENSUS
    assert sum(census.values()) == 155
    assert tuple(census) == FAMILIES


def test_census_invariant_under_relabelling():
    g = build_doily()
    vs = build_veldkamp_space(g)
    base = family_census(vs.lines)
    transposition = {1: 2, 2: 1, 3: 3, 4: 4, 5: 5, 6: 6}
    cycle = {1: 2, 2: 3, 3: 4, 4: 5, 5: 6, 6: 1}
    for perm in (transposition, cycle):
        permuted = [
            VeldkampLine(g, tuple(sorted(apply_duad_permutation(m, perm)
                                         for m in line.members)))
            for line in vs.lines]
        assert family_census(permuted) == base


def test_single_line_geometry_space():
    single = IncidenceStructure.from_lines(3, [[0, 1, 2]])
    vs = build_veldkamp_space(single)
    assert sorted(h.mask for h in vs.points) == [1, 2, 4]
    assert len(vs.lines) == 1
    assert vs.lines[0].members == (1, 2, 4)


def test_build_requires_three_points_per_line():
    pair_line = IncidenceStructure.from_lines(4, [[0, 1], [2, 3]])
    with pytest.raises(ValueError):
        build_veldkamp_space(pair_line)


def test_classify_rejects_foreign_lines():
    single = IncidenceStructure.from_lines(3, [[0, 1, 2]])
    vs = build_veldkamp_space(single)
    with pytest.raises(ValueError):
        classify_veldkamp_line(vs.lines[0])
