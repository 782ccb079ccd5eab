from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from credal_medoids.credal import (
    Bba,
    CredalPartition,
    FocalSet,
    FocalSetFamily,
    HardLabel,
    bel,
    betp,
    enumerate_focal_sets,
    harden,
    pl,
)
from credal_medoids.errors import InvalidArgumentError, InvalidFrameError, TotalConflictError


def _random_masses(draw, f, n=None):
    shape = (f,) if n is None else (n, f)
    raw = draw(st.lists(st.floats(0.0, 1.0), min_size=int(np.prod(shape)), max_size=int(np.prod(shape))))
    m = np.array(raw).reshape(shape) + 1e-3
    return m / m.sum(axis=-1, keepdims=True)


@st.composite
def families(draw):
    c = draw(st.integers(2, 5))
    max_card = draw(st.integers(1, c))
    full = draw(st.booleans())
    return enumerate_focal_sets(c, max_card, full)


@st.composite
def bbas(draw):
    fam = draw(families())
    return Bba(fam, _random_masses(draw, fam.f))


# -- focal sets and families -------------------------------------------------


def test_focal_set_members_and_string():
    s = FocalSet.of([2, 0])
    assert s.members == (0, 2)
    assert s.cardinality == 2
    assert str(s) == "{0,2}"
    assert str(FocalSet(0)) == "{}"
    assert 2 in s and 1 not in s


def test_canonical_order_three_clusters():
    fam = enumerate_focal_sets(3, 2, True)
    assert fam.to_lists() == [[], [0], [1], [2], [0, 1], [0, 2], [1, 2], [0, 1, 2]]


def test_full_frame_listed_once_when_cardinality_covers_it():
    fam = enumerate_focal_sets(3, 3, True)
    assert fam.f == 8
    assert fam.to_lists()[-1] == [0, 1, 2]


def test_full_frame_omitted_on_request():
    fam = enumerate_focal_sets(4, 2, False)
    assert [0, 1, 2, 3] not in fam.to_lists()


@given(st.integers(2, 7), st.data())
def test_family_size_matches_binomial_count(c, data):
    max_card = data.draw(st.integers(1, c))
    full = data.draw(st.booleans())
    fam = enumerate_focal_sets(c, max_card, full)
    expected = 1 + sum(len(list(combinations(range(c), k))) for k in range(1, max_card + 1))
    expected += int(full and max_card < c)
    assert fam.f == expected
    keys = [(s.cardinality, s.members) for s in fam.sets]
    assert keys[0] == (0, ())
    body = keys[1:-1] if full and max_card < c else keys[1:]
    assert body == sorted(body)


def test_frame_needs_two_clusters():
    with pytest.raises(InvalidFrameError):
        enumerate_focal_sets(1)


def test_family_requires_singletons():
    with pytest.raises(InvalidArgumentError):
        FocalSetFamily(3, (FocalSet(0), FocalSet(1), FocalSet(2)), 1)


def test_family_roundtrip_through_lists():
    fam = enumerate_focal_sets(4, 2, True)
    again = FocalSetFamily.from_lists(4, fam.to_lists())
    assert again.sets == fam.sets


# -- bbas --------------------------------------------------------------------


def test_bba_rejects_bad_sums_and_negatives():
    fam = enumerate_focal_sets(2)
    with pytest.raises(InvalidArgumentError):
        Bba(fam, [0.5, 0.2, 0.2, 0.0])
    with pytest.raises(InvalidArgumentError):
        Bba(fam, [1.2, -0.2, 0.0, 0.0])
    with pytest.raises(InvalidArgumentError):
        Bba(fam, [1.0, 0.0])


def test_bba_is_read_only():
    b = Bba(enumerate_focal_sets(2), [0.1, 0.2, 0.3, 0.4])
    with pytest.raises(ValueError):
        b.masses[0] = 0.5


def test_betp_hand_computed():
    fam = enumerate_focal_sets(3, 2, True)
    b = Bba.from_dict(fam, {(0,): 0.5, (0, 1): 0.3, (0, 1, 2): 0.2})
    expected = np.array([0.5 + 0.15 + 0.2 / 3, 0.15 + 0.2 / 3, 0.2 / 3])
    np.testing.assert_allclose(betp(b), expected, atol=1e-12)


def test_betp_renormalises_conflict():
    fam = enumerate_focal_sets(2)
    b = Bba.from_dict(fam, {(): 0.5, (0,): 0.25, (0, 1): 0.25})
    np.testing.assert_allclose(betp(b), [0.75, 0.25])


def test_betp_total_conflict_raises():
    fam = enumerate_focal_sets(2)
    with pytest.raises(TotalConflictError):
        betp(Bba.from_dict(fam, {(): 1.0}))


@given(bbas())
def test_betp_is_a_probability(b):
    p = betp(b)
    assert np.all(p >= -1e-12)
    assert abs(p.sum() - 1.0) < 1e-9


@given(bbas(), st.data())
def test_belief_plausibility_duality(b, data):
    c = b.family.c
    members = data.draw(st.sets(st.integers(0, c - 1)))
    a = FocalSet.of(members)
    complement = FocalSet(((1 << c) - 1) & ~a.mask)
    assert bel(b, a) <= pl(b, a) + 1e-12
    assert abs(pl(b, a) + bel(b, complement) + b.empty_mass - 1.0) < 1e-9


@given(bbas())
def test_singleton_betp_between_bel_and_pl(b):
    p = betp(b) * (1.0 - b.empty_mass)
    for k in range(b.family.c):
        assert bel(b, [k]) - 1e-12 <= p[k] <= pl(b, [k]) + 1e-12


# -- hard labels -------------------------------------------------------------


@pytest.mark.parametrize("text", ["0", "3", "{0,2}", "{}", "{1,2,3}"])
def test_hard_label_parse_roundtrip(text):
    assert str(HardLabel.parse(text)) == text


def test_hard_label_kinds():
    assert HardLabel.parse("{}").kind == "outlier"
    assert HardLabel.parse("1").kind == "specific"
    assert HardLabel.parse("{0,1}").kind == "imprecise"
    assert HardLabel.parse("{1}").cluster == 1


# -- credal partitions and hardening -----------------------------------------


def _partition(rows, c=3, max_card=2):
    fam = enumerate_focal_sets(c, max_card, True)
    return CredalPartition(fam, np.array(rows, dtype=float))


def test_partition_dict_roundtrip():
    fam = enumerate_focal_sets(3)
    m = np.random.default_rng(0).dirichlet(np.ones(fam.f), size=5)
    part = CredalPartition(fam, m)
    again = CredalPartition.from_dict(part.to_dict())
    np.testing.assert_allclose(again.masses, part.masses, atol=1e-9)
    assert again.family.sets == fam.sets


def test_max_mass_and_max_betp():
    # Sets: {}, {0}, {1}, {2}, {0,1}, {0,2}, {1,2}, {0,1,2}
    part = _partition([
        [0.0, 0.1, 0.1, 0.0, 0.6, 0.0, 0.0, 0.2],
        [0.7, 0.1, 0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.2, 0.5, 0.3, 0.0, 0.0, 0.0, 0.0],
    ])
    assert [str(x) for x in harden(part, "max-mass")] == ["{0,1}", "{}", "1"]
    assert [str(x) for x in harden(part, "max-betp")] == ["0", "1", "1"]
    assert [str(x) for x in harden(part, "betp-override")] == ["{0,1}", "1", "1"]


def test_ties_go_to_the_earliest_set():
    part = _partition([[0.0, 0.4, 0.4, 0.0, 0.0, 0.0, 0.0, 0.2]])
    assert str(harden(part, "max-mass")[0]) == "0"
    assert str(harden(part, "max-betp")[0]) == "0"


@st.composite
def partitions(draw):
    c = draw(st.integers(2, 4))
    fam = enumerate_focal_sets(c, draw(st.integers(1, c)), True)
    n = draw(st.integers(1, 6))
    m = _random_masses(draw, fam.f, n)
    return CredalPartition(fam, m)


@given(partitions())
def test_appriou_extremes(part):
    # r = 1 scores Pl(A)/|A| <= max_k Pl({k}), so a singleton always wins;
    # r = 0 scores Pl(A), which is largest on the full frame.
    assert all(lab.is_specific for lab in harden(part, "appriou", r=1.0))
    for lab, row in zip(harden(part, "appriou", r=0.0), part.plausibility()):
        assert row[part.family.index(lab.focal)] == pytest.approx(row[1:].max(), abs=1e-12)
        assert row[part.family.index(part.family.full_frame)] == pytest.approx(row[1:].max(), abs=1e-12)


def test_appriou_validates_arguments():
    part = _partition([[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]])
    with pytest.raises(InvalidArgumentError):
        harden(part, "appriou", r=2.0)
    with pytest.raises(InvalidArgumentError):
        harden(part, "appriou", lambdas=[1.0])
    with pytest.raises(InvalidArgumentError):
        harden(part, "no-such-rule")


def test_appriou_total_conflict():
    part = _partition([[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]])
    with pytest.raises(TotalConflictError):
        harden(part, "appriou")
