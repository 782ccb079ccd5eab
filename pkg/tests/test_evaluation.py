from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from credal_medoids.credal import CredalPartition, HardLabel, enumerate_focal_sets
from credal_medoids.errors import InvalidArgumentError
from credal_medoids.evaluation import (
    CSV_FIELDS,
    classical_metrics,
    evidential_metrics,
    metric_report,
    pair_counts,
    validity_index,
)

labelings = st.integers(2, 12).flatmap(
    lambda n: st.tuples(st.lists(st.integers(0, 3), min_size=n, max_size=n), st.lists(st.integers(0, 3), min_size=n, max_size=n))
)


def _counts_by_loops(pred, truth):
    a = b = c = d = 0
    for i, j in combinations(range(len(pred)), 2):
        sp, st_ = pred[i] == pred[j], truth[i] == truth[j]
        a += sp and st_
        b += not sp and not st_
        c += sp and not st_
        d += st_ and not sp
    return a, b, c, d


@given(labelings)
def test_pair_counts_match_loops(pair):
    pred, truth = pair
    pc = pair_counts(pred, truth)
    assert (pc.a, pc.b, pc.c_, pc.d_) == _counts_by_loops(pred, truth)
    assert pc.total == len(pred) * (len(pred) - 1) // 2


def test_classical_metrics_hand_example():
    pred = [0, 0, 1, 1, 2]
    truth = [0, 0, 0, 1, 1]
    a, b, c, d = _counts_by_loops(pred, truth)
    p, r, ri = classical_metrics(pred, truth)
    assert p == pytest.approx(a / (a + c))
    assert r == pytest.approx(a / (a + d))
    assert ri == pytest.approx((a + b) / 10)


def test_empty_denominators_give_one():
    assert classical_metrics([0, 1, 2], [0, 1, 2]) == (1.0, 1.0, 1.0)
    assert classical_metrics([0], [0]) == (1.0, 1.0, 1.0)
    ep, er, _ = evidential_metrics([HardLabel.parse("{0,1}")] * 3, [0, 0, 1])
    assert ep == 1.0 and er == 0.0


def test_length_mismatch():
    with pytest.raises(InvalidArgumentError):
        classical_metrics([0, 1], [0])
    with pytest.raises(InvalidArgumentError):
        evidential_metrics([HardLabel.specific(0)], [0], b_star="other")


@settings(max_examples=500)
@given(labelings, st.sampled_from(["specific", "disjoint"]))
def test_evidential_metrics_reduce_to_classical_on_crisp_labels(pair, rule):
    pred, truth = pair
    ev = evidential_metrics([HardLabel.specific(k) for k in pred], truth, rule)
    cl = classical_metrics(pred, truth)
    assert np.max(np.abs(np.array(ev) - np.array(cl))) <= 1e-12


def test_imprecise_labels_make_fewer_decisions():
    truth = [0, 0, 1, 1]
    pred = [HardLabel.parse(t) for t in ["0", "{0,1}", "1", "1"]]
    ep, er, eri = evidential_metrics(pred, truth)
    # Decisions: only (2,3) is a same-cluster pair of specific labels.
    assert ep == 1.0
    assert er == pytest.approx(0.5)
    # Correctly separated: (0,2), (0,3); no credit for pairs involving object 1.
    assert eri == pytest.approx((1 + 2) / 6)


def test_disjoint_rule_credits_imprecise_but_disjoint_sets():
    fam_labels = ["{0,1}", "2", "2"]
    pred = [HardLabel.parse(t) for t in fam_labels]
    truth = [0, 1, 1]
    _, _, eri_specific = evidential_metrics(pred, truth, "specific")
    _, _, eri_disjoint = evidential_metrics(pred, truth, "disjoint")
    assert eri_specific == pytest.approx(1 / 3)
    assert eri_disjoint == pytest.approx(1.0)


def test_outliers_are_never_decisions():
    pred = [HardLabel.parse("{}")] * 2 + [HardLabel.specific(0)] * 2
    ep, er, eri = evidential_metrics(pred, [0, 0, 0, 0])
    assert ep == 1.0
    assert er == pytest.approx(1 / 6)


@given(st.integers(2, 5), st.integers(1, 10), st.integers(0, 10_000))
def test_validity_index_bounds(c, n, seed):
    rng = np.random.default_rng(seed)
    fam = enumerate_focal_sets(c, c, True)
    m = np.zeros((n, fam.f))
    m[np.arange(n), rng.choice(fam.singleton_indices, size=n)] = 1.0
    assert validity_index(CredalPartition(fam, m)) == 0.0
    vac = np.zeros((n, fam.f))
    vac[:, fam.index(fam.full_frame)] = 1.0
    assert validity_index(CredalPartition(fam, vac)) == pytest.approx(1.0, abs=1e-12)
    mixed = CredalPartition(fam, rng.dirichlet(np.ones(fam.f), size=n))
    assert 0.0 <= validity_index(mixed) <= 1.0 + 1e-12


def test_validity_index_counts_empty_set_as_full_ignorance():
    fam = enumerate_focal_sets(2)
    m = np.zeros((1, fam.f))
    m[0, 0] = 1.0
    assert validity_index(CredalPartition(fam, m)) == 1.0


def test_metric_report_uses_betp_for_crisp_and_mass_for_evidential():
    fam = enumerate_focal_sets(2)
    # Sets: {}, {0}, {1}, {0,1}
    m = np.array([
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.3, 0.1, 0.6],
        [0.0, 0.0, 1.0, 0.0],
    ])
    rep = metric_report(CredalPartition(fam, m), [0, 0, 1])
    assert (rep.precision, rep.recall, rep.rand_index) == (1.0, 1.0, 1.0)
    assert rep.er == 0.0
    assert rep.nstar == pytest.approx(0.2)
    text = rep.to_csv().splitlines()
    assert text[0] == ",".join(CSV_FIELDS)
    assert len(text[1].split(",")) == len(CSV_FIELDS)


def test_metric_report_without_partition():
    rep = metric_report(None, [0, 1], crisp_labels=[1, 0])
    assert rep.nstar is None and rep.ep == 1.0
    assert rep.csv_row().endswith(",")
    with pytest.raises(InvalidArgumentError):
        metric_report(None, [0, 1])
