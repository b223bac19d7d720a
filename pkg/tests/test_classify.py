import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frameforge.classify import (FLAG_NAMES, NOT_BESSEL, Taxonomy, analyze, classify, classify_finite,
                                 classify_structured, excess_bruteforce, extend_to_frame, reduce_to_riesz, scan)
from frameforge.errors import InvalidInput, UnsupportedExact
from frameforge.gallery import get
from frameforge.seqmodel import Drop, EditedBasis, Insert, Replace, RuleTerm, from_matrix, make_finite, make_rule

from helpers import low_rank, random_edits

DUP4 = from_matrix(np.eye(4)[:, [0, 0, 2, 3]])
MB = get("mercedes-benz").sequence


def test_analyze_identity():
    a = analyze(np.eye(4))
    assert (a.bessel_bound, a.frame_lower, a.riesz_lower, a.gamma) == (1, 1, 1, 1)
    assert (a.kernel_dim, a.corange_dim, a.index) == (0, 0, 0)


def test_analyze_duplicate():
    a = analyze(DUP4.matrix)
    assert np.allclose(a.singular_values, [np.sqrt(2), 1, 1, 0], atol=1e-12)
    assert (a.kernel_dim, a.corange_dim, a.index) == (1, 1, 0)
    assert a.gamma == pytest.approx(1) and a.bessel_bound == pytest.approx(2)
    assert a.frame_lower == 0 and a.riesz_lower == 0


def test_analyze_mercedes_benz():
    a = analyze(MB.matrix)
    assert a.bessel_bound == pytest.approx(1.5) and a.frame_lower == pytest.approx(1.5)
    assert (a.kernel_dim, a.corange_dim, a.index) == (1, 0, 1)


def test_analyze_rejects_nan():
    with pytest.raises(InvalidInput):
        analyze(np.array([[np.inf]]))


def test_classify_finite_examples():
    assert classify_finite(make_finite(np.eye(3), field="complex")) == Taxonomy.from_dimensions(0, 0)
    t = classify_finite(DUP4)
    assert not t.frame and not t.riesz_sequence and t.pseudo_riesz_basis and (t.excess, t.deficit) == (1, 1)
    t = classify_finite(MB)
    assert t.frame and not t.riesz_sequence and t.near_riesz_basis and t.excess == 1


def test_classify_structured_examples():
    t = classify_structured(EditedBasis((Replace(2, (1.0,)),)))
    assert t.pseudo_riesz_basis and not t.frame and not t.riesz_sequence and (t.excess, t.deficit) == (1, 1)
    for m in (1, 2, 5):
        t = classify_structured(EditedBasis(tuple(Drop(1) for _ in range(m))))
        assert t.riesz_sequence and not t.frame and t.pseudo_frame and (t.excess, t.deficit) == (0, m)
    assert classify_structured(EditedBasis()).riesz_basis


def test_classify_structured_rejects_rules():
    with pytest.raises(UnsupportedExact):
        classify_structured(make_rule([RuleTerm(1, 0)]))


def test_scan_growing_partner():
    g = make_rule([RuleTerm(2, -1), RuleTerm(2, 0, (0.0, 1.0))])
    report = scan(g, (4, 8, 16, 32))
    for t, step in zip(report.schedule, report.steps):
        assert step.bessel_bound == pytest.approx(1 + t.n_vectors**2, rel=1e-9)
    assert not report.extrapolated_taxonomy.bessel
    assert report.extrapolated_taxonomy == NOT_BESSEL
    assert any("not Bessel" in note for note in report.divergence_notes)


def test_scan_odd_basis():
    report = scan(make_rule([RuleTerm(2, -1)]), (5, 9, 17, 33))
    assert report.stabilized
    assert all(step.gamma == pytest.approx(1) and step.kernel_dim == 0 for step in report.steps)
    tax = report.extrapolated_taxonomy
    assert tax.riesz_sequence and not tax.pseudo_frame and tax.provenance == "truncation-extrapolated"
    assert report.trends["corange_dim"] == "growing"


def test_scan_onb_rule():
    report = scan(make_rule([RuleTerm(1, 0)]), (2, 3, 4))
    assert report.stabilized and report.extrapolated_taxonomy.riesz_basis


def test_scan_input_errors():
    with pytest.raises(InvalidInput):
        scan(DUP4)
    with pytest.raises(InvalidInput):
        scan(make_rule([RuleTerm(1, 0)]), (8, 4, 16))


def test_scan_too_short_is_not_stabilized():
    report = scan(make_rule([RuleTerm(1, 0)]), (4, 8))
    assert not report.stabilized
    assert report.extrapolated_taxonomy.bessel and not report.extrapolated_taxonomy.frame


@pytest.mark.parametrize("name", ["duplicate-e1", "dropped-head(2)", "dropped-head(4)", "shifted-basis-pair(3)"])
def test_scan_agrees_with_exact_on_edit_scripts(name):
    s = get(name).sequence
    exact = classify_structured(s)
    extrapolated = scan(s).extrapolated_taxonomy
    assert exact.flags() == extrapolated.flags()
    assert (exact.excess, exact.deficit) == (extrapolated.excess, extrapolated.deficit)


def test_excess_bruteforce_examples():
    assert excess_bruteforce(make_finite(np.eye(4))) == 0
    assert excess_bruteforce(DUP4) == 1
    assert excess_bruteforce(MB) == 1
    assert excess_bruteforce(from_matrix(np.zeros((1, 6))), k_max=4) is None
    with pytest.raises(InvalidInput):
        excess_bruteforce(DUP4, k_max=5)


def test_extend_to_frame_examples():
    s = from_matrix(np.eye(3)[:, [0, 2]], "complex")
    ext = extend_to_frame(s)
    assert np.allclose(np.abs(ext.matrix[:, 2]), [0, 1, 0])
    assert classify_finite(ext).riesz_basis
    ext = extend_to_frame(DUP4)
    assert np.allclose(ext.matrix[:, 4], [0, 1, 0, 0]) and classify_finite(ext).frame
    assert extend_to_frame(MB) == MB


def test_reduce_to_riesz_examples():
    assert reduce_to_riesz(make_finite(np.eye(3)))[1] == ()
    reduced, removed = reduce_to_riesz(DUP4)
    assert removed == (1,) and classify_finite(reduced).riesz_sequence
    reduced, removed = reduce_to_riesz(MB)
    assert len(removed) == 1 and classify_finite(reduced).riesz_basis


def test_taxonomy_lattice_detects_inconsistency():
    assert Taxonomy(frame=True).lattice_violations()
    assert Taxonomy(bessel=False, frame=True).lattice_violations()
    assert NOT_BESSEL.lattice_violations() == []


@given(st.integers(0, 6) | st.none(), st.integers(0, 6) | st.none(), st.booleans())
def test_from_dimensions_is_lattice_consistent(kernel, corange, quasi):
    assert Taxonomy.from_dimensions(kernel, corange, quasi=quasi).lattice_violations() == []


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_gamma_matches_bounds(seed):
    rng = np.random.default_rng(seed)
    d, n = (int(x) for x in rng.integers(1, 6, size=2))
    m = low_rank(rng, d, n, int(rng.integers(1, min(d, n) + 1)))
    a = analyze(m)
    if a.kernel_dim == 0:
        assert a.gamma**2 == pytest.approx(a.riesz_lower, rel=1e-9)
    if a.corange_dim == 0:
        assert a.gamma**2 == pytest.approx(a.frame_lower, rel=1e-9)
    assert a.rank + a.kernel_dim == n and a.rank + a.corange_dim == d


@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.lists(st.integers(-2, 2), min_size=1, max_size=6))
@settings(max_examples=80, deadline=None)
def test_index_moves_by_one_per_edit(seed, pos, vec):
    base = random_edits(np.random.default_rng(seed))
    if not any(vec):
        vec = vec + [1]
    before = classify_structured(base)
    after_insert = classify_structured(EditedBasis(base.edits + (Insert(pos, tuple(vec)),)))
    after_drop = classify_structured(EditedBasis(base.edits + (Drop(pos),)))
    index = lambda t: t.excess - t.deficit  # noqa: E731
    assert index(after_insert) == index(before) + 1
    assert index(after_drop) == index(before) - 1


def test_flag_names_cover_taxonomy():
    assert set(FLAG_NAMES) == set(Taxonomy().flags())
    assert classify(DUP4) == classify_finite(DUP4)
