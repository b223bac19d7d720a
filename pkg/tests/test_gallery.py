import pytest

from frameforge.classify import classify, classify_finite, scan
from frameforge.duals import verify_duality
from frameforge.errors import InvalidInput, NotFound
from frameforge.gallery import get, list_names
from frameforge.seqmodel import FiniteSequence, RuleSequence

NAMES = list_names()


def test_names_sorted_and_complete():
    assert NAMES == sorted(NAMES)
    for name in ("duplicate-e1", "odd-basis-with-growing-codual", "shifted-basis-pair(2)", "onb",
                 "mercedes-benz", "dropped-head(2)", "scaled-onb(1.5)"):
        assert name in NAMES


@pytest.mark.parametrize("name", NAMES)
def test_entry_is_consistent(name):
    e = get(name)
    assert e.name == name
    assert e.expected_taxonomy.lattice_violations() == []
    assert e.expected_notes and all(c.source for c in e.expected_notes)
    got = classify(e.sequence, schedule=e.suggested_truncations)
    if e.expected_taxonomy.provenance == "exact":
        assert got == e.expected_taxonomy
    else:
        assert got.flags() == e.expected_taxonomy.flags()


@pytest.mark.parametrize("name", [n for n in NAMES if get(n).is_pair])
def test_pair_expectations(name):
    e = get(name)
    codual = verify_duality(e.sequence, e.partner, "codual")
    dual = verify_duality(e.sequence, e.partner, "dual")
    assert codual.defect_rank == e.expected_pair["codual_defect_rank"]
    if "dual_defect_rank" in e.expected_pair:
        assert dual.defect_rank == e.expected_pair["dual_defect_rank"]
    if "dual_verdict" in e.expected_pair:
        assert dual.verdict == e.expected_pair["dual_verdict"]
    assert codual.bessel_flag_of_partner == e.expected_pair["partner_bessel"]
    partner = classify(e.partner, schedule=e.suggested_truncations)
    assert partner.flags() == e.partner_taxonomy.flags()


@pytest.mark.parametrize("name", [n for n in NAMES if get(n).partner_bessel_bound])
def test_partner_bessel_bound_closed_form(name):
    e = get(name)
    report = scan(e.partner, e.suggested_truncations)
    for t, step in zip(report.schedule, report.steps):
        assert step.bessel_bound == pytest.approx(e.partner_bessel_bound(t.n_vectors), rel=1e-9)


def test_parameterized_entries():
    e = get("shifted-basis-pair(4)")
    assert e.expected_taxonomy.deficit == 4 and e.expected_pair["dual_defect_rank"] == 4
    assert get("dropped-head(3)").expected_taxonomy.deficit == 3
    scaled = get("scaled-onb(0.5)")
    assert isinstance(scaled.sequence, FiniteSequence) and scaled.sequence.matrix[0, 0] == 0.5
    assert get("shifted-basis-pair").name == "shifted-basis-pair(2)"


def test_odd_entry_is_rule_pair():
    e = get("odd-basis-with-growing-codual")
    assert isinstance(e.sequence, RuleSequence) and isinstance(e.partner, RuleSequence)
    tax = classify(e.sequence)
    assert tax.riesz_sequence and not tax.pseudo_frame
    assert not classify(e.partner).bessel


def test_triangular_entry_partner():
    e = get("shifted-basis-pair-triangular(3)")
    assert classify_finite(e.partner) == e.partner_taxonomy


@pytest.mark.parametrize("bad", ["nope", "onb(2)", "shifted-basis-pair(x)", "dropped-head(0)", ""])
def test_unknown_or_malformed(bad):
    with pytest.raises((NotFound, InvalidInput)):
        get(bad)
    with pytest.raises(NotFound):
        get("nope")
