import pytest

from orbistar.orbdata import load
from orbistar.report import failures
from orbistar.stringy import Theory, product_table
from orbistar.verify import (
    SUITES,
    check_associativity,
    check_commutativity,
    check_eq6,
    check_morita,
    check_obstruction_identities,
    check_semisimple,
    run_suite,
    trace_form,
)

SMALL_CORPORA = ["bg_z2", "bg_s3", "c2_z2", "c2_z3", "p1p1_swap", "signrule_good"]


@pytest.mark.parametrize("name", SMALL_CORPORA)
def test_all_suites_pass(load_corpus, name):
    reports = run_suite(load_corpus(name))
    assert failures(reports) == []


def test_report_names(c2_z3):
    checks = {r.check for r in run_suite(c2_z3, "all")}
    assert {"eq6", "eq1", "assoc[chow]", "assoc[ktheory-ch]", "comm[chow]", "chern", "compare", "morita"} <= checks


def test_unknown_suite(bg_z2):
    with pytest.raises(ValueError, match="unknown suite"):
        run_suite(bg_z2, "everything")


def test_suite_registry():
    assert SUITES[0] == "validate"
    assert "semisimple" in SUITES


class TestIdentities:
    def test_one_report_per_group_triple(self, bg_s3):
        assert len(check_obstruction_identities(bg_s3)) == 216
        assert len(check_associativity(bg_s3, "chow")) == 216

    def test_commutativity_includes_invariant_check(self, p1p1):
        reports = check_commutativity(p1p1, Theory.KTHEORY)
        assert reports[-1].instance == "invariant"
        assert all(r.passed for r in reports)

    def test_broken_age_is_caught(self, read_document):
        document = read_document("c2_z3")
        document["eigen"]["g"]["origin"][0]["alpha"] = "5/6"
        bad = failures(check_eq6(load(document)))
        assert [r.instance for r in bad] == ["g@origin", "g2@origin"]
        assert (bad[0].lhs, bad[0].rhs) == ("5/2[O]", "2[O]")

    def test_broken_age_with_nonzero_roots(self, read_document):
        document = read_document("p1p1_swap")
        document["eigen"]["g"]["D"][0]["alpha"] = "1/3"
        bad = failures(check_eq6(load(document)))
        assert [r.instance for r in bad] == ["g@D"]
        assert (bad[0].lhs, bad[0].rhs) == ("2/3[2*h]", "1[2*h]")

    def test_broken_normal_fails_validation(self, read_document):
        document = read_document("p1p1_swap")
        document["normal"]["D"][0]["mult"] = 2
        bad = failures(run_suite(load(document), "validate"))
        assert "normal rank mismatch" in {r.check for r in bad}
        incomplete = [r for r in bad if r.check == "eigen-decomposition incomplete"]
        assert (incomplete[0].lhs, incomplete[0].rhs) == ("1[2*h]", "2[2*h]")

    def test_broken_pushforward_breaks_associativity(self, read_document):
        document = read_document("p1p1_swap")
        document["correspondences"][0]["pushforward"]["h"] = {"ab": 2}
        reports = run_suite(load(document), "assoc", ["chow"])
        assert failures(reports)

    def test_morita(self, c2_z3):
        assert all(r.passed for r in check_morita(c2_z3))


class TestSemisimple:
    def test_group_algebra(self, bg_z2):
        assert trace_form(product_table(bg_z2)).tolist() == [[2, 0], [0, 2]]
        assert all(r.passed for r in check_semisimple(bg_z2))

    def test_centre_of_s3(self, bg_s3):
        assert all(r.passed for r in run_suite(bg_s3, "semisimple"))

    def test_nilpotent_twisted_classes(self, c2_z3):
        reports = check_semisimple(c2_z3)
        assert not reports[0].passed
        assert reports[0].detail == "trace form is degenerate"


class TestKummer:
    @pytest.mark.parametrize("suite", ["validate", "unit", "eq6", "eq1", "comm", "rank", "morita"])
    def test_fast_suites(self, kummer, suite):
        assert failures(run_suite(kummer, suite, ["chow"])) == []

    @pytest.mark.slow
    def test_associativity(self, kummer):
        assert failures(run_suite(kummer, "assoc")) == []

    @pytest.mark.slow
    def test_chern_and_equivariance(self, kummer):
        assert failures(run_suite(kummer, "chern")) == []
        assert failures(run_suite(kummer, "equiv", ["chow"])) == []
