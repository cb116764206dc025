import pytest

from orbistar.errors import CorpusError, MissingDataError
from orbistar.kclass import KClass
from orbistar.orbdata import double_sectors, load, sector, triple_sectors, validate
from orbistar.report import failures

ALL_CORPORA = ["bg_z2", "bg_s3", "c2_z2", "c2_z3", "p1p1_swap", "signrule_good", "kummer"]


@pytest.mark.parametrize("name", ALL_CORPORA)
def test_shipped_corpus_validates(load_corpus, name):
    reports = validate(load_corpus(name))
    assert reports
    assert failures(reports) == []


class TestLookups:
    def test_permutation_group(self, bg_s3):
        assert bg_s3.group.order == 6
        assert bg_s3.group.labels[0] == "e"
        assert len(bg_s3.double_components()) == 36

    def test_wildcard_sectors(self, c2_z3):
        g, g2 = c2_z3.group.index("g"), c2_z3.group.index("g2")
        assert sector(c2_z3, g).locus.name == "origin"
        assert sector(c2_z3, 0).locus.name == "C2"
        assert [c.locus.name for c in double_sectors(c2_z3, g, g2)] == ["origin"]
        assert [c.locus.name for c in triple_sectors(c2_z3, 0, 0, 0)] == ["C2"]

    def test_labels(self, kummer):
        g = kummer.group.index("g")
        components = kummer.components((g,))
        assert len(components) == 16
        assert kummer.label(components[3]) == "g@p3"
        assert kummer.label(double_sectors(kummer, g, g)[0]) == "g,g@p0"

    def test_missing_component_index(self, c2_z2):
        with pytest.raises(MissingDataError):
            sector(c2_z2, 1, index=1)

    def test_double_maps(self, p1p1):
        g = p1p1.group.index("g")
        maps = p1p1.double_maps(double_sectors(p1p1, g, g)[0])
        assert maps.product.locus.name == "X"
        assert maps.first.locus.name == "D"
        assert maps.mu_push.column(0) == p1p1.loci["X"].algebra.element({"a": 1, "b": 1})

    def test_triple_maps(self, p1p1):
        g = p1p1.group.index("g")
        maps = p1p1.triple_maps(triple_sectors(p1p1, g, g, 0)[0])
        assert maps.outer_left.locus.name == "X"
        assert [c.locus.name for c in maps.corners] == ["D", "D", "X", "X"]

    def test_relative_normal(self, kummer):
        point, torus = kummer.loci["p0"], kummer.loci["T"]
        assert kummer.relative_normal(point, torus) == KClass.trivial(point.algebra, 2)
        assert kummer.ambient_of(point) is torus

    def test_transport(self, p1p1):
        g = p1p1.group.index("g")
        X = p1p1.loci["X"]
        swap = p1p1.gaction.transport(g, X)
        assert swap.column(X.algebra.index("a")) == X.algebra.element({"b": 1})
        assert swap.column(X.algebra.index("ab")) == X.algebra.element({"ab": 1})

    def test_eigen_defaults(self, bg_z2):
        g = bg_z2.group.index("g")
        assert bg_z2.eigen(g, bg_z2.loci["pt"]).entries == ()

    def test_eigen_missing(self, read_document):
        document = read_document("c2_z2")
        del document["eigen"]
        datum = load(document)
        with pytest.raises(MissingDataError):
            datum.eigen(1, datum.loci["origin"])
        checks = {r.check for r in failures(validate(datum))}
        assert "eigen-decomposition incomplete" in checks


class TestSchemaErrors:
    def expect(self, document, path):
        with pytest.raises(CorpusError) as info:
            load(document)
        assert info.value.path == path
        return info.value

    def test_sign_rule_fixture(self, read_document):
        error = self.expect(read_document("signrule_bad"), "$.loci.E.algebra.products")
        assert "sign rule" in str(error)

    def test_float_dimension(self, read_document):
        document = read_document("c2_z2")
        document["loci"]["C2"]["dim"] = 2.0
        self.expect(document, "$.loci.C2.dim")

    def test_zero_denominator(self, read_document):
        document = read_document("c2_z2")
        document["eigen"]["g"]["origin"][0]["alpha"] = "1/0"
        self.expect(document, "$.eigen.g.origin[0].alpha")

    def test_unknown_locus(self, read_document):
        document = read_document("c2_z2")
        document["sectors"]["g"] = ["nowhere"]
        self.expect(document, "$.sectors.g")

    def test_untwisted_sector_required(self, read_document):
        document = read_document("p1p1_swap")
        del document["sectors"]["e"]
        self.expect(document, "$.sectors")

    def test_identity_has_no_eigen_data(self, read_document):
        document = read_document("c2_z2")
        document["eigen"]["e"] = {"C2": [{"alpha": "1/2", "lines": [{"trivial": 1}]}]}
        self.expect(document, "$.eigen.e")

    def test_bad_group(self, read_document):
        document = read_document("bg_z2")
        document["group"]["table"][1][1] = 1
        self.expect(document, "$.group")

    def test_cyclic_containment(self, read_document):
        document = read_document("p1p1_swap")
        document["loci"]["X"]["inside"] = ["D"]
        self.expect(document, "$.loci.X.inside")

    def test_unreadable_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(CorpusError) as info:
            load(path)
        assert info.value.path == "$"

    def test_pullback_label(self, read_document):
        document = read_document("p1p1_swap")
        document["correspondences"][0]["pullback"]["a"] = {"q": 1}
        self.expect(document, "$.correspondences[0]")


class TestValidation:
    def test_normal_rank_mismatch(self, read_document):
        document = read_document("c2_z2")
        document["normal"]["origin"] = [{"trivial": 1}]
        datum = load(document)
        checks = {r.check for r in failures(validate(datum))}
        assert "normal rank mismatch" in checks
        assert "eigen-decomposition incomplete" in checks

    def test_angle_out_of_range(self, read_document):
        document = read_document("c2_z3")
        document["eigen"]["g"]["origin"][0]["alpha"] = "4/3"
        checks = {r.check for r in failures(validate(load(document)))}
        assert "eigen angle range" in checks

    def test_broken_projection_formula(self, read_document):
        document = read_document("p1p1_swap")
        document["correspondences"][0]["pushforward"]["1"] = {"a": 1}
        bad = failures(validate(load(document)))
        assert any(r.check == "correspondence" and "projection formula" in r.detail for r in bad)

    def test_broken_transport(self, read_document):
        document = read_document("p1p1_swap")
        document["gaction"]["g"]["transport"]["X"] = {"diagonal": {"a": -1}}
        bad = failures(validate(load(document)))
        assert any(r.check == "action transport" for r in bad)

    def test_missing_pushforward(self, read_document):
        document = read_document("c2_z2")
        document["correspondences"] = []
        bad = failures(validate(load(document)))
        assert any(r.check == "structure maps" for r in bad)
