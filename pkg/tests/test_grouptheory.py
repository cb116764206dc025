import pytest

from orbistar.errors import GroupError
from orbistar.grouptheory import FiniteGroup, cycle_label, parse_cycles

Z4_TABLE = [[(i + j) % 4 for j in range(4)] for i in range(4)]


@pytest.fixture
def z4():
    return FiniteGroup(Z4_TABLE, ["e", "t", "t2", "t3"], "Z4")


@pytest.fixture
def s3():
    return FiniteGroup.from_permutations(["(1 2)", "(2 3)"], 3, "S3")


class TestCyclicGroup:
    def test_inverse(self, z4):
        assert z4.inverse(z4.index("t")) == z4.index("t3")
        assert z4.inverse(z4.identity) == z4.identity

    def test_product_of_several(self, z4):
        t = z4.index("t")
        assert z4.product(t, t, t) == z4.index("t3")
        assert z4.product() == z4.identity

    def test_abelian_classes_are_singletons(self, z4):
        classes = z4.conjugacy_classes()
        assert len(classes) == 4
        assert all(len(c) == 1 for c in classes)
        assert z4.centralizer(1) == frozenset(range(4))

    def test_default_labels(self):
        group = FiniteGroup(Z4_TABLE)
        assert group.labels == ("e", "g1", "g2", "g3")


class TestPermutationGroup:
    def test_order_and_identity(self, s3):
        assert s3.order == 6
        assert s3.label(s3.identity) == "e"

    def test_class_sizes(self, s3):
        sizes = [len(c) for c in s3.conjugacy_classes()]
        assert sizes == [1, 3, 2]
        assert s3.conjugacy_classes()[0].representative == s3.identity

    def test_transposition_centralizer(self, s3):
        swap = s3.index("(1 2)")
        assert s3.centralizer(swap) == frozenset({s3.identity, swap})

    def test_conjugation(self, s3):
        a, b = s3.index("(1 2)"), s3.index("(2 3)")
        assert s3.conjugate(a, b) == s3.index("(1 3)")
        assert s3.class_of(b).members == s3.class_of(a).members

    def test_composition_order(self, s3):
        # (2 3) acts first
        a, b = s3.index("(1 2)"), s3.index("(2 3)")
        assert s3.label(s3.multiply(a, b)) == "(1 2 3)"


class TestParsing:
    def test_cycle_roundtrip(self):
        assert cycle_label(parse_cycles("(1 3 2)", 3)) == "(1 3 2)"
        assert cycle_label(parse_cycles("e", 3)) == "e"

    @pytest.mark.parametrize("text", ["(1 4)", "(1 1)", "1 2", "(1 2"])
    def test_bad_cycles(self, text):
        with pytest.raises(GroupError):
            parse_cycles(text, 3)


class TestInvalidTables:
    def test_identity_not_first(self):
        with pytest.raises(GroupError, match="identity"):
            FiniteGroup([[1, 0], [0, 1]])

    def test_not_associative(self):
        table = [[0, 1, 2], [1, 0, 0], [2, 0, 0]]
        with pytest.raises(GroupError):
            FiniteGroup(table)

    def test_entry_out_of_range(self):
        with pytest.raises(GroupError, match="not an element index"):
            FiniteGroup([[0, 1], [1, 2]])

    def test_unknown_label(self, z4):
        with pytest.raises(GroupError):
            z4.index("u")


class TestClassEquation:
    @pytest.fixture(params=["z4", "s3", "s4", "d4"])
    def group(self, request, z4, s3):
        if request.param == "s4":
            return FiniteGroup.from_permutations(["(1 2)", "(1 2 3 4)"], 4, "S4")
        if request.param == "d4":
            return FiniteGroup.from_permutations(["(1 3)", "(1 2 3 4)"], 4, "D4")
        return {"z4": z4, "s3": s3}[request.param]

    def test_orbit_stabilizer(self, group):
        for g in group.elements:
            assert len(group.class_of(g)) * len(group.centralizer(g)) == group.order

    def test_classes_partition_the_group(self, group):
        classes = group.conjugacy_classes()
        assert sum(len(c) for c in classes) == group.order
        assert frozenset().union(*(c.members for c in classes)) == frozenset(group.elements)

    def test_centralizer_commutes(self, group):
        for g in group.elements:
            for h in group.centralizer(g):
                assert group.multiply(g, h) == group.multiply(h, g)
