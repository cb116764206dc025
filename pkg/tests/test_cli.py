import json

import pytest
from conftest import corpus_path

from orbistar import __version__
from orbistar.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write_document(tmp_path, document, name="doc.json"):
    path = tmp_path / name
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


class TestCheck:
    def test_clean_corpus(self, capsys):
        code, out, _ = run(capsys, "check", corpus_path("bg_s3"))
        assert code == 0
        first = out.splitlines()[0]
        assert first.startswith("bg_s3: ") and first.endswith(", 0 failed")

    def test_single_suite_and_theory(self, capsys):
        code, out, _ = run(capsys, "check", corpus_path("c2_z2"), "--suite", "eq6", "--theory", "chow")
        assert code == 0
        assert out.splitlines() == ["c2_z2: 2 checks, 0 failed"]

    def test_all_reports_lists_passing_checks(self, capsys):
        code, out, _ = run(capsys, "check", corpus_path("bg_z2"), "--suite", "unit", "--all-reports")
        assert code == 0
        assert out.splitlines()[1:] == ["ok   unit[chow] [all]", "ok   unit[ktheory-ch] [all]"]

    def test_failure_prints_witness(self, capsys, tmp_path, read_document):
        document = read_document("c2_z3")
        document["eigen"]["g"]["origin"][0]["alpha"] = "5/6"
        code, out, _ = run(capsys, "check", write_document(tmp_path, document), "--suite", "eq6")
        assert code == 1
        lines = out.splitlines()
        assert lines[0] == "c2_z3: 3 checks, 2 failed"
        assert lines[1] == "FAIL eq6 [g@origin] g=g: 5/2[O] != 2[O]"

    def test_failure_with_nonzero_roots(self, capsys, tmp_path, read_document):
        document = read_document("p1p1_swap")
        document["eigen"]["g"]["D"][0]["alpha"] = "1/3"
        code, out, _ = run(capsys, "check", write_document(tmp_path, document), "--suite", "eq6")
        assert code == 1
        assert "FAIL eq6 [g@D] g=g: 2/3[2*h] != 1[2*h]" in out.splitlines()

    def test_json_output(self, capsys):
        code, out, _ = run(capsys, "check", corpus_path("bg_z2"), "--suite", "comm", "--json")
        assert code == 0
        payload = json.loads(out)
        assert payload["corpus"] == "bg_z2"
        assert payload["passed"] is True
        assert payload["failures"] == []

    @pytest.mark.slow
    def test_kummer_associativity(self, capsys):
        code, out, _ = run(capsys, "check", corpus_path("kummer"), "--suite", "assoc", "--theory", "chow")
        assert code == 0
        assert out.splitlines()[0] == "kummer: 8 checks, 0 failed"


class TestErrors:
    def test_missing_file(self, capsys, tmp_path):
        code, out, err = run(capsys, "check", tmp_path / "absent.json")
        assert code == 2
        assert out == ""
        assert err.startswith("error: $: cannot read")

    def test_schema_error(self, capsys, tmp_path, read_document):
        document = read_document("bg_z2")
        del document["group"]
        code, _, err = run(capsys, "ages", write_document(tmp_path, document))
        assert code == 2
        assert "error: $" in err

    def test_compare_without_resolution(self, capsys):
        code, _, err = run(capsys, "compare", corpus_path("c2_z3"))
        assert code == 2
        assert "carries no resolution" in err

    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_version(self, capsys):
        with pytest.raises(SystemExit):
            main(["--version"])
        assert __version__ in capsys.readouterr().out


def test_table_group_algebra(capsys):
    code, out, _ = run(capsys, "table", corpus_path("bg_z2"))
    assert code == 0
    assert out.splitlines() == [
        "bg_z2 (chow): 2 basis elements",
        "0  e@pt:1  0",
        "1  g@pt:1  0",
        "",
        "e@pt:1  *  e@pt:1  =  1*e@pt:1",
        "e@pt:1  *  g@pt:1  =  1*g@pt:1",
        "g@pt:1  *  e@pt:1  =  1*g@pt:1",
        "g@pt:1  *  g@pt:1  =  1*e@pt:1",
    ]


def test_table_json(capsys):
    code, out, _ = run(capsys, "table", corpus_path("bg_z2"), "--theory", "k", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["theory"] == "ktheory-ch"
    assert [entry["label"] for entry in payload["basis"]] == ["e@pt:1", "g@pt:1"]
    assert {"left": "g@pt:1", "right": "g@pt:1", "result": {"e@pt:1": "1"}} in payload["products"]


class TestTableOrder:
    def test_sectors_sorted_by_label(self, capsys):
        code, out, _ = run(capsys, "table", corpus_path("bg_s3"), "--json")
        assert code == 0
        labels = [entry["label"] for entry in json.loads(out)["basis"]]
        assert len(labels) == 6
        assert labels == sorted(labels)
        assert labels[-1] == "e@pt:1"

    def test_products_follow_basis_order(self, capsys):
        code, out, _ = run(capsys, "table", corpus_path("bg_s3"), "--json")
        assert code == 0
        payload = json.loads(out)
        lefts = [entry["left"] for entry in payload["products"]]
        assert lefts == sorted(lefts)
        assert len(payload["products"]) == 36

    def test_basis_index_within_a_sector(self, capsys):
        code, out, _ = run(capsys, "table", corpus_path("p1p1_swap"))
        assert code == 0
        labels = [line.split()[1] for line in out.splitlines()[1:7]]
        assert labels == ["e@X:1", "e@X:a", "e@X:b", "e@X:ab", "g@D:1", "g@D:h"]


def test_ages(capsys):
    code, out, _ = run(capsys, "ages", corpus_path("c2_z3"))
    assert code == 0
    assert out.splitlines() == [
        "e   C2      0",
        "g   origin  1",
        "g2  origin  1",
    ]


class TestCompare:
    def test_kummer_iso(self, capsys):
        code, out, _ = run(
            capsys, "compare", corpus_path("kummer"),
            "--resolution", corpus_path("kummer_resolution"),
            "--map", corpus_path("kummer_skeleton"),
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "degree  orbifold  resolution"
        assert "s[g@p0:1]^2 = -1/2" in lines
        assert lines[-1] == "verdict: iso with s^2 = -1/2"

    def test_dimensions_only(self, capsys):
        code, out, _ = run(capsys, "compare", corpus_path("kummer"), "--resolution", corpus_path("kummer_resolution"))
        assert code == 0
        assert out.splitlines()[-1] == "verdict: dimensions match"

    def test_json(self, capsys):
        code, out, _ = run(
            capsys, "compare", corpus_path("kummer"),
            "--resolution", corpus_path("kummer_resolution"),
            "--map", corpus_path("kummer_skeleton"), "--json",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["status"] == "solved"
        assert set(payload["squares"].values()) == {"-1/2"}
        assert payload["passed"] is True
