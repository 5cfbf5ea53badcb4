import json

import jsonschema
import pytest

from flagblock.blocker_model import FlagSpec, PositionSet, flag_positions
from flagblock.cli import run
from flagblock.oracle import intersection_count
from flagblock.perm_core import Permutation
from flagblock.report import load_schema


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("BLOCKER_CACHE_DIR", str(tmp_path / "cache"))


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def validate(name, doc):
    jsonschema.validate(doc, load_schema(name))


@pytest.fixture
def flag_file(tmp_path):
    path = tmp_path / "flag_10_7_3.json"
    path.write_text(flag_positions(FlagSpec(10, 7, 3)).to_json())
    return path


def test_avoiders_count_only(capsys):
    assert call(capsys, "avoiders", "--n", "5", "--count-only") == (0, "42\n", "")


def test_avoiders_json(capsys):
    code, out, _ = call(capsys, "avoiders", "--n", "3", "--json")
    doc = json.loads(out)
    validate("avoiders", doc)
    assert code == 0 and doc["count"] == 5 and doc["avoiders"][0] == [1, 3, 2]


def test_avoiders_text_and_limit(capsys):
    code, out, _ = call(capsys, "avoiders", "--n", "3")
    assert out.splitlines() == ["1 3 2", "2 1 3", "2 3 1", "3 1 2", "3 2 1"]
    code, out, err = call(capsys, "avoiders", "--n", "13", "--count-only")
    assert code == 2 and "limit" in err and out == ""


def test_hankel_letters(capsys):
    code, out, _ = call(capsys, "hankel", "--n", "6")
    assert out.splitlines() == ["abcdef", "bcdefa", "cdefab", "defabc", "efabcd", "fabcde"]


def test_hankel_coverage_from_grid(capsys, tmp_path):
    grid = tmp_path / "l.txt"
    grid.write_text("..XXXX\n.....X\n.....X\n......\n......\n......\n")
    code, out, _ = call(capsys, "hankel", "--file", str(grid), "--json")
    doc = json.loads(out)
    validate("hankel", doc)
    assert doc["coverage"] == [1] * 6
    code, out, _ = call(capsys, "hankel", "--file", str(grid))
    assert out.splitlines()[0] == "abCDEF"


def test_hankel_numeric_labels_past_26(capsys):
    code, out, _ = call(capsys, "hankel", "--n", "27")
    assert out.splitlines()[0].split()[:3] == ["0", "1", "2"]


def test_flag_and_lshape(capsys):
    code, out, _ = call(capsys, "flag", "--n", "10", "--m", "7", "--t", "3", "--json")
    doc = json.loads(out)
    validate("position_set", doc)
    assert len(doc["cells"]) == 19 and doc["cells"] == sorted(doc["cells"])
    code, out, _ = call(capsys, "lshape", "--n", "6", "--s", "4", "--r", "3")
    assert out.splitlines()[:3] == ["..XXXX", ".....X", ".....X"]
    code, _, err = call(capsys, "flag", "--n", "5", "--m", "3", "--t", "3")
    assert code == 2 and "m-1" in err


def test_verify_minimum_flag_file(capsys, flag_file):
    code, out, _ = call(capsys, "verify", "--file", str(flag_file), "--minimum", "--json")
    doc = json.loads(out)
    validate("verdict", doc)
    assert code == 0 and doc["is_blocker"] and doc["is_minimum"]
    assert len(doc["private_witnesses"]) == 19


def test_verify_minimal_violation(capsys, flag_file):
    code, out, _ = call(capsys, "verify", "--file", str(flag_file), "--minimal", "--json")
    assert code == 1 and json.loads(out)["is_minimal"] is False


def test_verify_non_blocker_reports_confirmed_witness(capsys, tmp_path):
    path = tmp_path / "b.txt"
    ps = PositionSet(5, [(1, 1), (2, 2), (5, 5)])
    path.write_text(ps.to_grid())
    code, out, _ = call(capsys, "verify", "--file", str(path), "--json")
    doc = json.loads(out)
    validate("verdict", doc)
    assert code == 1 and doc["is_blocker"] is False
    assert intersection_count(Permutation(tuple(doc["witness"])), ps) == 0
    code, out, _ = call(capsys, "verify", "--file", str(path))
    assert "witness" in out


def test_verify_requires_input(capsys):
    code, _, err = call(capsys, "verify")
    assert code == 2


def test_bad_usage_exit_code(capsys):
    assert call(capsys, "frobnicate")[0] == 2
    assert call(capsys, "avoiders")[0] == 2


def test_once(capsys):
    code, out, _ = call(capsys, "once", "--flag", "5", "4", "2", "--json")
    doc = json.loads(out)
    validate("once", doc)
    assert code == 0 and doc["count"] == len(doc["avoiders"]) > 0


def test_face_rank_single_and_scan(capsys):
    code, out, _ = call(capsys, "face-rank", "--flag", "6", "4", "2", "--json")
    doc = json.loads(out)
    validate("face_report", doc)
    assert (doc["rank"], doc["lower_bound"], doc["upper_bound"]) == (21, 18, 22)
    code, out, _ = call(capsys, "face-rank", "--n", "5", "--all-flags", "--json")
    validate("face_rank_scan", json.loads(out))


def test_face_rank_csv_scan_reports_lower_bound_violations(capsys):
    code, out, _ = call(capsys, "face-rank", "--n", "6", "--all-flags", "--csv")
    lines = out.splitlines()
    assert lines[0] == "n,m,t,once_count,rank,lower,upper,meets_upper,within_bounds"
    assert len(lines) == 1 + 21
    bad = [ln for ln in lines[1:] if ln.endswith(",false")]
    assert [ln.split(",")[:3] for ln in bad] == [["6", "6", str(t)] for t in range(1, 5)]
    assert code == 1


def test_face_rank_csv_clean_order(capsys):
    code, out, _ = call(capsys, "face-rank", "--n", "2", "--all-flags", "--csv")
    assert code == 0 and all(ln.endswith(",true") for ln in out.splitlines()[1:])


def test_corner_check(capsys):
    code, out, _ = call(capsys, "corner-check", "--n", "7", "--all-flags", "--json")
    doc = json.loads(out)
    validate("corner_check", doc)
    assert code == 0 and len(doc) == 28 and all(r["corner_clear"] for r in doc)
    assert call(capsys, "corner-check", "--n", "10", "--m", "8", "--t", "3")[0] == 0


def test_card_audit(capsys):
    code, out, _ = call(capsys, "card-audit", "--n", "9", "--json")
    doc = json.loads(out)
    validate("card_audit", doc)
    assert code == 0 and 23 in doc["discrepancies"]
    code, out, _ = call(capsys, "card-audit", "--n", "9")
    assert "  23" in out and "discrepancy" in out


def test_search_jsonl(capsys):
    code, out, _ = call(capsys, "search", "--n", "3", "--json", "--no-dedup")
    records = [json.loads(line) for line in out.splitlines()]
    for rec in records:
        validate("search_result", rec)
    assert code == 0 and len(records) == 15


def test_search_budget_exit_code(capsys):
    code, _, err = call(capsys, "search", "--n", "5", "--budget", "20")
    assert code == 3 and "incomplete" in err


def test_search_n7_needs_flag_and_budget(capsys):
    assert call(capsys, "search", "--n", "7")[0] == 2
    assert call(capsys, "search", "--n", "7", "--limit", "7")[0] == 2


def test_conjecture(capsys):
    code, out, _ = call(capsys, "conjecture", "--n", "4", "--json")
    doc = json.loads(out)
    validate("conjecture", doc)
    assert code == 0 and doc["max_found"] == 6 and not doc["falsified"]
    code, out, _ = call(capsys, "conjecture", "--n", "5", "--json")
    assert code == 1 and json.loads(out)["falsified"]


def test_out_file_and_manifest(capsys, tmp_path, flag_file):
    out = tmp_path / "r.json"
    man = tmp_path / "m.json"
    code = run(["verify", "--file", str(flag_file), "--json", "--out", str(out), "--manifest", str(man)])
    assert code == 0 and capsys.readouterr().out == ""
    assert json.loads(out.read_text())["is_blocker"]
    doc = json.loads(man.read_text())
    validate("manifest", doc)
    assert doc["outcome"] == "success" and doc["input_hash"].startswith("sha256:")


def test_manifest_incomplete(capsys, tmp_path):
    man = tmp_path / "m.json"
    run(["search", "--n", "5", "--budget", "20", "--manifest", str(man)])
    assert json.loads(man.read_text())["outcome"] == "incomplete"


def test_avoider_cache_round_trip(capsys, tmp_path):
    code, out, _ = call(capsys, "avoiders", "--n", "9", "--count-only")
    assert out == "4862\n"
    files = list((tmp_path / "cache").glob("avoiders-*-n9.json"))
    assert len(files) == 1
    files[0].write_text("{corrupt")
    assert call(capsys, "avoiders", "--n", "9", "--count-only")[1] == "4862\n"
    assert call(capsys, "avoiders", "--n", "9", "--count-only", "--no-cache")[1] == "4862\n"
