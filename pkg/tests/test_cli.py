import json

import pytest

from isopoint.cli import EXIT_CAP, EXIT_DATA, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_invariants(capsys):
    code, out, _ = run(capsys, "invariants", "--level", "37", "--json")
    assert code == EXIT_OK
    assert json.loads(out) == {"level": 37, "index": 684, "cusps": 36, "genus": 40, "bound": 57}


def test_degrees_csv_and_json(capsys, tmp_path):
    code, out, _ = run(capsys, "degrees", "--group", "gl2@5", "--level", "5", "--csv")
    assert out.splitlines()[1] == "12,24,1/2,1"
    code, out, _ = run(capsys, "degrees", "--group", "cns+@11", "--level", "121", "--json")
    assert json.loads(out)["min_degree"] == 7260
    f = tmp_path / "g.json"
    f.write_text(json.dumps({"modulus": 5, "generators": [[1, 1, 0, 1]], "label": "u"}))
    code, out, _ = run(capsys, "degrees", "--group", str(f), "--level", "5")
    assert code == EXIT_OK and "min degree 1" in out


def test_verify_semicartan(capsys):
    code, out, _ = run(capsys, "verify", "semicartan", "--ell-range", "11..47", "--epsilon-alt", "--json")
    rows = json.loads(out)
    assert code == EXIT_OK
    assert [r["ell"] for r in rows if r["embeds"]] == [13]
    assert all(r["agrees"] for r in rows)


def test_scan_cns(capsys):
    code, out, _ = run(capsys, "scan", "cns", "--ell", "11", "--json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["bound"] == "10"
    assert {r["group_label"] for r in doc["admissible_violators"]} == {"cns+@11:C5.w0", "cns+@11:C10.w0"}


def test_classify_text(capsys):
    code, out, _ = run(capsys, "classify", "--ell", "37", "--n", "2")
    assert code == EXIT_OK
    assert "7*11^3 = 9317" in out and "isolation known" in out


def test_classify_range(capsys):
    code, out, _ = run(capsys, "classify-range", "--ells", "11..37", "--n", "1", "--json")
    doc = json.loads(out)
    assert doc["summary"]["primes_with_survivors"] == [37]


def test_facts_list(capsys):
    code, out, _ = run(capsys, "facts", "list", "--json")
    assert json.loads(out)["mazur_borel_primes"]["value"] == [2, 3, 5, 7, 11, 17, 37]


def test_data_error_exit(capsys, tmp_path):
    f = tmp_path / "t.json"
    f.write_text('[{"label": "x"}]')
    code, _, err = run(capsys, "classify", "--ell", "17", "--table", str(f))
    assert code == EXIT_DATA and "line 1" in err


def test_cap_exit(capsys, monkeypatch):
    monkeypatch.setenv("ISOPOINT_CLOSURE_CAP", "1000")
    code, _, err = run(capsys, "degrees", "--group", "gl2@7", "--level", "49")
    assert code == EXIT_CAP


def test_usage_error():
    with pytest.raises(SystemExit) as e:
        main(["invariants"])
    assert e.value.code == 2
