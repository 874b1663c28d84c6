import json

import jsonschema
import pytest

from twistcalc.cli import ENVELOPE_KEYS, main
from twistcalc.freegrp import data_root

SCHEMA = json.loads((data_root() / "envelope.schema.json").read_text())


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv, **kw):
    code, out, _ = run(capsys, *argv, "--json", **kw)
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert tuple(doc) == tuple(sorted(ENVELOPE_KEYS))
    assert doc["exit_code"] == code
    return code, doc


CASES = [
    (("feasibility", "--j", "1", "--k", "1"), 0, "LanternForced"),
    (("feasibility", "--j", "0", "--k", "3"), 1, "Infeasible"),
    (("feasibility", "--j", "1", "--k", "-1"), 1, "Infeasible"),
    (("two-chain", "--k", "6"), 0, "TwoChainForced"),
    (("two-chain", "--k", "5"), 1, "Infeasible"),
    (("two-chain", "--k", "36"), 0, "TwoChainForced"),
    (("two-chain", "--k", "0"), 2, "error"),
    (("verify", "lantern"), 0, "RelationHolds"),
    (("verify", "two-chain", "--k", "6"), 0, "RelationHolds"),
    (("verify", "two-chain", "--k", "3"), 1, "RelationFails"),
    (("sweep", "--formula", "3", "--model", "torus", "--max-pq", "6", "--max-n", "4"), 0, "pass"),
    (("sweep", "--formula", "1", "--model", "s04", "--max-pq", "5", "--max-n", "3"), 0, "pass"),
    (("sweep", "--formula", "3", "--model", "torus", "--max-pq", "0", "--max-n", "1"), 2, "error"),
    (("sweep", "--formula", "2", "--model", "klein", "--max-pq", "2", "--max-n", "1"), 2, "error"),
    (("eval", "T_x T_y", "--bind", "torus-xy.bind"), 0, "value"),
    (("eval", "T_x T_y = T_y T_x", "--bind", "torus-xy.bind", "--relation"), 1, "RelationFails"),
    (("eval", "T_x^0", "--bind", "torus-xy.bind"), 0, "value"),
    (("eval", "T_x^", "--bind", "torus-xy.bind"), 2, "error"),
    (("eval", "T_x", "--bind", "missing.bind"), 2, "error"),
    (("chain-order", "--n", "2"), 0, "matches"),
    (("chain-order", "--n", "3"), 0, "matches"),
    (("chain-order", "--n", "9"), 2, "error"),
    (("feasibility", "--j", "x", "--k", "1"), 2, "error"),
]


@pytest.mark.parametrize("argv,code,status", CASES)
def test_exit_codes_and_status(capsys, argv, code, status):
    got, doc = run_json(capsys, *argv)
    assert (got, doc["status"]) == (code, status)
    text_code, out, err = run(capsys, *argv)
    assert text_code == code
    if code == 2:
        assert "error" in err
    else:
        assert status in out or status in ("pass", "matches", "value")


def test_feasibility_witness_matrix(capsys):
    _, doc = run_json(capsys, "feasibility", "--j", "1", "--k", "-1")
    cases = doc["result"]["witness"]["data"]
    s04 = [c for c in cases if c["details"]["ain_xy"] == 0][0]
    assert s04["witness"]["data"]["matrix"] == [[5, 2], [2, 1]]


def test_two_chain_outputs(capsys):
    _, doc = run_json(capsys, "two-chain", "--k", "6")
    assert doc["result"]["power"] == 1
    _, doc = run_json(capsys, "two-chain", "--k", "36")
    assert doc["result"]["power"] == 6
    _, doc = run_json(capsys, "two-chain", "--k", "5")
    assert doc["result"]["witness"]["data"]["matrix"] == [[1, -1], [1, 0]]


def test_eval_golden(capsys):
    _, doc = run_json(capsys, "eval", "T_x T_y", "--bind", "torus-xy.bind")
    assert doc["result"]["value"] == [[0, 1], [-1, 1]]
    _, doc = run_json(capsys, "eval", "T_x^0", "--bind", "torus-xy.bind")
    assert doc["result"]["value"] == [[1, 0], [0, 1]]
    assert doc["result"]["warnings"]


def test_eval_parse_error_position(capsys):
    _, doc = run_json(capsys, "eval", "T_x^", "--bind", "torus-xy.bind")
    assert (doc["error"]["line"], doc["error"]["column"]) == (1, 5)
    assert "<integer>" in doc["error"]["expected"]


def test_eval_stdin(capsys, monkeypatch):
    code, doc = run_json(capsys, "eval", "-", "--bind", "two-chain", "--relation",
                         stdin="(T_x T_y)^6 = T_c\n", monkeypatch=monkeypatch)
    assert code == 0 and doc["status"] == "RelationHolds"


def test_verify_witness_flag(capsys):
    _, doc = run_json(capsys, "verify", "lantern")
    assert doc["result"]["witness"] is None
    _, doc = run_json(capsys, "verify", "lantern", "--witness")
    assert doc["result"]["witness"]["kind"] == "generator-images"
    code, out, _ = run(capsys, "verify", "two-chain", "--k", "3", "--witness")
    assert code == 1 and "witness" in out


def test_verify_reports_invalid_data(capsys, monkeypatch, tmp_path):
    src = (data_root() / "presentations" / "lantern.yaml").read_text()
    (tmp_path / "presentations").mkdir()
    (tmp_path / "presentations" / "lantern.yaml").write_text(src.replace("basepoint_boundary: b4",
                                                                          "basepoint_boundary: b9"))
    monkeypatch.setenv("TWISTCALC_DATA", str(tmp_path))
    code, doc = run_json(capsys, "verify", "lantern")
    assert code == 2 and "basepoint boundary" in doc["error"]["message"]


def test_json_is_stable(capsys):
    a = run(capsys, "sweep", "--formula", "2", "--model", "s04", "--max-pq", "2", "--max-n", "1", "--json")[1]
    b = run(capsys, "sweep", "--formula", "2", "--model", "s04", "--max-pq", "2", "--max-n", "1", "--json")[1]
    assert a == b
