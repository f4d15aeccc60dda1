from __future__ import annotations

import json

import pytest

from pyradesign.catalog import Catalog, design_id
from pyradesign.cli import main
from pyradesign.config import worker_count
from pyradesign.errors import DesignError, PyradesignError
from pyradesign.geometry import pg_design
from pyradesign.io import (
    certificate_from_dict,
    certificate_to_dict,
    load_design,
    load_designs,
    save_design,
    witness_from_dict,
    witness_to_dict,
)
from pyradesign.decomposition import decompose
from pyradesign.pyramidal import build_group


def test_design_round_trip(tmp_path, pg4):
    path = tmp_path / "pg4.json"
    save_design(pg4, path)
    assert load_design(path) == pg4


def test_out_of_range_point_names_the_index(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"v": 3, "blocks": [[0, 1], [0, 3], [1, 2]]}))
    with pytest.raises(DesignError, match=r"blocks\[1\].*3"):
        load_design(path)


def test_duplicate_block_rejected(tmp_path):
    path = tmp_path / "dup.json"
    path.write_text(json.dumps({"v": 3, "blocks": [[0, 1], [1, 0], [1, 2]]}))
    with pytest.raises(DesignError, match="duplicate"):
        load_design(path)


def test_malformed_json_has_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"v": 3,\n "blocks": [[0, 1]')
    with pytest.raises(DesignError, match="line 2"):
        load_design(path)


def test_non_canonical_input_is_canonicalized(tmp_path, D7):
    path = tmp_path / "d7.json"
    blocks = [list(reversed(b)) for b in reversed(D7.block_points())]
    path.write_text(json.dumps({"v": 7, "blocks": blocks}))
    d = load_design(path)
    assert d == D7
    out = tmp_path / "canon.json"
    save_design(d, out)
    assert json.loads(out.read_text())["blocks"] == D7.block_points()


def test_witness_and_certificate_round_trip(D7):
    w = decompose(D7, D7.block_index[0b1111000], 0b0111000)
    assert witness_from_dict(json.loads(json.dumps(witness_to_dict(w)))) == w
    cert = build_group(D7, D7.block_index[0b1111000])
    back = certificate_from_dict(json.loads(json.dumps(certificate_to_dict(cert))))
    assert back.element_set() == cert.element_set() and back.fixed == cert.fixed


def test_catalog(tmp_path, pg4, D7):
    cat = Catalog(tmp_path / "cat")
    e1 = cat.add(pg4, ["pg"], "test")
    cat.add(pg4, ["rank4"], "test")
    cat.add(D7, ["small"], "test")
    assert e1.id == design_id(pg4)
    again = Catalog(tmp_path / "cat")
    assert len(again.entries()) == 2
    assert [e.id for e in again.find("rank4")] == [e1.id]
    assert set(again.find("rank4")[0].tags) == {"pg", "rank4"}
    assert again.load(e1.id) == pg4


def test_worker_count(monkeypatch):
    monkeypatch.delenv("PYRADESIGN_THREADS", raising=False)
    assert worker_count() == 1
    monkeypatch.setenv("PYRADESIGN_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("PYRADESIGN_THREADS", "zero")
    with pytest.raises(PyradesignError):
        worker_count()


def test_cli_construct_verify_analyze(tmp_path, capsys):
    out = tmp_path / "pg3.json"
    assert main(["construct", "pg", "--r", "3", "--out", str(out)]) == 0
    assert load_design(out) == pg_design(3)
    report = tmp_path / "rep.json"
    assert main(["verify", str(out), "--report", str(report)]) == 0
    assert json.loads(report.read_text())["ok"] is True
    capsys.readouterr()
    assert main(["analyze", str(out), "--pg-criterion", "--center-blocks"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["pg_criterion"] is True and len(data["center_blocks"]) == 7


def test_cli_verify_fails_on_bad_design(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"v": 4, "blocks": [[0, 1], [2, 3], [0, 2], [1, 3]]}))
    assert main(["verify", str(path)]) == 1


def test_cli_error_exit_code(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{")
    assert main(["verify", str(path)]) == 2
    assert "error:" in capsys.readouterr().err


def test_cli_unknown_tier_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["accept", "r7"])
    assert exc.value.code == 2


def test_cli_decompose_sum_group_theorem(tmp_path, D7):
    design = tmp_path / "d7.json"
    save_design(D7, design)
    block = D7.block_index[0b1111000]
    w = tmp_path / "w.json"
    assert main(["decompose", str(design), "--block", str(block), "--z", "3,4,5", "--out", str(w)]) == 0
    raw = json.loads(w.read_text())
    assert set(raw) >= {"O", "Z", "designO", "designZ", "delta"}
    back = tmp_path / "back.json"
    assert main(["sum", "--witness", str(w), "--out", str(back)]) == 0
    assert load_design(back) == D7
    cert = tmp_path / "cert.json"
    figs = tmp_path / "figs"
    assert main(["group", "build", str(design), "--block", str(block), "--out", str(cert), "--figures", str(figs)]) == 0
    assert (figs / "orbit_table.png").stat().st_size > 0
    assert main(["group", "verify", str(design), str(cert)]) == 0
    assert main(["theorem", "verify", str(design), str(cert)]) == 0


def test_cli_group_verify_rejects_tampered_certificate(tmp_path, D7):
    design = tmp_path / "d7.json"
    save_design(D7, design)
    cert = build_group(D7, D7.block_index[0b1111000])
    raw = certificate_to_dict(cert)
    raw["elements"] = raw["elements"][:-1]
    path = tmp_path / "cert.json"
    path.write_text(json.dumps(raw))
    assert main(["group", "verify", str(design), str(path)]) == 1


def test_cli_search_and_stabilizer(tmp_path):
    out = tmp_path / "cliques.json"
    assert main(["search", "cliques", "--n", "7", "--m", "2", "--size", "7", "--out", str(out)]) == 0
    assert len(load_designs(out)) == 30
    design = tmp_path / "pg3.json"
    save_design(pg_design(3), design)
    st = tmp_path / "st.json"
    assert main(["stabilizer", str(design), "--fixed", "0,1,2", "--out", str(st)]) == 0
    assert len(json.loads(st.read_text())["elements"]) == 4


def test_cli_delta_search(tmp_path, D7):
    design = tmp_path / "d7.json"
    save_design(D7, design)
    w = tmp_path / "w.json"
    main(["decompose", str(design), "--block", str(D7.block_index[0b1111000]), "--z", "3,4,5", "--out", str(w)])
    out = tmp_path / "found.json"
    figs = tmp_path / "figs"
    rc = main(["delta-search", "--witness", str(w), "--predicate", "all", "--out", str(out), "--figures", str(figs)])
    assert rc == 0
    assert len(json.loads(out.read_text())["deltas"]) == 6
    assert (figs / "delta_split.png").exists()


def test_cli_catalog(tmp_path, capsys):
    design = tmp_path / "pg3.json"
    save_design(pg_design(3), design)
    assert main(["catalog", "add", str(design), "--dir", str(tmp_path / "cat"), "--tag", "pg"]) == 0
    capsys.readouterr()
    assert main(["catalog", "list", "--dir", str(tmp_path / "cat"), "--tag", "pg"]) == 0
    assert design_id(pg_design(3)) in capsys.readouterr().out


def test_cli_accept_r3(tmp_path):
    report = tmp_path / "accept.json"
    assert main(["accept", "r3", "--report", str(report), "--figures", str(tmp_path)]) == 0
    data = json.loads(report.read_text())
    assert data["ok"] and (tmp_path / "accept_r3.png").exists()
