import json

import numpy as np
import pytest

from triqwit.catalog import named_setting
from triqwit.exceptions import NoThresholdError, TriqwitError
from triqwit.observables import WitnessSetting
from triqwit.report import (CLAIMS, DiscrepancyLedger, find_claim, find_threshold, render)
from triqwit.scan import parse_grid, scan_witness, to_csv

PAULI = WitnessSetting.pauli()


def test_parse_grid_inclusive():
    name, vals = parse_grid("p:0:1:0.25")
    assert name == "p" and np.allclose(vals, [0, 0.25, 0.5, 0.75, 1])
    assert len(parse_grid("b:0:1:0.01")[1]) == 101
    for bad in ("p:0:1", "p:0:1:0.3", "p:1:0:0.1", ":0:1:0.5", "p:0:1:-1"):
        with pytest.raises(TriqwitError):
            parse_grid(bad)


def test_scan_row_major_and_csv():
    grid = [parse_grid("p:0:1:0.5"), parse_grid("b:0:1:1")]
    rows = scan_witness("rho3", grid, "T1", named_setting("example2"))
    assert [r[0] for r in rows] == [(0, 0), (0, 1), (0.5, 0), (0.5, 1), (1, 0), (1, 1)]
    text = to_csv(["p", "b"], rows)
    lines = text.splitlines()
    assert lines[0] == "p,b,value" and len(lines) == 7
    # I/8 gives T1 = 1 for every b
    assert rows[0][1] == pytest.approx(1.0) and rows[1][1] == pytest.approx(1.0)


def test_scan_grid_checks():
    with pytest.raises(TriqwitError):
        scan_witness("rho3", [parse_grid("p:0:1:0.5")], "T1", PAULI)
    with pytest.raises(TriqwitError):
        scan_witness("rho_w", [parse_grid("p:0:2:1")], "T1", PAULI)


def test_w_noise_thresholds():
    f1 = find_threshold("rho_w", "F1", PAULI, 0.0)
    assert f1.root == pytest.approx((-6 + np.sqrt(36 + 4 * 19 * 9)) / 38, abs=1e-9)
    fs = find_threshold("rho_w", "Fsum", PAULI, -2.0)
    assert fs.root == pytest.approx((-6 + np.sqrt(36 + 4 * 19 * 15)) / 38, abs=1e-9)
    assert not fs.increasing


def test_threshold_errors():
    with pytest.raises(NoThresholdError):
        find_threshold("rho_w", "T1", PAULI, -50.0)
    with pytest.raises(TriqwitError):
        find_threshold("rho3", "T1", PAULI, 0.0)
    with pytest.raises(TriqwitError):
        find_threshold("ghz", "T1", PAULI, 0.0)


def test_ledger_records_deltas():
    ledger = DiscrepancyLedger()
    claim = find_claim("threshold", "rho_w", "Fsum", "pauli", -2.0)
    entry = ledger.record(claim, 0.744551, {"p": 0.744551})
    assert entry.reported == 0.92 and entry.abs_diff == pytest.approx(0.175449)
    rows = [json.loads(line) for line in ledger.to_jsonl().splitlines()]
    assert rows[0]["claim"] == "rho_w/Fsum<-2"


def test_claim_lookup():
    assert find_claim("value", "rho1", "T1", "example1").reported == pytest.approx(-16 / 9)
    assert find_claim("value", "rho1", "T1", "pauli") is None
    assert find_claim("threshold", "rho_w", "F2", "pauli", 0.0).key == "rho_w/F_l<0"
    sb = find_claim("value", "sigma_b", "T1", "example2")
    assert sb.reported_value({"b": 0.5}) == pytest.approx(-0.2892052573, abs=1e-9)
    assert len({c.key for c in CLAIMS}) == len(CLAIMS)


def test_render_formats():
    rep = {"a": 1.5, "flags": {"x": True}, "v": [1.0, 2.0]}
    assert render(rep) == "a: 1.5\nflags.x: true\nv: 1.0 2.0\n"
    assert json.loads(render(rep, machine=True)) == rep
