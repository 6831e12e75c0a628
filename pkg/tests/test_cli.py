import io
import json
import logging
import subprocess
import sys

import pytest

from totient_strata import strata
from totient_strata.cli import parse_ells, parse_int, run


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    return code, buf.getvalue()


@pytest.fixture(autouse=True)
def _no_env_cache(monkeypatch):
    monkeypatch.delenv("TOTIENT_STRATA_CACHE", raising=False)


def test_parse_int():
    assert parse_int("10^6+2") == 1000002
    assert parse_int("5*10**7") == 50000000
    assert parse_int("1e6") == 10**6
    assert parse_int("42") == 42
    for bad in ("abc", "2**1000000", "__import__('os')", "1.5"):
        with pytest.raises(Exception):
            parse_int(bad)


def test_parse_ells():
    assert parse_ells(["2-7"]) == [2, 3, 4, 5, 6, 7]
    assert parse_ells(["2,3", "9"]) == [2, 3, 9]


def test_invphi():
    assert call("invphi", "4") == (0, "5 8 10 12\n")
    code, out = call("invphi", "3", "--format", "json")
    assert code == 0 and json.loads(out) == {"m": 3, "multiplicity": 0, "elements": []}
    assert call("mult", "24") == (0, "10\n")


def test_sieve_and_classify():
    code, out = call("sieve", "--hi", "5", "--omega")
    assert out == "n,phi,omega\n1,1,0\n2,1,1\n3,2,1\n4,2,1\n"
    code, out = call("classify", "3")
    assert out.splitlines()[1] == "3,4,QUAD,3,2"
    assert call("rt", "--x", "10", "--t", "2") == (0, "2 4 6 8\n")


def test_table1():
    code, out = call("table1", "--x", "10^3+2")
    assert code == 0
    assert out == "x,pi,v1_mult2,v1_mult4,ratio\n1002,168,87,5,0.517857\n"


def test_tables_and_strata():
    code, out = call("tablemax", "--x", "4", "--ell", "2")
    assert out == "x,ell,max_mult\n4,2,4\n"
    code, out = call("strata", "--x", "10")
    assert out.splitlines() == ["x,ell,v_count,s_sum,max_mult,v_total", "10,1,3,9,4,6", "10,2,1,4,4,6", "10,3,1,5,5,6"]
    code, out = call("ell", "--x", "16", "--format", "json")
    assert json.loads(out)["ell"] is not None
    code, out = call("table2", "--x", "1000", "--ell", "2-4", "--format", "json")
    assert [r["ell"] for r in json.loads(out)] == [2, 3, 4]


def test_dickson():
    code, out = call("dickson", "--k", "2", "--bound", "100", "--verify")
    body = json.loads(out)
    assert code == 0 and body["n"] == 3 and body["verified_multiplicity"] >= 2
    code, out = call("dickson", "--k", "2", "--bound", "0")
    assert json.loads(out)["found"] is False


def test_lift():
    code, out = call("lift", "--m", "4", "--p", "7")
    assert out.splitlines()[1] == "4,7,24,4,10"
    assert call("lift", "--m", "4", "--p", "3")[0] == 1


def test_check():
    code, out = call("check", "--x", "16")
    assert code == 0 and ",fail," not in out


def test_exit_codes(capsys):
    assert call("invphi", "0")[0] == 1
    assert call("nosuch")[0] == 1
    assert call()[0] == 1
    assert call("table1", "--x", "10^6", "--sieve-limit", "1000")[0] == 2
    assert call("invphi", "2^61")[0] == 2
    assert call("sieve", "--hi", "100", "--segment-size", "100", "--memory-cap", "10")[0] == 1
    assert call("classify", "4")[0] == 1


def test_out_file(tmp_path):
    target = tmp_path / "t.csv"
    code, out = call("table1", "--x", "1002", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text() == "x,pi,v1_mult2,v1_mult4,ratio\n1002,168,87,5,0.517857\n"


def test_cache_hit_identical(tmp_path):
    args = ["table2", "--x", "5000", "--ell", "2-8", "--cache-dir", str(tmp_path)]
    strata.clear_memo()
    first = call(*args)
    assert list(tmp_path.glob("*.meta.json"))
    strata.clear_memo()
    second = call(*args)
    strata.clear_memo()
    uncached = call("table2", "--x", "5000", "--ell", "2-8", "--no-cache")
    assert first == second == uncached


def test_cache_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("TOTIENT_STRATA_CACHE", str(tmp_path))
    strata.clear_memo()
    call("table1", "--x", "2002")
    assert list(tmp_path.glob("*.meta.json"))


def test_corrupt_cache_recomputed(tmp_path, caplog):
    args = ["table1", "--x", "3002", "--cache-dir", str(tmp_path)]
    strata.clear_memo()
    first = call(*args)
    (payload,) = [p for p in tmp_path.glob("*.json") if not p.name.endswith(".meta.json")]
    payload.write_text(payload.read_text().replace("3002", "3003"))
    strata.clear_memo()
    with caplog.at_level(logging.WARNING):
        again = call(*args)
    assert again == first
    assert any("corrupt" in r.message for r in caplog.records)
    # the recomputed entry was written back and is valid
    strata.clear_memo()
    caplog.clear()
    assert call(*args) == first
    assert not any("corrupt" in r.message for r in caplog.records)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "totient_strata", "invphi", "4"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "5 8 10 12\n"
    res = subprocess.run([sys.executable, "-m", "totient_strata", "invphi", "-5"], capture_output=True, text=True)
    assert res.returncode == 1


def test_backend_env_switch():
    import os

    env = dict(os.environ, TOTIENT_STRATA_PURE="1")
    res = subprocess.run([sys.executable, "-m", "totient_strata", "--backend"], capture_output=True, text=True, env=env)
    assert res.stdout.strip() == "numpy"
    res = subprocess.run([sys.executable, "-m", "totient_strata", "--backend", "invphi", "2"],
                         capture_output=True, text=True, env=env)
    assert res.returncode == 0
