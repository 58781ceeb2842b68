import json
import shutil

import pytest

from blockforge.cli import main, parse_group_spec, UsageError
from blockforge.verify import default_fixture_dir


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def fixture_copy(tmp_path):
    dst = tmp_path / "fixtures"
    shutil.copytree(default_fixture_dir(), dst)
    return dst


def test_group_spec_parsing():
    assert parse_group_spec("SL2:3").label == "SL2(3)"
    assert parse_group_spec("Sp:2:3").label == "Sp4(3)"
    assert parse_group_spec("GL:3:-5").label == "GU3(5)"
    assert parse_group_spec("SL:3:3:-").label == "SU3(3)"
    for bad in ("SL:3", "Sp:2:3:-", "XX:2:3", "SL2:3:3:3"):
        with pytest.raises(UsageError):
            parse_group_spec(bad)


def test_blocks_compute(capsys):
    code, out, _ = run(capsys, "blocks", "--compute", "SL2:3")
    assert code == 0 and "1 2-block(s)" in out


def test_blocks_json_fixture(capsys):
    code, out, _ = run(capsys, "blocks", "su3_5.ctx", "--json")
    data = json.loads(out)
    assert code == 0 and data["n_blocks"] % 2 == 0 and data["nonprincipal_real"]


def test_blocks_real_only(capsys):
    code, out, _ = run(capsys, "blocks", "m22.ctx", "--real")
    assert code == 0 and "non-principal real blocks: none" in out


def test_usage_errors(capsys):
    assert run(capsys, "blocks")[0] == 2
    assert run(capsys, "blocks", "no_such_table.ctx")[0] == 2
    assert run(capsys, "blocks", "--compute", "XX:2:3")[0] == 2
    assert run(capsys, "witness", "A", "2", "4")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "partition", "3,x")[0] == 2


def test_table_round_trip(capsys, tmp_path):
    out_file = tmp_path / "t.ctx"
    assert run(capsys, "table", "--compute", "SL2:3", "--out", str(out_file))[0] == 0
    code, out, _ = run(capsys, "blocks", str(out_file))
    assert code == 0 and "order 24" in out


def test_witness_and_recheck(capsys, tmp_path):
    cert = tmp_path / "cert.json"
    assert run(capsys, "witness", "A", "4", "3", "+", "--out", str(cert))[0] == 0
    code, out, _ = run(capsys, "recheck", str(cert))
    assert code == 0 and "certificate OK" in out
    data = json.loads(cert.read_text())
    data["element"][0][0] = [(data["element"][0][0][0] + 1) % 3]
    cert.write_text(json.dumps(data))
    assert run(capsys, "recheck", str(cert))[0] == 1


def test_witness_exit_codes(capsys):
    assert run(capsys, "witness", "A", "3", "3", "+", "--expect-none")[0] == 0
    assert run(capsys, "witness", "A", "3", "3", "+")[0] == 1
    assert run(capsys, "witness", "A", "3", "7", "+")[0] == 1          # condition B fails
    assert run(capsys, "witness", "A", "3", "7", "+", "--require", "AC")[0] == 0
    assert run(capsys, "witness", "C", "2", "3")[0] == 0


def test_partition_commands(capsys):
    code, out, _ = run(capsys, "partition", "5,2,1")
    data = json.loads(out)
    assert code == 0 and data["two_core"] == [3, 2, 1] and not data["in_principal_2block"]
    code, out, _ = run(capsys, "partition", "--witness", "10")
    assert code == 0 and json.loads(out)["holds"]
    assert run(capsys, "partition", "--witness", "5")[0] == 2


def test_fixtures_command(capsys, fixture_copy):
    code, out, _ = run(capsys, "fixtures", "--fixtures", str(fixture_copy))
    assert code == 0 and out.count("OK") >= 9
    (fixture_copy / "m11.ctx").write_text("GROUP tampered\n")
    assert run(capsys, "fixtures", "--fixtures", str(fixture_copy))[0] == 2


def test_verify_missing_fixture_is_skipped(capsys, fixture_copy):
    (fixture_copy / "m22.ctx").unlink()
    code, out, _ = run(capsys, "verify", "--grid", "small", "--fixtures", str(fixture_copy), "--json",
                       "--no-timestamp")
    data = json.loads(out)
    assert code == 1
    assert not data["complete"]
    skipped = [t for t in data["targets"] if t["status"] == "SKIPPED"]
    assert [t["name"] for t in skipped] == ["M22"]


def test_verify_tampered_fixture_exit_2(capsys, fixture_copy):
    path = fixture_copy / "m11.ctx"
    path.write_text(path.read_text() + "# extra comment\n")
    code, _, err = run(capsys, "verify", "--grid", "small", "--fixtures", str(fixture_copy))
    assert code == 2 and "sha256 mismatch" in err


def test_verify_unknown_fixture_dir(capsys, tmp_path):
    assert run(capsys, "verify", "--fixtures", str(tmp_path / "nope"))[0] == 2


def test_verify_deterministic(capsys):
    a = run(capsys, "verify", "--grid", "small", "--json", "--no-timestamp")
    b = run(capsys, "verify", "--grid", "small", "--json", "--no-timestamp")
    assert a[0] == b[0] == 0
    assert a[1] == b[1]
    data = json.loads(a[1])
    assert "timestamp" not in data and all("runtime_s" not in t for t in data["targets"])
    assert data["result"] == "PASS" and data["complete"]
