import csv
import io
import json
import os

import pytest

from unproj_lab import cli
from unproj_lab.polyring import ParseError

DATA = os.path.join(os.path.dirname(__file__), "data")


def data(name):
    return os.path.join(DATA, name)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_invariants_text_and_json(capsys):
    code, out, _ = run(capsys, "invariants", data("caviglia2.ideal"))
    assert code == cli.EXIT_OK and "reg 3" in out
    code, out, _ = run(capsys, "invariants", data("caviglia2.ideal"), "--json")
    obj = json.loads(out)
    assert set(obj) == {"nvars", "dim", "deg", "codim", "reg", "pd", "depth", "betti", "input"}
    assert (obj["reg"], obj["pd"]) == (3, 4)
    assert set(obj["betti"]) == {"entries", "reg", "pd"}


def test_invariants_csv_and_transposed(capsys):
    _, out, _ = run(capsys, "invariants", data("twisted_cubic.ideal"), "--csv")
    assert out.strip() == "j\\i,0,1\n2,3,2"
    _, out, _ = run(capsys, "invariants", data("twisted_cubic.ideal"), "--transposed-betti")
    assert any(line.split()[:2] == ["i\\j", "2"] for line in out.splitlines())


def test_char_override_agrees(capsys):
    _, a, _ = run(capsys, "invariants", data("twisted_cubic.ideal"), "--json")
    _, b, _ = run(capsys, "invariants", data("twisted_cubic.ideal"), "--json", "--char", "QQ")
    strip = lambda s: {k: v for k, v in json.loads(s).items() if k != "input"}
    assert strip(a) == strip(b)


def test_missing_file_and_parse_errors(capsys, tmp_path):
    code, _, err = run(capsys, "invariants", str(tmp_path / "nope.ideal"))
    assert code == cli.EXIT_PARSE and err
    bad = tmp_path / "bad.ideal"
    bad.write_text("ring: x y over 7\ngens:\nx^2 + * y\n")
    code, _, err = run(capsys, "invariants", str(bad))
    assert code == cli.EXIT_PARSE and "unexpected" in err
    with pytest.raises(ParseError):
        cli.parse_ideal_file("gens:\nx\n")
    with pytest.raises(ParseError):
        cli.parse_ideal_file("ring: x y over 7\npoint: 1\n")
    with pytest.raises(ParseError):
        cli.parse_ideal_file("ring: x y over seven\n")


def test_ideal_file_roundtrip():
    F = cli.read_ideal_file(data("sextic.ideal"))
    I = F.ideal()
    again = cli.parse_ideal_file(cli.format_ideal_file(I, a=F.poly("a"), f=F.poly("f")))
    assert again.ideal().gens == I.gens
    assert again.a == str(F.poly("a")) and again.f == str(F.poly("f"))


def test_pei_command(capsys):
    code, out, _ = run(capsys, "pei", data("twisted_cubic.ideal"), "--point", "1 1 1 1", "--json")
    obj = json.loads(out)
    assert code == 0 and obj["generically_finite"] and obj["degree_formula"]
    assert obj["z_in_X"] and obj["deg_X"] == 3
    code, out, _ = run(capsys, "pei", data("twisted_cubic.ideal"), "--point", "1 1 1 1",
                       "--upto", "0")
    assert code == 0 and "K_0" in out


def test_unproject_exit_codes(capsys):
    code, out, _ = run(capsys, "unproject", data("conic_notfake.ideal"))
    assert code == cli.EXIT_NOT_FAKE and "x2" in out
    code, out, _ = run(capsys, "unproject", data("conic_quartic.ideal"), "--direct", "--json")
    obj = json.loads(out)
    assert code == 0 and obj["fake"] and obj["path"] == "regular_sequence"
    assert (obj["deg_X"], obj["reg_X"], obj["pd_X"]) == (4, 3, 2)
    assert obj["direct"] == {"deg": 4, "reg": 3, "pd": 2}
    code, _, _ = run(capsys, "unproject", data("caviglia2.ideal"))
    assert code == cli.EXIT_PARSE


def test_family_command(capsys):
    code, out, _ = run(capsys, "family", "thm43", "--a", "2,4", "--b", "3", "--c", "4", "--json")
    obj = json.loads(out)
    assert code == 0 and obj["predicted"]["reg_lb"] == 15 and obj["computed"]["reg"] == 15
    assert obj["bound_holds"]
    code, _, err = run(capsys, "family", "thm43", "--a", "3,4", "--b", "3", "--c", "4")
    assert code == cli.EXIT_CONSTRAINT and "a_1 < b_1" in err
    code, out, _ = run(capsys, "family", "thm43", "--a", "2,4", "--b", "3", "--c", "4",
                       "--no-compute")
    assert code == 0 and "computed" not in out


def test_timeout_aborts(capsys):
    code, _, err = run(capsys, "reproduce", "example53", "--timeout-s", "0.2")
    assert code == cli.EXIT_ABORT and "aborted" in err


def test_reproduce_elliptic_quartic(capsys):
    code, out, _ = run(capsys, "reproduce", "example34", "--json")
    obj = json.loads(out)
    assert code == 0 and obj["pass"] and all(r["ok"] for r in obj["checks"])


def test_reproduce_unknown_name(capsys):
    code, _, err = run(capsys, "reproduce", "example99")
    assert code == cli.EXIT_PARSE and "unknown" in err


def test_parse_range():
    assert cli.parse_range("3..5") == [3, 4, 5]
    assert cli.parse_range("2,4") == [2, 4]
    assert cli.parse_range(None) == [None]


def test_sweep_serial_and_parallel_agree(capsys, tmp_path):
    out1 = tmp_path / "a.csv"
    code = cli.main(["sweep", "caviglia", "--d", "2..4", "--out", str(out1)])
    assert code == 0
    code, out2, _ = run(capsys, "sweep", "caviglia", "--d", "2..4", "--jobs", "3")
    assert code == 0
    rows1 = list(csv.DictReader(io.StringIO(out1.read_text())))
    rows2 = list(csv.DictReader(io.StringIO(out2)))
    assert list(rows1[0]) == cli.CSV_COLUMNS
    drop = lambda rows: [{k: v for k, v in r.items() if k != "ms"} for r in rows]
    assert drop(rows1) == drop(rows2)
    assert [r["reg"] for r in rows1] == ["3", "8", "15"]
