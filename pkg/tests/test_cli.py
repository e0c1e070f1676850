import csv
import io
import math
from pathlib import Path

import pytest

from genbessel import cli, conditions
from genbessel.janowski import JanowskiPair
from genbessel.membership import MembershipVerdict, Status

DATA = Path(__file__).parent / "data"
GOLDEN = DATA / "scan_3x1x1.csv"
SCAN_3X1X1 = ["scan", "--kappa-re", "0.4", "0.8", "3", "--kappa-im", "0", "0", "1",
              "--c-mod", "1", "1", "1", "--A", "1", "--B", "0", "--theorem", "t21", "--verify"]


def run(argv):
    out = io.StringIO()
    code = cli.main(argv, out=out)
    return code, out.getvalue()


def record(text):
    rec = {}
    for line in text.splitlines():
        if ": " in line:
            k, v = line.split(": ", 1)
            rec[k] = v
    return rec


# --- eval ----------------------------------------------------------------------


def test_eval_cos_one():
    code, text = run(["eval", "--kappa", "0.5", "--c", "1", "--z", "1", "--order", "0"])
    assert code == 0
    assert float(record(text)["value"].rstrip("j").split("+")[0]) == pytest.approx(math.cos(1), abs=1e-14)


def test_eval_origin():
    code, text = run(["eval", "--kappa", "0.5", "--c", "1", "--z", "0"])
    assert code == 0 and record(text)["value"] == "1+0j"


def test_eval_pole_exit_3(capsys):
    code, _ = run(["eval", "--kappa", "-1", "--c", "1", "--z", "1"])
    assert code == 3
    assert "kappa at nonpositive integer" in capsys.readouterr().err


def test_eval_lam_b_form():
    # lam = 0, b = 0 gives kappa = 1/2
    _, a = run(["eval", "--lam", "0", "--b", "0", "--c", "1", "--z", "0.3"])
    _, b = run(["eval", "--kappa", "0.5", "--c", "1", "--z", "0.3"])
    assert record(a)["value"] == record(b)["value"]


def test_eval_complex_with_i():
    code, text = run(["eval", "--kappa", "1+2i", "--c", "1", "--z", "0.5i"])
    assert code == 0 and record(text)["kappa"] == "1+2j"


@pytest.mark.parametrize("argv", [
    ["eval", "--kappa", "abc", "--c", "1", "--z", "1"],
    ["eval", "--kappa", "0.5", "--c", "1"],
    ["eval", "--kappa", "0.5", "--lam", "1", "--b", "0", "--c", "1", "--z", "1"],
    ["nonsense"],
])
def test_eval_usage_errors_exit_2(argv):
    assert run(argv)[0] == 2


def test_eval_outside_domain_exit_3():
    assert run(["eval", "--kappa", "1", "--c", "1", "--z", "5"])[0] == 3


# --- check -----------------------------------------------------------------------


def test_check_t31_slacks():
    code, text = run(["check", "--theorem", "t31", "--A", "1", "--B", "0", "--c", "1", "--kappa", "1"])
    rec = record(text)
    assert code == 0 and rec["holds"] == "true" and rec["case_id"] == "B_gt_m1_conv"
    assert [float(rec[f"slack.{k}"]) for k in ("lower", "upper", "discriminant", "c_cap")] == \
        pytest.approx([0.75, 0.75, 0.5625, 3], abs=1e-15)


def test_check_corollary():
    code, text = run(["check", "--theorem", "cor", "--gamma", "0", "--c", "1", "--kappa", "0.75"])
    rec = record(text)
    assert code == 0 and rec["holds"] == "true" and float(rec["slack.lower"]) == 0


def test_check_t21_fails_below_threshold():
    code, text = run(["check", "--theorem", "t21", "--A", "1", "--B", "0", "--c", "1", "--kappa", "0.4"])
    assert code == 0 and record(text)["holds"] == "false"


def test_check_mode_flag_in_either_position():
    base = ["check", "--theorem", "t21", "--A", "0.5", "--B", "-1", "--c", "1", "--kappa", "2"]
    assert record(run(base)[1])["holds"] == "false"
    assert record(run(base + ["--mode", "stated"])[1])["holds"] == "true"
    assert record(run(["--mode", "stated"] + base)[1])["mode"] == "stated"


@pytest.mark.parametrize("argv", [
    ["check", "--theorem", "t21", "--A", "0", "--B", "0.5", "--c", "1", "--kappa", "1"],
    ["check", "--theorem", "cor", "--c", "1", "--kappa", "1"],
    ["check", "--theorem", "cor", "--gamma", "1.5", "--c", "1", "--kappa", "1"],
    ["check", "--theorem", "t21", "--gamma", "0", "--A", "1", "--B", "0", "--c", "1", "--kappa", "1"],
    ["check", "--theorem", "t21", "--A", "1", "--B", "0", "--c", "1", "--kappa", "-2"],
    ["check", "--theorem", "t99", "--A", "1", "--B", "0", "--c", "1", "--kappa", "1"],
])
def test_check_usage_errors_exit_2(argv):
    assert run(argv)[0] == 2


def test_check_pair_message(capsys):
    run(["check", "--theorem", "t21", "--A", "0", "--B", "0.5", "--c", "1", "--kappa", "1"])
    assert "Janowski pair requires B < A" in capsys.readouterr().err


# --- verify ----------------------------------------------------------------------


def test_verify_member():
    code, text = run(["verify", "--functional", "u", "--kappa", "0.5", "--c", "1", "--A", "1", "--B", "0"])
    rec = record(text)
    assert code == 0 and rec["status"] == "Member"
    assert float(rec["worst_margin"]) == pytest.approx(0.4569193651847563, abs=1e-9)


def test_verify_nonmember():
    code, text = run(["verify", "--functional", "u", "--kappa", "0.5", "--c", "6", "--A", "0.1", "--B", "0"])
    rec = record(text)
    assert code == 0 and rec["status"] == "NonMember"
    assert complex(rec["witness"]) == pytest.approx(-1, abs=1e-6)


def test_verify_convex_side_condition():
    code, text = run(["verify", "--functional", "convex", "--kappa", "0.5", "--c", "40", "--A", "1", "--B", "-1"])
    assert code == 0 and record(text)["side_conditions_ok"] == "false"


def test_verify_pole_exit_3():
    assert run(["verify", "--functional", "u", "--kappa", "0", "--c", "1", "--A", "1", "--B", "0"])[0] == 3


def test_verify_evaluation_failure_exit_3():
    # c = 0 leaves the derivative functional undefined
    assert run(["verify", "--functional", "deriv", "--kappa", "1", "--c", "0", "--A", "1", "--B", "0"])[0] == 3


# --- admissible ------------------------------------------------------------------


def test_admissible_Q():
    code, text = run(["admissible", "--fn", "Q", "--A", "1", "--B", "0", "--c", "1", "--kappa", "1"])
    rec = record(text)
    assert code == 0 and float(rec["sup"]) == -0.375 and float(rec["argmax"]) == 0


def test_admissible_G_threshold():
    kappa = 1 + (math.sqrt(2) + 1) / 2
    code, text = run(["admissible", "--fn", "G", "--A", "0", "--c", "2", "--kappa", repr(kappa)])
    assert code == 0 and abs(float(record(text)["sup"])) <= 1e-9


def test_admissible_G_rounded_kappa_is_close():
    code, text = run(["admissible", "--fn", "G", "--A", "0", "--c", "2", "--kappa", "2.20711"])
    assert code == 0 and abs(float(record(text)["sup"])) <= 1e-5


def test_admissible_H():
    code, text = run(["admissible", "--fn", "H", "--A", "0.5", "--c", "1", "--kappa", "1.5"])
    assert code == 0 and float(record(text)["sup"]) == pytest.approx(-0.15972222222222221, abs=1e-12)


def test_admissible_table_rows():
    _, text = run(["admissible", "--fn", "H", "--A", "0.5", "--c", "1", "--kappa", "1.5",
                   "--rho-min", "-1", "--rho-max", "1", "--rho-steps", "5"])
    lines = text.splitlines()
    i = lines.index("rho,value")
    rows = [tuple(map(float, ln.split(","))) for ln in lines[i + 1:i + 6]]
    assert [r[0] for r in rows] == [-1, -0.5, 0, 0.5, 1]
    for rho, val in rows:
        assert val == pytest.approx(conditions.eval_H(rho, 0.5, 1, 1.5), abs=1e-15)


@pytest.mark.parametrize("argv", [
    ["admissible", "--fn", "G", "--A", "0", "--B", "0", "--c", "2", "--kappa", "3"],
    ["admissible", "--fn", "Q", "--A", "0", "--B", "-1", "--c", "2", "--kappa", "3"],
    ["admissible", "--fn", "G", "--A", "0", "--c", "2", "--kappa", "0.5"],
    ["admissible", "--fn", "H", "--A", "0.5", "--c", "1", "--kappa", "1.5", "--rho-steps", "0"],
])
def test_admissible_usage_errors_exit_2(argv):
    assert run(argv)[0] == 2


# --- config ----------------------------------------------------------------------

MINIMAL = """\
# minimal grid
kappa_re.min = 0.6
kappa_re.max = 0.6
kappa_im.min = 0
kappa_im.max = 0
c_mod.min = 1
c_mod.max = 1
pair.A = 1
pair.B = 0
"""


def test_config_minimal(tmp_path):
    cfg = tmp_path / "grid.cfg"
    cfg.write_text(MINIMAL)
    code, text = run(["scan", "--config", str(cfg), "--out", str(tmp_path / "o.csv"), "--verify"])
    rec = record(text)
    assert code == 0 and rec["cells"] == "1" and rec["ProvenAndVerified"] == "1"


def test_config_missing_pair_A(tmp_path, capsys):
    cfg = tmp_path / "grid.cfg"
    cfg.write_text(MINIMAL.replace("pair.A = 1\n", ""))
    assert run(["scan", "--config", str(cfg), "--out", str(tmp_path / "o.csv")])[0] == 2
    assert "pair.A" in capsys.readouterr().err


def test_config_bad_pair(tmp_path, capsys):
    cfg = tmp_path / "grid.cfg"
    cfg.write_text(MINIMAL.replace("pair.B = 0", "pair.B = 1"))
    assert run(["scan", "--config", str(cfg), "--out", str(tmp_path / "o.csv")])[0] == 2
    assert "Janowski pair requires B < A" in capsys.readouterr().err


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "grid.cfg"
    cfg.write_text(MINIMAL + "colour = blue\n")
    assert run(["scan", "--config", str(cfg), "--out", str(tmp_path / "o.csv")])[0] == 2
    assert "colour" in capsys.readouterr().err


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "grid.cfg"
    cfg.write_text(MINIMAL)
    out = tmp_path / "o.csv"
    run(["scan", "--config", str(cfg), "--out", str(out), "--kappa-re", "0.4", "0.4", "1", "--mode", "stated"])
    row = list(csv.DictReader(out.open()))[0]
    assert float(row["kappa_re"]) == 0.4 and row["condition_holds"] == "false" and row["mode"] == "stated"


# --- scan ------------------------------------------------------------------------


def test_scan_grid_guard(tmp_path, capsys):
    argv = ["scan", "--kappa-re", "0", "1", "10000", "--kappa-im", "0", "1", "10000",
            "--c-mod", "1", "1", "1", "--A", "1", "--B", "0", "--out", str(tmp_path / "o.csv")]
    assert run(argv)[0] == 2
    assert "limit" in capsys.readouterr().err
    assert not (tmp_path / "o.csv").exists()


def test_scan_requires_out():
    assert run(SCAN_3X1X1)[0] == 2


def test_scan_header_golden(tmp_path):
    out = tmp_path / "o.csv"
    run(SCAN_3X1X1 + ["--out", str(out)])
    expected = ("kappa_re,kappa_im,c_mod,A,B,theorem,mode,condition_holds,case_id,min_slack,"
                "verify_status,worst_margin,witness_re,witness_im")
    assert out.read_text().splitlines()[0] == expected
    assert GOLDEN.read_text().splitlines()[0] == expected


def test_scan_golden_file(tmp_path):
    out = tmp_path / "o.csv"
    code, text = run(SCAN_3X1X1 + ["--out", str(out)])
    assert code == 0 and record(text)["ProvenButRefuted"] == "0"
    got = list(csv.reader(out.open()))
    want = list(csv.reader(GOLDEN.open()))
    assert len(got) == len(want) == 4
    for g, w in zip(got[1:], want[1:]):
        assert g[:11] == w[:11]
        assert float(g[11]) == pytest.approx(float(w[11]), abs=1e-12)
        # a smooth minimum fixes its location only to about sqrt(eps)
        for a, b in zip(g[12:], w[12:]):
            assert float(a) == pytest.approx(float(b), abs=1e-6)


def test_scan_deterministic_and_parallel(tmp_path):
    outs = [tmp_path / f"o{i}.csv" for i in range(3)]
    run(SCAN_3X1X1 + ["--out", str(outs[0])])
    run(SCAN_3X1X1 + ["--out", str(outs[1])])
    run(SCAN_3X1X1 + ["--out", str(outs[2]), "--jobs", "2"])
    data = [p.read_bytes() for p in outs]
    assert data[0] == data[1] == data[2]


def test_scan_without_verify(tmp_path):
    out = tmp_path / "o.csv"
    code, text = run(SCAN_3X1X1[:-1] + ["--out", str(out)])
    assert code == 0 and "ProvenAndVerified" not in record(text)
    assert all(r["verify_status"] == "skipped" for r in csv.DictReader(out.open()))


def test_scan_row_major_order(tmp_path):
    out = tmp_path / "o.csv"
    run(["scan", "--kappa-re", "1", "2", "2", "--kappa-im", "0", "1", "2", "--c-mod", "0.5", "1", "2",
         "--A", "1", "--B", "0", "--out", str(out)])
    rows = [(float(r["kappa_re"]), float(r["kappa_im"]), float(r["c_mod"])) for r in csv.DictReader(out.open())]
    assert rows == sorted(rows) and len(rows) == 8


def test_scan_round_trip(tmp_path):
    out = tmp_path / "o.csv"
    run(["scan", "--kappa-re", "0.1", "3.3", "7", "--kappa-im", "-1", "1", "3", "--c-mod", "0.3", "4.1", "5",
         "--A", "0.3", "--B", "-1", "--theorem", "t21", "--out", str(out)])
    for r in csv.DictReader(out.open()):
        kappa = complex(float(r["kappa_re"]), float(r["kappa_im"]))
        pair = JanowskiPair(float(r["A"]), float(r["B"]))
        rep = conditions.check(r["theorem"], pair, kappa, float(r["c_mod"]), conditions.Mode(r["mode"]))
        assert r["condition_holds"] == ("true" if rep.holds else "false")
        assert float(r["min_slack"]) == rep.min_slack


def test_scan_anomaly_exit_4(tmp_path, monkeypatch):
    def refuted(*args, **kwargs):
        return MembershipVerdict(Status.NON_MEMBER, -1.0, -1 + 0j, 1, True, -1.0, "forced")

    monkeypatch.setattr(cli, "verify", refuted)
    code, text = run(SCAN_3X1X1 + ["--out", str(tmp_path / "o.csv")])
    rec = record(text)
    assert code == 4 and rec["anomalies"] == "2" and rec["ProvenButRefuted"] == "2"


def test_classify_table():
    C = cli.Classification
    assert cli.classify(True, Status.MEMBER) is C.PROVEN_AND_VERIFIED
    assert cli.classify(True, Status.NON_MEMBER) is C.PROVEN_BUT_REFUTED
    assert cli.classify(False, Status.MEMBER) is C.UNPROVEN_BUT_VERIFIED
    assert cli.classify(False, Status.NON_MEMBER) is C.UNPROVEN_AND_REFUTED
    assert cli.classify(True, Status.INCONCLUSIVE) is C.INCONCLUSIVE


def test_fmt_round_trips():
    for x in (0.1, 1 / 3, math.pi * 1e-20, -2.5e300):
        assert float(cli.fmt(x)) == x
    assert complex(cli.fmt(1 / 3 - 2j / 7)) == 1 / 3 - 2j / 7
