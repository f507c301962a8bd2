import json
import math

import pytest

from superflip.cli import main
from superflip.grassmann import GrassmannNumber as G
from superflip import torus as T

N = 2


def write_state(path, state):
    path.write_text(json.dumps(state.to_obj()))
    return str(path)


def unit_state(sigma=None, theta=None, spin=(1, 1, 1)):
    sc = lambda v: G.scalar(N, v)
    return T.DecoratedTorusState(
        sc(1), sc(1), sc(1),
        sigma if sigma is not None else G.zero(N),
        theta if theta is not None else G.zero(N),
        spin=spin,
    )


def test_flip_writes_transformed_state(tmp_path, capsys):
    src = write_state(tmp_path / "s.json", unit_state())
    out = tmp_path / "out.json"
    assert main(["flip", "--state", src, "--edge", "c", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "h before" in text and "h after" in text
    back = T.DecoratedTorusState.from_obj(json.loads(out.read_text()))
    assert sorted(round(x.body, 12) for x in back.lambdas()) == [1.0, 1.0, 2.0]


def test_flip_double_round_trip(tmp_path):
    b1, b2 = G.generator(N, 1), G.generator(N, 2)
    st = unit_state(sigma=b1 * 0.1, theta=b2 * 0.1)
    src = write_state(tmp_path / "s.json", st)
    mid = tmp_path / "mid.json"
    out = tmp_path / "out.json"
    assert main(["flip", "--state", src, "--edge", "c", "--out", str(mid)]) == 0
    assert main(["flip", "--state", str(mid), "--edge", "c", "--out", str(out)]) == 0
    back = T.DecoratedTorusState.from_obj(json.loads(out.read_text()))
    assert back.isclose(st, 1e-12)


def test_malformed_state_reports_line(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"N": 2,\n  "a": ]')
    code = main(["flip", "--state", str(bad)])
    assert code == 2
    err = capsys.readouterr().err
    payload = json.loads(err)
    assert payload["error"] == "parse" and payload["line"] == 2


def test_twist_markoff(tmp_path):
    st = T.DecoratedTorusState(
        G.scalar(N, 1), G.scalar(N, 1), G.scalar(N, 2), G.zero(N), G.zero(N)
    )
    src = write_state(tmp_path / "s.json", st)
    out = tmp_path / "t.json"
    assert main(["twist", "--state", src, "--edge", "a", "--out", str(out)]) == 0
    got = T.DecoratedTorusState.from_obj(json.loads(out.read_text()))
    assert sorted(round(x.body) for x in got.lambdas()) == [1, 2, 5]


def test_markoff_depth_zero_and_four(tmp_path, capsys):
    src = write_state(tmp_path / "s.json", unit_state())
    out = tmp_path / "m.csv"
    assert main(["markoff", "--state", src, "--depth", "0", "--out", str(out)]) == 0
    rows = out.read_text().strip().splitlines()
    assert len(rows) == 2 and rows[1].startswith("1.0,1.0,1.0")
    assert main(["markoff", "--state", src, "--depth", "4", "--out", str(out)]) == 0
    body = out.read_text()
    assert "1.0,2.0,5.0" in body and "2.0,5.0,29.0" in body and "1.0,5.0,13.0" in body


def test_markoff_refuses_super_state(tmp_path):
    b1, b2 = G.generator(N, 1), G.generator(N, 2)
    src = write_state(tmp_path / "s.json", unit_state(sigma=b1 * 0.1, theta=b2 * 0.1))
    assert main(["markoff", "--state", src]) == 1
    assert main(["markoff", "--state", src, "--body-only"]) == 0


def test_identity_exit_code_and_report(tmp_path):
    src = write_state(tmp_path / "s.json", unit_state())
    out = tmp_path / "report.json"
    csv_path = tmp_path / "curves.csv"
    code = main(
        ["identity", "--state", src, "--cutoff-length", "24", "--tol", "1e-6",
         "--out", str(out), "--csv", str(csv_path)]
    )
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["deviation_body"] <= 1e-6
    header = csv_path.read_text().splitlines()[0]
    assert "summand_body" in header and "address" in header


def test_spectrum_row_count_matches_growth(tmp_path):
    src = write_state(tmp_path / "s.json", unit_state())
    out = tmp_path / "spec.csv"
    assert main(["spectrum", "--state", src, "--Lmax", "4", "--out", str(out)]) == 0
    rows = out.read_text().strip().splitlines()[1:]
    import math

    from superflip import identity as I
    from superflip import markoff as M

    cutoff = math.exp(4.0) * 2 * 3.0
    regs = M.enumerate_regions(unit_state(), cutoff)
    table = I.growth_count(regs, [4.0], cutoff, 3.0)
    assert len(rows) == table[0]["N_super"]


def test_generators_report(tmp_path):
    b1, b2 = G.generator(N, 1), G.generator(N, 2)
    src = write_state(tmp_path / "s.json", unit_state(sigma=b1 * 0.1, theta=b2 * 0.1))
    out = tmp_path / "gen.json"
    assert main(["generators", "--state", src, "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["residuals"]["g_a_mapping"] <= 1e-9
    assert rep["residuals"]["g_a_osp"] <= 1e-10
    assert rep["residuals"]["g_b_berezinian"] <= 1e-10


def test_selftest(capsys):
    assert main(["selftest", "--seed", "7"]) == 0
    assert "all selftests passed" in capsys.readouterr().out


def test_orbit_deterministic(tmp_path, capsys):
    src = write_state(tmp_path / "s.json", unit_state())
    out1, out2 = tmp_path / "o1.json", tmp_path / "o2.json"
    assert main(["orbit", "--state", src, "--length", "10", "--seed", "3", "--out", str(out1)]) == 0
    assert main(["orbit", "--state", src, "--length", "10", "--seed", "3", "--out", str(out2)]) == 0
    assert out1.read_text() == out2.read_text()
