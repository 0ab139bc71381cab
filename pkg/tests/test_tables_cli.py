import json
from fractions import Fraction

import pytest

from simplexdet import cli, tables
from simplexdet.cache import CorruptRecord, VerdictCache
from simplexdet.classifier import Verdict, classify
from simplexdet.errors import InvariantViolation
from simplexdet.uepoly import evaluate, pue_of


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("SIMPLEXDET_CACHE_DIR", str(tmp_path / "c"))
    return tmp_path / "c"


# --- verdict cache ------------------------------------------------------------

def test_cache_round_trip(cache_dir):
    c = VerdictCache()
    assert c.directory == cache_dir
    v = c.classify(9, 320)
    again = VerdictCache()
    assert again.get(9, 320) == v and len(again) == 1
    assert again.classify(9, 320) is again.get(9, 320)
    assert again.get(9, 320, dual=True) is None


def test_cache_is_append_only(cache_dir):
    c = VerdictCache()
    c.classify(9, 300)
    c.classify(9, 300)
    c.put(classify(9, 300))
    assert len((cache_dir / "verdicts.jsonl").read_text().splitlines()) == 1


def test_cache_detects_corruption(cache_dir):
    c = VerdictCache()
    c.classify(9, 384)
    path = cache_dir / "verdicts.jsonl"
    path.write_text(path.read_text().replace('"proper": true', '"proper": false'))
    with pytest.raises(CorruptRecord):
        VerdictCache()
    path.write_text("{not json\n")
    with pytest.raises(CorruptRecord):
        VerdictCache()


def test_cache_reverify_catches_a_wrong_entry(cache_dir):
    c = VerdictCache()
    for n in range(300, 320):
        c.classify(9, n)
    assert c.reverify(0.5) == 10
    assert c.check_all() == 20
    bad = VerdictCache(cache_dir / "other")
    bad.put(Verdict(9, 384, False, False, False, False, False, None, "oracle"))
    with pytest.raises(InvariantViolation):
        bad.reverify(1.0)


# --- tables ------------------------------------------------------------------------

def test_table1_midpoint_distribution():
    art = tables.run_table(1)
    assert art.matches and art.extra["n"] == 320
    assert art.rows == [[0, 1], [128, 2], [160, 504], [192, 4], [256, 1]]


def test_table_csv_is_byte_stable():
    a = tables.run_table(3, k_min=9, k_max=11).to_csv()
    b = tables.run_table(3, k_min=9, k_max=11).to_csv()
    assert a == b and "\r" not in a
    assert a.splitlines()[1] == "9,1,315..324"


def test_table_json_carries_id():
    body = json.loads(tables.run_table(2, max_m=20).to_json())
    assert body["table_id"] == 2 and body["diffs"] == [] and body["truncated"] is None


def test_table_diff_reports_mismatch():
    art = tables.run_table(4)
    assert len(art.diffs) == 1 and "66561" in art.diffs[0]


def test_table_unknown_id():
    from simplexdet.errors import ParameterError
    with pytest.raises(ParameterError):
        tables.run_table(9)


def test_truncation_marker(monkeypatch):
    from simplexdet.errors import BudgetExceeded

    def boom(k, method="sparse"):
        if k == 10:
            raise BudgetExceeded("out of nodes", limit=1)
        return [(1, 2)]
    monkeypatch.setattr(tables, "proper_ranges", boom)
    art = tables.run_table(5, k_min=9, k_max=11)
    assert art.truncated and "k=10" in art.truncated and len(art.rows) == 1
    assert art.to_csv().endswith("# truncated: stopped at k=10: out of nodes\n")
    assert not art.matches


def test_json_big_ints_are_strings():
    art = tables.TableArtifact(9, ["x"], [[2**60], [5]])
    assert json.loads(art.to_json())["rows"] == [[str(2**60)], [5]]
    assert cli._json_safe({"a": 2**53, "b": 2**53 - 1, "c": Fraction(1, 3)}) == {"a": str(2**53), "b": 2**53 - 1, "c": "1/3"}


# --- figure data -----------------------------------------------------------------

def test_fig1_columns_and_endpoint():
    fig = tables.emit_fig1(samples=40)
    lines = fig.csv.splitlines()
    assert lines[0] == "p,log2_total,log2_2p128,log2_504p160,log2_4p192,log2_1p256,log2_level"
    last = lines[-1].split(",")
    assert float(last[0]) == 0.5
    # total at 1/2 is 511 / 2^320
    assert abs(float(last[1]) - (-320 + 8.997179)) < 1e-5
    assert last[-1] == "-311"


def test_fig1_crossing_and_switch():
    fig = tables.emit_fig1()
    lo, hi = fig.crossing
    assert Fraction(3, 10) < lo < hi < Fraction(1, 2) and hi - lo <= Fraction(1, 10**4)
    poly = pue_of(9, 320)
    level = Fraction(2**9, 2**320)
    assert evaluate(poly, lo) < level < evaluate(poly, hi)
    slo, shi = fig.switch
    assert Fraction(2, 5) < slo < shi < Fraction(1, 2)


# --- command line -------------------------------------------------------------------

def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_weights_and_pue(capsys):
    code, out, _ = run(capsys, "weights", "--k", "9", "--n", "320")
    assert code == 0 and json.loads(out)
    code, out, _ = run(capsys, "pue", "--k", "4", "--n", "11", "--p", "1/3", "--dual", "--check")
    assert code == 0 and json.loads(out)["dual"] is True


def test_cli_construct(capsys, tmp_path):
    code, out, _ = run(capsys, "construct", "--k", "3", "--n", "5", "--format", "json")
    assert code == 0
    code, _, _ = run(capsys, "construct", "--k", "3", "--n", "5", "--format", "pbm", "--out", str(tmp_path / "g.pbm"))
    assert code == 0 and (tmp_path / "g.pbm").read_text().startswith("P1")


def test_cli_classify(capsys, cache_dir):
    code, out, _ = run(capsys, "classify", "--k", "9", "--n", "320")
    v = json.loads(out)
    assert code == 0 and v["decided_by"] == "min-weight-criterion" and v["satisfactory"] is False
    assert (cache_dir / "verdicts.jsonl").exists()
    code, out, _ = run(capsys, "classify", "--k", "9", "--n", "384", "--no-cache", "--dual")
    assert code == 0 and json.loads(out)["dual"] is True


def test_cli_parameter_error(capsys):
    code, _, err = run(capsys, "classify", "--k", "9", "--n", "100", "--no-cache")
    assert code == 2 and "error" in err
    code, _, _ = run(capsys, "scan", "--k", "9", "--from", "400", "--to", "300")
    assert code == 2


def test_cli_budget_exit(capsys, monkeypatch):
    from simplexdet.errors import BudgetExceeded

    def slow(*a, **kw):
        raise BudgetExceeded("simulated", limit=1)
    monkeypatch.setattr(cli, "classify", slow)
    code, _, err = run(capsys, "classify", "--k", "9", "--n", "300", "--no-cache", "--budget", "5")
    assert code == 3 and "budget" in err


def test_cli_undecided_verdict_exit(capsys, monkeypatch):
    undecided = Verdict(9, 300, False, None, None, None, False, None, "root-isolation")
    monkeypatch.setattr(cli, "classify", lambda *a, **kw: undecided)
    code, out, _ = run(capsys, "classify", "--k", "9", "--n", "300", "--no-cache")
    assert code == 3 and json.loads(out)["proper"] is None


def test_cli_scan_order_independent_of_jobs(capsys):
    _, one, _ = run(capsys, "scan", "--k", "9", "--from", "300", "--to", "340", "--mode", "proper")
    code, four, _ = run(capsys, "scan", "--k", "9", "--from", "300", "--to", "340", "--mode", "proper", "--jobs", "4")
    assert code == 0 and one == four
    ns = [int(line.split(",")[1]) for line in one.splitlines()[1:]]
    assert ns == list(range(300, 341))


def test_cli_scan_full_uses_cache(capsys, cache_dir):
    code, out, _ = run(capsys, "scan", "--k", "9", "--from", "314", "--to", "316")
    assert code == 0
    assert out.splitlines()[0] == "k,n,dual,proper,good,satisfactory,decided_by"
    assert len(VerdictCache()) == 3


def test_cli_tables_and_ids(capsys, tmp_path):
    code, out, _ = run(capsys, "kofm", "--max-m", "3")
    assert code == 0 and out.splitlines()[1].startswith("2,1,9,")
    code, out, _ = run(capsys, "perscan", "--k", "9")
    assert out.splitlines()[1] == "3,9,1,315..324"
    code, out, _ = run(capsys, "theta", "--k", "10")
    body = json.loads(out)
    assert body["table_id"] == 6 and body["theta1"] == 4
    code, out, _ = run(capsys, "phi", "--k", "9")
    body = json.loads(out)
    assert body["table_id"] == 8 and body["phi"] == 3816
    code, _, err = run(capsys, "table", "--id", "4", "--out", str(tmp_path))
    assert code == 0 and "66561" in err
    assert (tmp_path / "table4.csv").exists() and json.loads((tmp_path / "table4.json").read_text())["table_id"] == 4
    code, _, _ = run(capsys, "table", "--id", "2", "--cap", "max_m")
    assert code == 2


def test_cli_fig1(capsys, tmp_path):
    code, _, err = run(capsys, "fig1", "--samples", "50", "--out", str(tmp_path / "f.csv"))
    assert code == 0 and "crossing" in err
    assert (tmp_path / "f.csv").read_text().count("\n") == 51
