import subprocess
import sys

from chromaflux import cli
from chromaflux.instance import format_instance, parse_instance


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err

def test_assign_balanced_triangle(fixtures_dir, capsys, tmp_path):
    dest = tmp_path / "a.txt"
    code, _, err = run(["assign", "--algo", "balanced", "-k", 3, fixtures_dir / "triangle-k3.txt", "-o", dest], capsys)
    assert code == 0 and "objective=6" in err and "gap=0" in err
    code, out, _ = run(["verify", dest, fixtures_dir / "triangle-k3.txt"], capsys)
    assert code == 0 and out.strip() == "ok conflicts 6"

def test_check_balanced_audit(fixtures_dir, capsys):
    code, _, err = run(["assign", "--check-balanced", fixtures_dir / "k4-k2.txt"], capsys)
    assert code == 0 and sum(line.startswith("node ") for line in err.splitlines()) == 4
    code, _, err = run(["assign", "--algo", "greedy", "--check-balanced", fixtures_dir / "k4-k2.txt"], capsys)
    assert code == 2 and "balanced" in err

def test_migrate_even_k4(fixtures_dir, capsys):
    code, out, err = run(["migrate", "--algo", "even", "--explain", fixtures_dir / "k4-c2.txt"], capsys)
    assert code == 0 and "objective=2" in err and "matching 2" in err
    assert len([line for line in out.splitlines() if line.strip()]) == 2

def test_corrupted_schedule_fails_verification(fixtures_dir, capsys, tmp_path):
    sched = tmp_path / "s.txt"
    run(["migrate", "--algo", "even", fixtures_dir / "k4-c2.txt", "-o", sched], capsys)
    lines = sched.read_text().splitlines()
    lines[0] = lines[0] + " " + lines[1].split()[-1]
    sched.write_text("\n".join(lines) + "\n")
    code, out, _ = run(["verify", sched, fixtures_dir / "k4-c2.txt"], capsys)
    assert code == 2 and out.startswith("violation:")

def test_trace_file(fixtures_dir, capsys, tmp_path):
    trace = tmp_path / "t.log"
    code, _, _ = run(["migrate", "--strict", "--trace", trace, fixtures_dir / "bundle4-c1.txt"], capsys)
    assert code == 0
    lines = trace.read_text().splitlines()
    assert lines[0].startswith("init") and lines[-1].startswith("done") and lines[-1].endswith("rounds=4")

def test_bad_input_exits_2(fixtures_dir, capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("problem channel\nnode a 0\n")
    assert run(["assign", bad], capsys)[0] == 2
    assert run(["assign", tmp_path / "missing.txt"], capsys)[0] == 2
    assert run(["assign", fixtures_dir / "k4-c2.txt"], capsys)[0] == 2
    assert run(["migrate", "--algo", "even", fixtures_dir / "triangle-c1.txt"], capsys)[0] == 2

def test_internal_error_exits_3(fixtures_dir, capsys, monkeypatch):
    from chromaflux.balanced import ContractError

    def broken(*args, **kwargs):
        raise ContractError("invariant failed")

    monkeypatch.setattr(cli, "run_estimator", broken)
    code, _, err = run(["assign", fixtures_dir / "triangle-k3.txt"], capsys)
    assert code == 3 and "internal error" in err

def test_strict_flag_and_environment(monkeypatch):
    args = cli.build_parser().parse_args(["migrate", "x.txt"])
    assert not cli._strict(args)
    assert cli._strict(cli.build_parser().parse_args(["migrate", "--strict", "x.txt"]))
    assert cli._strict(cli.build_parser().parse_args(["--strict", "migrate", "x.txt"]))
    monkeypatch.setenv("CHROMAFLUX_STRICT", "1")
    assert cli._strict(args)

def test_bounds_and_oracle(fixtures_dir, capsys, tmp_path):
    code, out, _ = run(["bounds", fixtures_dir / "path-k2.txt"], capsys)
    assert code == 0 and "conflicts 4" in out and "sum_d2_over_k=3 balanced_local=4" in out
    code, out, _ = run(["bounds", fixtures_dir / "triangle-c1.txt"], capsys)
    assert out.splitlines()[0] == "lb1 2" and out.splitlines()[1].startswith("lb2 3")
    sol = tmp_path / "opt.txt"
    code, out, _ = run(["oracle", "rounds", fixtures_dir / "triangle-c1.txt", "-o", sol], capsys)
    assert code == 0 and out.strip() == "optimum 3"
    assert run(["verify", sol, fixtures_dir / "triangle-c1.txt"], capsys)[0] == 0
    assert run(["oracle", "conflicts", fixtures_dir / "k4-k2.txt", "--max-edges", 2], capsys)[0] == 2

def test_bench_empty_and_fixture_corpus(fixtures_dir, capsys, tmp_path):
    code, out, _ = run(["bench", tmp_path], capsys)
    assert code == 0 and out == ",".join(cli.BENCH_COLUMNS) + "\n"
    code, out, _ = run(["bench", "--oracle", "--jobs", 2, fixtures_dir], capsys)
    rows = [line.split(",") for line in out.splitlines()[1:]]
    assert code == 0 and len(rows) > 9
    assert all(int(r[5]) >= 0 for r in rows)
    assert all(r[7] for r in rows)

def test_fixture_round_trip(fixtures_dir):
    for path in sorted(fixtures_dir.glob("*.txt")):
        inst = parse_instance(path.read_text())
        assert parse_instance(format_instance(inst)) == inst

def test_console_script(fixtures_dir):
    res = subprocess.run([sys.executable, "-m", "chromaflux.cli", "assign", "--algo", "greedy",
                          str(fixtures_dir / "star4-k2.txt")], capture_output=True, text=True)
    assert res.returncode == 0 and "objective=12" in res.stderr
