import pytest

from convergecast.cli import main
from convergecast.graph_core import read_instance
from convergecast.routing import read_trace, validate_trace


@pytest.fixture
def line_file(tmp_path):
    path = tmp_path / "line.txt"
    assert main(["gen", "--family", "line", "--n", "5", "--k", "2", "--out", str(path)]) == 0
    return path


def test_gen_line(line_file):
    inst = read_instance(line_file)
    assert inst.n == 5 and inst.k == 2 and inst.is_uccp


def test_route_and_verify(line_file, tmp_path, capsys):
    trace_path = tmp_path / "line.trace"
    assert main(["route", str(line_file), "--algo", "spt", "--policy", "min-id",
                 "--out", str(trace_path)]) == 0
    inst = read_instance(line_file)
    assert validate_trace(inst, read_trace(trace_path, inst)).total_hops == 9
    capsys.readouterr()
    assert main(["verify", str(line_file), str(trace_path)]) == 0
    out = capsys.readouterr().out
    assert "total_hops=9" in out and "shortest_path_property=True" in out


def test_verify_corrupted(line_file, tmp_path, capsys):
    trace_path = tmp_path / "bad.trace"
    main(["route", str(line_file), "--out", str(trace_path)])
    lines = trace_path.read_text().splitlines()
    lines[1] += ",4:1"  # second hop: two readings plus one more
    trace_path.write_text("\n".join(lines) + "\n")
    capsys.readouterr()
    assert main(["verify", str(line_file), str(trace_path)]) != 0
    out = capsys.readouterr().out
    assert "CapacityExceeded at seq 1" in out


def test_bounds(line_file, capsys):
    capsys.readouterr()
    assert main(["bounds", str(line_file), "--header"]) == 0
    header, row = capsys.readouterr().out.splitlines()
    vals = dict(zip(header.split(","), row.split(",")))
    assert (vals["lb1"], vals["lb2"], vals["lb3"]) == ("5", "8", "9")
    assert main(["bounds", str(line_file), "--raw"]) == 0
    assert "15/2" in capsys.readouterr().out


def test_oracle(line_file, capsys, monkeypatch):
    capsys.readouterr()
    assert main(["oracle", str(line_file)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "optimum 9"
    assert out[1] == "p 1 1 0"
    monkeypatch.setenv("CONVERGECAST_MAX_ORACLE_VERTICES", "4")
    assert main(["oracle", str(line_file)]) == 2
    assert "refused" in capsys.readouterr().err


def test_gadget_route_with_annotations(tmp_path, capsys):
    inst = tmp_path / "g.txt"
    main(["gen", "--family", "gadget", "--ell", "2", "--out", str(inst)])
    trace = tmp_path / "g.trace"
    assert main(["route", str(inst), "--algo", "gadget-opt", "--annotations", f"{inst}.ann",
                 "--out", str(trace)]) == 0
    assert "total=17" in capsys.readouterr().err
    assert main(["route", str(inst), "--policy", "prefer-spc", "--annotations", f"{inst}.ann",
                 "--out", str(trace)]) == 0
    assert "total=16" in capsys.readouterr().err


def test_errors_exit_nonzero(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("uccp k=2 n=3\ne 0 1\n")
    assert main(["bounds", str(bad)]) == 1
    assert "DisconnectedGraph" in capsys.readouterr().err
    assert main(["gen", "--family", "gadget", "--ell", "1"]) == 1
    with pytest.raises(SystemExit):
        main(["route"])


def test_experiment_cli(tmp_path):
    out = tmp_path / "r.csv"
    plot = tmp_path / "r.gp"
    assert main(["experiment", "--values", "6,8", "--trials", "2", "--oracle",
                 "--out", str(out), "--gnuplot", str(plot)]) == 0
    lines = out.read_text().splitlines()
    assert "oracle" in lines[0].split(",")
    assert len(lines) == 1 + 2 * 3
    assert "plot" in plot.read_text()
