import json
import subprocess
import sys

import pytest

from msd_strata import SignatureMu, enumerate_enhanced_level_graphs
from msd_strata.cli import (
    dumps_stable,
    graph_from_dict,
    graph_to_dict,
    main,
    to_dot,
)
from msd_strata.level_graph import GraphStructureError


def write_graph(tmp_path, graph, name="graph.json"):
    path = tmp_path / name
    path.write_text(dumps_stable(graph_to_dict(graph)))
    return str(path)


def write_json(tmp_path, data, name):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_round_trip_fixtures(gamma1, gamma2, cherry23, horizontal_pair, four_edge_tower):
    for g in (gamma1, gamma2, cherry23, horizontal_pair, four_edge_tower):
        assert graph_from_dict(json.loads(dumps_stable(graph_to_dict(g)))) == g


def test_round_trip_enumeration(cherry23):
    for g in enumerate_enhanced_level_graphs(cherry23.mu, 2):
        assert graph_from_dict(graph_to_dict(g)) == g


def test_level_normalization_on_load(gamma1):
    data = graph_to_dict(gamma1)
    for v in data["vertices"]:
        v["level"] *= 5
    assert graph_from_dict(data) == gamma1


def test_malformed_inputs():
    with pytest.raises(GraphStructureError):
        graph_from_dict({"mu": [1], "vertices": [], "edges": []})  # odd sum
    with pytest.raises(GraphStructureError):
        graph_from_dict(
            {
                "mu": [1, 1],
                "vertices": [
                    {"genus": 2, "level": 0, "legs": [1, 1]},
                ],
                "edges": [],
            }
        )  # duplicate leg
    with pytest.raises(GraphStructureError):
        graph_from_dict(
            {
                "mu": [1, 1],
                "vertices": [{"genus": 2, "level": 0, "legs": [1]}],
                "edges": [],
            }
        )  # unassigned leg


def test_analyze_json_deterministic(tmp_path, gamma2, capsys):
    path = write_graph(tmp_path, gamma2)
    assert main(["analyze", path, "--json"]) == 0
    first = capsys.readouterr().out
    assert main(["analyze", path, "--json"]) == 0
    second = capsys.readouterr().out
    assert first == second
    report = json.loads(first)
    assert report["k_group"]["name"] == "Z/3"
    assert report["pm_class_count"] == 1
    assert report["prong_rotation_group"]["order"] == 3
    assert report["covering"]["sequence_check"] is True


def test_analyze_smooth(tmp_path, smooth_graph, capsys):
    path = write_graph(tmp_path, smooth_graph)
    assert main(["analyze", path, "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["codim"] == 0
    assert report["prong_rotation_group"]["order"] == 1
    assert report["k_group"]["order"] == 1
    assert report["twist_basis"] == []


def test_analyze_cherry(tmp_path, cherry23, capsys):
    path = write_graph(tmp_path, cherry23)
    assert main(["analyze", path, "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["normality"]["status"] == "non_normal"
    assert report["normality"]["witness"] == [1]
    assert report["disorderly_ideal"]["principal"] is False


def test_analyze_invalid_graph_exits_1(tmp_path, gamma1, capsys):
    data = graph_to_dict(gamma1)
    data["edges"][2]["kappa"] = 2
    path = write_json(tmp_path, data, "bad.json")
    assert main(["analyze", path]) == 1
    out = capsys.readouterr().out
    assert "degree_identity" in out


def test_analyze_missing_file(capsys):
    assert main(["analyze", "/nonexistent/file.json"]) == 1


def test_enumerate_command(tmp_path, capsys):
    out_dir = tmp_path / "graphs"
    rc = main(
        [
            "enumerate",
            "--genus",
            "0",
            "--mu",
            "2,1,0,0,-5",
            "--max-codim",
            "2",
            "--out",
            str(out_dir),
        ]
    )
    assert rc == 0
    index = json.loads((out_dir / "index.json").read_text())
    assert index["mu"] == [2, 1, 0, 0, -5]
    assert len(index["graphs"]) > 0
    assert all((out_dir / entry["file"]).exists() for entry in index["graphs"])
    assert all(entry["codim"] <= 2 for entry in index["graphs"])
    # every written graph loads back and is valid
    from msd_strata import validate
    from msd_strata.cli import load_graph

    for entry in index["graphs"]:
        assert validate(load_graph(str(out_dir / entry["file"]))).valid


def test_enumerate_rejects_bad_mu(tmp_path, capsys):
    rc = main(
        [
            "enumerate",
            "--genus",
            "0",
            "--mu",
            "2,2",
            "--max-codim",
            "1",
            "--out",
            str(tmp_path / "x"),
        ]
    )
    assert rc == 1


def test_enumerate_rejects_large(tmp_path):
    rc = main(
        [
            "enumerate",
            "--genus",
            "10",
            "--mu",
            ",".join(["2"] * 9),
            "--max-codim",
            "1",
            "--out",
            str(tmp_path / "x"),
        ]
    )
    assert rc == 1


def test_grc_command(tmp_path, gamma1, capsys):
    path = write_graph(tmp_path, gamma1)
    res_pass = write_json(
        tmp_path,
        {
            "vertical": {"0": [0, 1, 0, 1], "1": [5, 1, 1, 2], "2": [-5, 1, -1, 2]},
            "horizontal": {},
        },
        "pass.json",
    )
    assert main(["grc", path, "--residues", res_pass]) == 0

    res_fail = write_json(
        tmp_path,
        {
            "vertical": {"0": [1, 1, 0, 1], "1": [5, 1, 0, 1], "2": [-5, 1, 0, 1]},
            "horizontal": {},
        },
        "fail.json",
    )
    assert main(["grc", path, "--residues", res_fail]) == 2
    out = capsys.readouterr().out
    assert "level -1" in out

    res_missing = write_json(tmp_path, {"vertical": {"0": [0, 1, 0, 1]}}, "missing.json")
    assert main(["grc", path, "--residues", res_missing]) == 1


def test_grc_condition_free(tmp_path, all_pole_graph):
    path = write_graph(tmp_path, all_pole_graph)
    res = write_json(
        tmp_path,
        {"vertical": {"0": [2, 1, 7, 3]}, "horizontal": {}},
        "res.json",
    )
    assert main(["grc", path, "--residues", res]) == 0


def test_grc_nonphysical_input_fails_without_alarm(tmp_path, gamma1):
    # residue theorem at the bottom vertex is violated: mathematically wrong
    # input (exit 2), not an internal inconsistency (exit 3)
    path = write_graph(tmp_path, gamma1)
    res = write_json(
        tmp_path,
        {
            "vertical": {"0": [0, 1, 0, 1], "1": [5, 1, 0, 1], "2": [0, 1, 0, 1]},
            "horizontal": {},
        },
        "odd.json",
    )
    assert main(["grc", path, "--residues", res]) == 2


def test_undegenerate_command(tmp_path, gamma1, capsys):
    path = write_graph(tmp_path, gamma1)
    assert main(["undegenerate", path, "--keep-levels", "-1"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert len(data["vertices"]) == 2
    kappas = sorted(e["kappa"] for e in data["edges"])
    assert kappas == [1, 3]


def test_undegenerate_smooth_horizontal(tmp_path, horizontal_pair, capsys):
    path = write_graph(tmp_path, horizontal_pair)
    assert main(["undegenerate", path, "--smooth-horizontal", "0,1"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert len(data["vertices"]) == 1
    assert data["vertices"][0]["genus"] == 3


def test_dot_output(tmp_path, gamma1, capsys):
    path = write_graph(tmp_path, gamma1)
    assert main(["dot", path]) == 0
    out = capsys.readouterr().out
    assert "rank=same" in out
    assert 'label="g=3 | legs 3"' in out
    assert out.count("--") == 3
    assert "κ=3" in out and "κ=1" in out


def test_dot_horizontal_label(tmp_path, horizontal_pair, capsys):
    path = write_graph(tmp_path, horizontal_pair)
    assert main(["dot", path]) == 0
    assert 'label="hor"' in capsys.readouterr().out


def test_console_script_runs(tmp_path, gamma1):
    path = write_graph(tmp_path, gamma1)
    proc = subprocess.run(
        [sys.executable, "-m", "msd_strata.cli", "analyze", path, "--json"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["pm_class_count"] == 1
