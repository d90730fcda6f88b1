"""Command-line surface: exit codes, artifacts, reports, determinism."""

import json
from importlib import resources

import pytest

from matchprice.cli import main
from matchprice.csp_fglss import CspInstance
from matchprice.graphs import load_graph_json, max_induced_matching_bruteforce


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def read(path):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def test_csp_gen_writes_instance_and_report(tmp_path, capsys):
    out = tmp_path / "csp.json"
    code, stdout = run(
        capsys,
        "csp", "gen", "--num-vars", "4", "--num-clauses", "3", "--arity", "2",
        "--seed", "5", "--balanced", "--out", str(out),
    )
    assert code == 0
    instance = CspInstance.from_json(read(out))
    assert instance.num_vars == 4 and len(instance.clauses) == 3
    report = json.loads(stdout)
    assert report["command"] == "csp gen"
    assert report["seed"] == 5
    assert "caps" in report and "versions" in report


def test_artifact_streams_to_stdout_without_report(capsys):
    code, stdout = run(
        capsys,
        "csp", "gen", "--num-vars", "3", "--num-clauses", "2", "--arity", "2",
        "--seed", "1", "--out", "-",
    )
    assert code == 0
    artifact = json.loads(stdout)  # a single document: the artifact itself
    assert "command" not in artifact
    CspInstance.from_json(artifact)


def test_csp_chain_through_replacement(tmp_path, capsys):
    csp = tmp_path / "csp.json"
    fglss = tmp_path / "fglss.json"
    replaced = tmp_path / "replaced.json"
    for argv in (
        ["csp", "gen", "--num-vars", "4", "--num-clauses", "3", "--arity", "2",
         "--seed", "5", "--balanced", "--out", str(csp)],
        ["csp", "fglss", "--input", str(csp), "--out", str(fglss)],
        ["csp", "replace", "--input", str(csp), "--graph", str(fglss),
         "--gamma", "1/2", "--d", "3", "--seed", "1", "--out", str(replaced)],
    ):
        assert main(argv) == 0
    capsys.readouterr()
    before = read(fglss)
    after = read(replaced)
    assert after["labels"] == before["labels"]
    assert len(after["graph"]["edges"]) <= len(before["graph"]["edges"])


def test_disperser_commands(tmp_path, capsys):
    disp = tmp_path / "disp.json"
    code, _ = run(
        capsys,
        "disperser", "gen", "--n", "6", "--d", "6", "--gamma", "1/3",
        "--seed", "0", "--out", str(disp),
    )
    assert code == 0
    assert run(capsys, "disperser", "verify", "--input", str(disp), "--gamma", "1/3")[0] == 0
    code, stdout = run(
        capsys, "disperser", "check-lemma", "--input", str(disp), "--gamma", "1/3"
    )
    assert code == 0
    assert json.loads(stdout)["ok"] is True


def test_disperser_verify_failure_is_exit_one(tmp_path, capsys):
    bad = tmp_path / "pm.json"
    bad.write_text(json.dumps({"left": 6, "right": 6, "edges": [[v, v] for v in range(6)]}))
    code, stdout = run(capsys, "disperser", "verify", "--input", str(bad), "--gamma", "1/3")
    assert code == 1
    report = json.loads(stdout)
    assert report["verified"] is False
    assert report["violation"] == [[0, 1], [2, 3]]


def test_graph_gen_shapes_and_conflicting_flags(tmp_path, capsys):
    bg = tmp_path / "bg.json"
    g = tmp_path / "g.json"
    assert run(capsys, "graph", "gen", "--left", "4", "--right", "4", "--p", "0.5",
               "--seed", "3", "--out", str(bg))[0] == 0
    assert run(capsys, "graph", "gen", "--n", "5", "--p", "0.5",
               "--seed", "3", "--out", str(g))[0] == 0
    assert "left" in read(bg) and "n" in read(g)
    assert run(capsys, "graph", "gen", "--n", "5", "--left", "4", "--right", "4",
               "--p", "0.5", "--out", str(g))[0] == 2


def test_graph_cover(tmp_path, capsys):
    g = tmp_path / "g.json"
    cover = tmp_path / "cover.json"
    g.write_text(json.dumps({"n": 3, "edges": [[0, 1], [1, 2]]}))
    assert run(capsys, "graph", "cover", "--input", str(g), "--out", str(cover))[0] == 0
    obj = read(cover)
    assert obj["left"] == 3 and obj["right"] == 3 and len(obj["edges"]) == 4


def test_solve_matching_exact_matches_oracle(tmp_path, capsys):
    bg = tmp_path / "bg.json"
    wit = tmp_path / "wit.json"
    assert run(capsys, "graph", "gen", "--left", "5", "--right", "5", "--p", "0.4",
               "--seed", "3", "--out", str(bg))[0] == 0
    assert run(capsys, "solve", "matching", "--algo", "exact",
               "--input", str(bg), "--out", str(wit))[0] == 0
    graph = load_graph_json(read(bg))
    optimum, _ = max_induced_matching_bruteforce(graph)
    witness = read(wit)
    assert witness["size"] == optimum == len(witness["pairs"])


def test_solve_pricing_bundled_example_revenue_four(tmp_path, capsys):
    bundled = resources.files("matchprice").joinpath("data/two_consumer_smp.json")
    prices = tmp_path / "prices.json"
    code, stdout = run(
        capsys,
        "solve", "pricing", "--algo", "oracle",
        "--input", str(bundled), "--out", str(prices),
    )
    assert code == 0
    assert json.loads(stdout)["revenue"] == "4"
    assert read(prices)["prices"] == ["2"]


def test_reduce_writes_instance_and_provenance(tmp_path, capsys):
    bg = tmp_path / "bg.json"
    inst = tmp_path / "inst.json"
    prov = tmp_path / "prov.json"
    bg.write_text(json.dumps({"left": 3, "right": 3, "edges": [[0, 0], [1, 1], [2, 2]]}))
    code, _ = run(
        capsys,
        "reduce", "matching-to-pricing", "--d", "4", "--seed", "2", "--rule", "udp",
        "--input", str(bg), "--out", str(inst), "--provenance", str(prov),
    )
    assert code == 0
    obj = read(inst)
    assert obj["rule"] == "udp" and obj["items"] == 3 and len(obj["groups"]) == 3
    for group in obj["groups"]:
        assert "/" in group["budget"] or group["budget"].isdigit()
    provenance = read(prov)
    assert provenance["d"] == 4 and provenance["seed"] == 2


def test_pipeline_runs_end_to_end(tmp_path, capsys):
    csp = tmp_path / "csp.json"
    out = tmp_path / "pipe.json"
    assert run(capsys, "csp", "gen", "--num-vars", "4", "--num-clauses", "3",
               "--arity", "2", "--seed", "5", "--balanced", "--out", str(csp))[0] == 0
    code, _ = run(
        capsys,
        "pipeline", "run", "--csp", str(csp), "--t", "2", "--m-out", "3",
        "--gamma", "1/2", "--d", "3", "--seed", "4", "--out", str(out),
    )
    assert code == 0
    report = read(out)
    expected = {"csp", "amplified", "fglss", "replaced", "double_cover",
                "reduction", "pricing", "extraction"}
    assert expected <= set(report["stages"])
    assert "gap" in report and report["seed"] == 4


def test_verify_all_deterministic_bytes(tmp_path, capsys):
    first = tmp_path / "v1.json"
    second = tmp_path / "v2.json"
    for path in (first, second):
        code, _ = run(capsys, "verify", "all", "--scale", "desk", "--seed", "7",
                      "--out", str(path))
        assert code == 0
    assert first.read_bytes() == second.read_bytes()
    report = json.loads(first.read_text())
    assert report["ok"] is True and report["seed"] == 7


def test_cap_refusal_exits_three(tmp_path, capsys):
    big = tmp_path / "big.json"
    big.write_text(json.dumps(
        {"left": 30, "right": 30, "edges": [[u, u] for u in range(30)]}
    ))
    code, _ = run(capsys, "solve", "matching", "--algo", "exact", "--input", str(big))
    assert code == 3


def test_unknown_subcommand_exits_two(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["frobnicate"])
    capsys.readouterr()
    assert excinfo.value.code == 2


def test_missing_input_file_exits_two(tmp_path, capsys):
    code, _ = run(capsys, "solve", "matching", "--algo", "exact",
                  "--input", str(tmp_path / "absent.json"))
    assert code == 2
