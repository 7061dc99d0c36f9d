import json

from ewcolour.cli import run


def out_of(capsys):
    return json.loads(capsys.readouterr().out.strip().splitlines()[-1])


def test_rho_threshold_values(capsys):
    assert run(["rho", "--genus", "3", "--epsilon", "1/43"]) == 0
    assert out_of(capsys) == {"rho": "516"}
    assert run(["rho", "--genus", "2"]) == 0
    assert out_of(capsys) == {"rho": "0"}
    assert run(["rho", "--genus", "4", "--epsilon", "1/86"]) == 0
    assert out_of(capsys) == {"rho": "2064"}


def test_rho_rejects_bad_epsilon(capsys):
    assert run(["rho", "--genus", "3", "--epsilon", "kittens"]) == 2
    assert "error" in out_of(capsys)
    assert run(["rho", "--genus", "3", "--epsilon", "1/2"]) == 2


def test_gen_is_seed_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    la, lb = tmp_path / "la.json", tmp_path / "lb.json"
    args = ["gen", "--family", "torus_grid_tri", "--m", "4", "--n", "4",
            "--e1", "random", "--e1-seed", "5", "--lists-seed", "6"]
    assert run(args + ["--out", str(a), "--lists-out", str(la)]) == 0
    summary = out_of(capsys)
    assert summary["genus"] == 2 and summary["vertices"] == 16
    assert run(args + ["--out", str(b), "--lists-out", str(lb)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert la.read_bytes() == lb.read_bytes()


def test_gen_output_reparses_losslessly(tmp_path, capsys):
    path = tmp_path / "g.json"
    assert run(["gen", "--family", "klein_grid", "--m", "3", "--n", "4",
                "--out", str(path)]) == 0
    from ewcolour.embedding import EmbeddedGraph
    data = json.loads(path.read_text())
    g, classing = EmbeddedGraph.from_json_dict(data)
    assert g.to_json_dict(classing) == data


def test_ew_subcommand(tmp_path, capsys):
    path = tmp_path / "g.json"
    run(["gen", "--family", "torus_grid_quad", "--m", "3", "--n", "4",
         "--out", str(path)])
    capsys.readouterr()
    assert run(["ew", "--graph", str(path), "--t", "2"]) == 0
    r = out_of(capsys)
    assert r["width"] == 3 and r["status"] == "finite"
    assert run(["ew", "--graph", str(path), "--fast"]) == 0
    assert out_of(capsys)["width"] == 3
    assert run(["ew", "--graph", str(path), "--budget", "2"]) == 0
    assert out_of(capsys)["status"] == "bounded-infinite"


def test_solve_then_check_round_trip(tmp_path, capsys):
    g, l, c, t = (tmp_path / x for x in ("g.json", "l.json", "c.json", "t.json"))
    run(["gen", "--family", "torus_grid_tri", "--m", "7", "--n", "7",
         "--palette-size", "30", "--k", "9", "--lists-seed", "3",
         "--out", str(g), "--lists-out", str(l)])
    assert run(["solve", "--graph", str(g), "--lists", str(l),
                "--out", str(c), "--trace", str(t)]) == 0
    assert out_of(capsys)["status"] == "ok"
    assert run(["check", "--graph", str(g), "--colouring", str(c),
                "--lists", str(l)]) == 0
    assert out_of(capsys) == {"valid": True}
    steps = json.loads(t.read_text())["steps"]
    assert steps and all("kind" in s for s in steps)


def test_solve_exact_infeasible_exits_one(tmp_path, capsys):
    g, l = tmp_path / "g.json", tmp_path / "l.json"
    run(["gen", "--family", "k7_torus", "--out", str(g)])
    lists = {str(v): [1, 2, 3] for v in range(7)}  # K7 needs 7 colours
    l.write_text(json.dumps(lists))
    assert run(["solve", "--graph", str(g), "--lists", str(l), "--exact"]) == 1
    assert out_of(capsys)["status"] == "infeasible"


def test_check_flags_bicoloured_cycle_with_witness(tmp_path, capsys):
    g, c = tmp_path / "g.json", tmp_path / "c.json"
    # C4 with all edges E1, coloured 1,2,1,2
    data = {"vertices": [0, 1, 2, 3],
            "edges": [{"id": 0, "u": 0, "v": 1, "sign": 1, "e1": True},
                      {"id": 1, "u": 1, "v": 2, "sign": 1, "e1": True},
                      {"id": 2, "u": 2, "v": 3, "sign": 1, "e1": True},
                      {"id": 3, "u": 0, "v": 3, "sign": 1, "e1": True}],
            "rotation": {"0": [[0, 0], [3, 0]], "1": [[0, 1], [1, 0]],
                         "2": [[1, 1], [2, 0]], "3": [[2, 1], [3, 1]]}}
    g.write_text(json.dumps(data))
    c.write_text(json.dumps({"0": 1, "1": 2, "2": 1, "3": 2}))
    assert run(["check", "--graph", str(g), "--colouring", str(c)]) == 1
    verdict = out_of(capsys)
    assert verdict["reason"] == "bicoloured-e1-cycle"
    assert sorted(verdict["witness"]["vertices"]) == [0, 1, 2, 3]
    # improper colouring also rejected
    c.write_text(json.dumps({"0": 1, "1": 1, "2": 1, "3": 2}))
    assert run(["check", "--graph", str(g), "--colouring", str(c)]) == 1
    assert out_of(capsys)["reason"] == "improper"


def test_discharge_and_find_config(tmp_path, capsys):
    g = tmp_path / "g.json"
    run(["gen", "--family", "k7_torus", "--out", str(g)])
    capsys.readouterr()
    assert run(["discharge", "--graph", str(g), "--log-transfers"]) == 0
    rep = out_of(capsys)
    assert rep["conserved"] is True
    assert rep["totals"]["ch0"] == "0"
    assert rep["configuration"] == "TRIANGULAR6_CLUSTER"
    assert "transfers" in rep
    assert run(["find-config", "--graph", str(g)]) == 0
    cfg = out_of(capsys)
    assert cfg["kind"] == "TRIANGULAR6_CLUSTER"


def test_solve_handles_disconnected_input_per_component(tmp_path, capsys):
    # two disjoint triangles in one file; the CLI colours each component
    edges = []
    for base, off in ((0, 0), (3, 3)):
        edges += [{"id": off + 0, "u": base, "v": base + 1, "sign": 1, "e1": True},
                  {"id": off + 1, "u": base + 1, "v": base + 2, "sign": 1, "e1": True},
                  {"id": off + 2, "u": base, "v": base + 2, "sign": 1, "e1": True}]
    rotation = {}
    for base, off in ((0, 0), (3, 3)):
        rotation[str(base)] = [[off + 0, 0], [off + 2, 0]]
        rotation[str(base + 1)] = [[off + 0, 1], [off + 1, 0]]
        rotation[str(base + 2)] = [[off + 1, 1], [off + 2, 1]]
    gpath, lpath, cpath = tmp_path / "g.json", tmp_path / "l.json", tmp_path / "c.json"
    gpath.write_text(json.dumps({"vertices": list(range(6)), "edges": edges,
                                 "rotation": rotation}))
    lpath.write_text(json.dumps({str(v): list(range(9)) for v in range(6)}))
    assert run(["solve", "--graph", str(gpath), "--lists", str(lpath),
                "--out", str(cpath)]) == 0
    assert out_of(capsys)["status"] == "ok"
    assert run(["check", "--graph", str(gpath), "--colouring", str(cpath)]) == 0


def test_unparseable_file_exits_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert run(["ew", "--graph", str(bad)]) == 2
    assert "error" in out_of(capsys)
    missing = tmp_path / "missing.json"
    assert run(["ew", "--graph", str(missing)]) == 2


def test_pretty_flag_is_pure_rendering(capsys):
    assert run(["--pretty", "rho", "--genus", "5"]) == 0
    text = capsys.readouterr().out
    assert json.loads(text) == {"rho": "1548"}
    assert "\n" in text.strip()
