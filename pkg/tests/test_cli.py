import json

import pytest

import boxgap as bg
from boxgap.cli import main


def make_box(tmp_path, graphs, d, name="box"):
    box = bg.BoxSpace(graphs=graphs, d=d)
    return bg.write_manifest(box, tmp_path / name)


def read_csv(path):
    with open(path) as fh:
        lines = fh.read().splitlines()
    assert lines[0].startswith("# config_hash=")
    return lines[1:]


def test_spectrum_complete_graphs(tmp_path):
    manifest = make_box(
        tmp_path, [bg.complete_graph(n) for n in (4, 5, 6)], d=5
    )
    out = tmp_path / "out"
    assert main(["spectrum", "--input", manifest, "--out", str(out)]) == 0
    rows = read_csv(out / "summary.csv")
    assert rows[0] == "index,n,gap"
    gaps = [float(r.split(",")[2]) for r in rows[1:]]
    assert gaps == pytest.approx([4, 5, 6], abs=1e-9)
    data = json.loads((out / "spectrum_0000.json").read_text())
    assert "delta" in data and "markov" in data and "delta_tau" in data
    assert "config_hash" in data


def test_spectrum_empty_manifest(tmp_path):
    mpath = tmp_path / "empty.json"
    mpath.write_text("[]\n")
    out = tmp_path / "out"
    assert main(["spectrum", "--input", str(mpath), "--out", str(out)]) == 0
    assert read_csv(out / "summary.csv") == ["index,n,gap"]


def test_spectrum_malformed_edge_line(tmp_path):
    gpath = tmp_path / "bad.txt"
    gpath.write_text("3 2\n0 1\n1 x\n")
    mpath = tmp_path / "m.json"
    mpath.write_text(json.dumps([{"path": "bad.txt", "label": None}]))
    assert main(["spectrum", "--input", str(mpath), "--out",
                 str(tmp_path / "o")]) == 2


def test_missing_input_is_io_error(tmp_path):
    assert main(["spectrum", "--input", str(tmp_path / "nope.json"),
                 "--out", str(tmp_path / "o")]) == 1


def test_cheeger_command(tmp_path):
    manifest = make_box(tmp_path, [bg.cycle_graph(4), bg.cycle_graph(30)], d=2)
    out = tmp_path / "out"
    assert main(["cheeger", "--input", manifest, "--out", str(out)]) == 0
    rows = read_csv(out / "summary.csv")[1:]
    assert rows[0].split(",")[2:] == ["1.0", "exact"]
    assert rows[1].split(",")[3] == "sweep"


def test_zuk_command_octahedron_and_c5(tmp_path):
    manifest = make_box(tmp_path, [bg.octahedron(), bg.cycle_graph(5)], d=4)
    out = tmp_path / "out"
    assert main(["zuk", "--input", manifest, "--out", str(out)]) == 0
    octa = json.loads((out / "zuk_0000.json").read_text())
    assert octa["valid"] and abs(octa["c"] - 1.0) < 1e-9
    c5 = json.loads((out / "zuk_0001.json").read_text())
    assert c5["valid"] is False
    assert "diagnostic" in c5


def test_decompose_command(tmp_path):
    g = bg.disjoint_union(bg.complete_graph(6), bg.complete_graph(6))
    manifest = make_box(tmp_path, [g], d=5)
    out = tmp_path / "out"
    assert main([
        "decompose", "--input", manifest, "--out", str(out),
        "--alpha", "0.1", "--gap", "4.0",
    ]) == 0
    data = json.loads((out / "decompose_0000.json").read_text())
    assert len(data["decomposition"]["pieces"]) == 2
    assert data["certificate"]["passed"]


def test_expanderize_feasibility_gate(tmp_path):
    manifest = make_box(tmp_path, [bg.complete_graph(6)], d=5)
    out = tmp_path / "out"
    code = main([
        "expanderize", "--input", manifest, "--out", str(out),
        "--alpha", "0.3", "--gap", "4.0",
    ])
    assert code == 2
    code = main([
        "expanderize", "--input", manifest, "--out", str(out),
        "--alpha", "0.3", "--gap", "4.0", "--allow-infeasible-alpha",
    ])
    assert code == 0


def test_expanderize_identity_output_bytes(tmp_path):
    manifest = make_box(
        tmp_path, [bg.disjoint_union(bg.complete_graph(6), bg.complete_graph(6))],
        d=5,
    )
    out = tmp_path / "out"
    assert main([
        "expanderize", "--input", manifest, "--out", str(out),
        "--alpha", "0.1", "--gap", "4.0", "--allow-infeasible-alpha",
    ]) == 0
    original = (tmp_path / "box" / "graph_0000.txt").read_bytes()
    produced = (out / "graphs" / "graph_0000.txt").read_bytes()
    assert original == produced
    witness = json.loads((out / "witness.json").read_text())
    assert len(witness["entries"]) == 1


def test_rerun_is_byte_identical(tmp_path):
    manifest = make_box(tmp_path, [bg.complete_graph(5)], d=4)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        assert main(["spectrum", "--input", manifest, "--out", str(out)]) == 0
    for name in ("spectrum_0000.json", "summary.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_generate_command(tmp_path):
    spec = [
        {"family": "margulis", "params": {"n": 4}},
        {"family": "octahedron", "params": {}},
        {"family": "cayley",
         "params": {"group": {"kind": "cyclic", "n": 6}, "gens": [1, 5]}},
    ]
    spath = tmp_path / "spec.json"
    spath.write_text(json.dumps(spec))
    out = tmp_path / "gen"
    assert main(["generate", "--input", str(spath), "--out", str(out)]) == 0
    box = bg.read_manifest(str(out / "manifest.json"))
    assert box.sizes() == [16, 6, 6]
    assert "margulis" in box.labels[0]


def test_generate_then_expanderize_roundtrip(tmp_path):
    spec = [{"family": "bridged_margulis_pair", "params": {"n": 4}}]
    spath = tmp_path / "spec.json"
    spath.write_text(json.dumps(spec))
    gen = tmp_path / "gen"
    assert main(["generate", "--input", str(spath), "--out", str(gen)]) == 0
    out = tmp_path / "exp"
    assert main([
        "expanderize", "--input", str(gen / "manifest.json"), "--out", str(out),
        "--alpha", "0.3", "--gap", "0.5", "--allow-infeasible-alpha",
    ]) == 0
    assert (out / "summary.csv").exists()


def test_sofic_command(tmp_path):
    spec = {
        "action": {"kind": "cyclic", "m": 13, "shifts": [-2, -1, 1, 2]},
        "relations": [[["t^1"], ["t^1"], ["t^2"]]],
        "check_fixed": [["t^1"], ["t^2"]],
    }
    spath = tmp_path / "sofic.json"
    spath.write_text(json.dumps(spec))
    out = tmp_path / "out"
    assert main(["sofic", "--input", str(spath), "--out", str(out)]) == 0
    rep = json.loads((out / "sofic.json").read_text())
    assert rep["epsilon"] == 0.0


def test_approx_iso_command(tmp_path):
    manifest = make_box(tmp_path, [bg.cycle_graph(6)], d=2)
    g = bg.cycle_graph(6)
    witness = bg.ApproxIsoWitness(entries=[
        bg.WitnessEntry(tuple(range(6)), tuple(range(6)), tuple(g.edges()))
    ])
    wpath = tmp_path / "w.json"
    wpath.write_text(json.dumps(witness.to_dict()))
    out = tmp_path / "out"
    assert main([
        "approx-iso", "--input", manifest, "--input2", manifest,
        "--witness", str(wpath), "--out", str(out),
    ]) == 0
    rep = json.loads((out / "approx_iso.json").read_text())
    assert rep["verdict"]


def test_approx_iso_corrupted_witness_exit_2(tmp_path):
    manifest = make_box(tmp_path, [bg.cycle_graph(6)], d=2)
    witness = bg.ApproxIsoWitness(entries=[
        bg.WitnessEntry(tuple(range(6)), tuple(range(6)), ((0, 3),))
    ])
    wpath = tmp_path / "w.json"
    wpath.write_text(json.dumps(witness.to_dict()))
    assert main([
        "approx-iso", "--input", manifest, "--input2", manifest,
        "--witness", str(wpath), "--out", str(tmp_path / "o"),
    ]) == 2


def test_workers_match_serial(tmp_path):
    manifest = make_box(
        tmp_path, [bg.complete_graph(n) for n in (4, 5, 6, 7)], d=6
    )
    out1, out2 = tmp_path / "s", tmp_path / "p"
    assert main(["spectrum", "--input", manifest, "--out", str(out1)]) == 0
    assert main(["spectrum", "--input", manifest, "--out", str(out2),
                 "--workers", "4"]) == 0
    a = (out1 / "summary.csv").read_text().splitlines()[1:]
    b = (out2 / "summary.csv").read_text().splitlines()[1:]
    assert a == b


def test_metadata_written_separately(tmp_path):
    manifest = make_box(tmp_path, [bg.complete_graph(4)], d=3)
    out = tmp_path / "out"
    main(["spectrum", "--input", manifest, "--out", str(out)])
    meta = json.loads((out / "run_metadata.json").read_text())
    assert "timestamp" in meta and "config_hash" in meta
    report = json.loads((out / "spectrum_0000.json").read_text())
    assert "timestamp" not in report
