import json

import pytest

from cli.commands import build_parser, run


def write(path, obj):
    path.write_text(json.dumps(obj), encoding="utf-8")
    return str(path)


def test_generated_torus_homology(tmp_path, capsys):
    doc = tmp_path / "torus.json"
    assert run(["gen", "torus", "--p", "4", "--q", "4", "-o", str(doc)]) == 0
    assert json.loads(doc.read_text())["name"] == "torus-4x4"
    assert run(["homology", str(doc), "--deg", "1"]) == 0
    assert capsys.readouterr().out == "H_1 = Z^2\n"


def test_all_degrees(capsys):
    assert run(["homology", "--corpus", "klein"]) == 0
    assert capsys.readouterr().out == "H_0 = Z\nH_1 = Z ⊕ Z/2\nH_2 = 0\n"
    assert run(["cohomology", "--corpus", "klein", "--coeff", "z2"]) == 0
    assert capsys.readouterr().out == "H^0 = Z/2\nH^1 = (Z/2)^2\nH^2 = Z/2\n"


def test_generators_are_printed(capsys):
    assert run(["homology", "--corpus", "circle-3", "--deg", "1", "--generators"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "H_1 = Z"
    assert lines[1].startswith('  free {"kind": "chain", "degree": 1')


def test_validate(capsys):
    assert run(["validate", "--corpus", "klein"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("valid: klein\n")
    assert "face counts: 36 72 36\n" in out


def test_euler(capsys):
    assert run(["euler", "--corpus", "torus-3"]) == 0
    assert capsys.readouterr().out.endswith("chi = 0 (faces), 0 (betti)\n")


def test_pd_check(capsys):
    assert run(["pd-check", "--corpus", "cube-boundary-3"]) == 0
    assert capsys.readouterr().out.endswith("PD: iso in degrees 0..2\n")


def test_checks_pass_on_torus(capsys):
    assert run(["intersect-check", "--corpus", "torus-3"]) == 0
    assert run(["uct-check", "--corpus", "torus-3", "--deg", "1"]) == 0
    assert run(["kunneth", "circle-3", "cube-boundary-3"]) == 0
    assert capsys.readouterr().out.endswith("Kunneth: PASS\n")


def test_cup_of_documents(tmp_path, capsys):
    one = write(tmp_path / "one.json", {"kind": "cochain", "degree": 0, "terms": [[["p0"], 1], [["p1"], 1]]})
    edge = write(tmp_path / "edge.json", {"kind": "cochain", "degree": 1, "terms": [[["p0", "p1"], 5]]})
    assert run(["cup", "--corpus", "interval", "--alpha", one, "--beta", edge]) == 0
    assert capsys.readouterr().out == '{"kind": "cochain", "degree": 1, "terms": [[["p0", "p1"], 5]]}\n'


def test_cap_with_fundamental_class(tmp_path, capsys):
    one = write(tmp_path / "one.json", {"kind": "cochain", "degree": 0, "terms": [[[v], 1] for v in ("v0", "v1", "v2")]})
    assert run(["cap", "--corpus", "circle-3", "--alpha", one]) == 0
    assert run(["fclass", "--corpus", "circle-3"]) == 0
    capped, fundamental = capsys.readouterr().out.splitlines()
    assert capped == fundamental


def test_cross_writes_product(tmp_path, capsys):
    edge = write(tmp_path / "edge.json", {"kind": "chain", "degree": 1, "terms": [[["p0", "p1"], 1]]})
    product = tmp_path / "product.json"
    args = ["cross", "interval", "interval", "--left-chain", edge, "--right-chain", edge, "--product-out", str(product)]
    assert run(args) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["degree"] == 2
    assert len(json.loads(product.read_text())["cubes"]) == 1


def test_dual_lines(capsys):
    assert run(["dual", "--corpus", "circle-3", "--deg", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 3
    assert all(" -> " in line for line in lines)


def test_subdivide(capsys):
    assert run(["subdivide", "--corpus", "interval"]) == 0
    assert len(json.loads(capsys.readouterr().out)["cubes"]) == 2


def test_sign_suite_is_deterministic(capsys):
    args = ["sign-suite", "--seed", "3", "--instances", "5", "--max-dim", "3"]
    assert run(args) == 0
    first = capsys.readouterr().out
    assert run(args) == 0
    assert capsys.readouterr().out == first
    assert first.endswith("all properties: PASS\n")


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.txt"
    assert run(["homology", "--corpus", "point", "-o", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert target.read_bytes() == b"H_0 = Z\n"


@pytest.mark.parametrize("argv, status, error", [
    (["pd-check", "--corpus", "klein"], 1, "error: NonOrientableError: "),
    (["fclass", "--corpus", "path-2"], 1, "error: NotClosedError: "),
    (["homology", "--corpus", "nope"], 2, "error: UnknownCorpusEntryError: "),
    (["gen", "circle", "--k", "2"], 2, "error: ParamTooSmallError: "),
    (["gen", "fuzz"], 2, "error: ValueError: "),
    (["sign-suite", "--seed", "1", "--max-dim", "9"], 2, "error: ValueError: "),
    (["homology", "/nonexistent/complex.json"], 2, "error: FileNotFoundError: "),
])
def test_error_exit_codes(argv, status, error, capsys):
    assert run(argv) == status
    captured = capsys.readouterr()
    assert captured.out == ""
    assert captured.err.startswith(error)
    assert captured.err.count("\n") == 1


def test_syntax_error_reports_position(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"cubes": [["a",]]}', encoding="utf-8")
    assert run(["validate", str(bad)]) == 1
    assert "error: DocumentSyntaxError: " in capsys.readouterr().err


def test_wrong_document_kind(tmp_path, capsys):
    chain = write(tmp_path / "chain.json", {"kind": "chain", "degree": 0, "terms": []})
    assert run(["cup", "--corpus", "interval", "--alpha", chain, "--beta", chain]) == 2
    assert "must be a cochain document" in capsys.readouterr().err


def test_usage_errors(capsys):
    assert run(["frobnicate"]) == 2
    assert run([]) == 2
    assert run(["sign-suite"]) == 2


def test_parser_lists_every_command():
    parser = build_parser()
    commands = parser._subparsers._group_actions[0].choices
    assert set(commands) == {
        "validate", "gen", "homology", "cohomology", "euler", "fclass", "cup", "cap", "cross",
        "subdivide", "dual", "intersect-check", "pd-check", "uct-check", "kunneth", "sign-suite",
    }
