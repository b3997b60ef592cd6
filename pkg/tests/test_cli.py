import json

import pytest
from click.testing import CliRunner

from tensorhoch import cli, moncat
from tensorhoch.exactla import SparseMatrix, GF, write_matrix


@pytest.fixture(scope="module")
def signs_file(tmp_path_factory, request):
    s = request.getfixturevalue("signs")
    path = tmp_path_factory.mktemp("signs") / "signs.json"
    s.save(path)
    return str(path)


def invoke(*args, **kw):
    return CliRunner().invoke(cli.main, list(args), catch_exceptions=False, **kw)


def test_version():
    r = invoke("--version")
    assert r.exit_code == 0 and "0.1.0" in r.stdout


def test_aposet_counts():
    r = invoke("aposet", "--n", "3")
    assert r.exit_code == cli.EXIT_OK
    body = json.loads(r.stdout)
    assert body["vertices"] == 14


def test_aposet_lemma(signs_file):
    r = invoke("aposet", "--n", "2", "--check-lemma", "--signs", signs_file)
    assert r.exit_code == 0 and json.loads(r.stdout)["lemma"]["holds_signed"]


@pytest.mark.parametrize("args", [("aposet", "--n", "9"), ("validate", "--builtin", "nope:1"),
                                  ("validate",), ("d2check", "--builtin", "vec:2"),
                                  ("validate", "--builtin", "vec:2", "--field", "gf9"),
                                  ("casestudy", "rn", "--param", "n=9"),
                                  ("casestudy", "rn", "--param", "oops")])
def test_input_errors_exit_2(args):
    assert invoke(*args).exit_code == cli.EXIT_INPUT


def test_unknown_study_name_is_usage_error():
    assert invoke("casestudy", "nothing").exit_code == 2


def test_validate_builtin():
    r = invoke("validate", "--builtin", "quiver:2")
    body = json.loads(r.stdout)
    assert r.exit_code == 0 and body["valid"] and not body["strict"] and body["members"] == [["e1"], ["e2"]]


def test_validate_reports_broken_axiom(tmp_path):
    P = moncat.vec_g_omega(moncat.cyclic_group(2), lambda a, b, c: -1 if (a, b, c) == (1, 1, 0) else 1)
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(P.to_json()))
    r = invoke("validate", "--presentation", str(f))
    assert r.exit_code == cli.EXIT_MISMATCH
    assert json.loads(r.stdout)["valid"] is False


def test_presentation_file_roundtrip(tmp_path, signs_file):
    P, _ = moncat.builtin("alg:dual")
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"presentation": P.to_json(), "generator": {"members": [["I"]], "names": ["I"]}}))
    a = invoke("cohomology", "--presentation", str(f), "--degmax", "2", "--signs", signs_file)
    b = invoke("cohomology", "--builtin", "alg:dual", "--degmax", "2", "--signs", signs_file)
    assert a.exit_code == b.exit_code == 0
    assert json.loads(a.stdout)["cohomology"] == json.loads(b.stdout)["cohomology"]


def test_malformed_presentation(tmp_path):
    f = tmp_path / "p.json"
    f.write_text('{"objects": []}')
    assert invoke("validate", "--presentation", str(f)).exit_code == cli.EXIT_INPUT


def test_d2check_writes_json_and_csv(tmp_path, signs_file):
    out = tmp_path / "r" / "d2.json"
    r = invoke("d2check", "--builtin", "vec:2:omega", "--degmax", "3", "--signs", signs_file, "--out", str(out))
    assert r.exit_code == 0
    body = json.loads(out.read_text())
    assert body["zero"] and body["header"]["signs"]["hash"]
    csv_lines = out.with_suffix(".csv").read_text().splitlines()
    assert len(csv_lines) == len(body["checks"]) + 1
    assert "component" in csv_lines[0]


def test_reruns_are_byte_identical(tmp_path, signs_file):
    outs = []
    for k in range(2):
        out = tmp_path / f"c{k}.json"
        r = invoke("cohomology", "--builtin", "quiver:2", "--window", "3", "--signs", signs_file, "--out", str(out))
        assert r.exit_code == 0
        outs.append((out.read_bytes(), out.with_suffix(".csv").read_bytes()))
    assert outs[0] == outs[1]


@pytest.mark.parametrize("kind", ["total", "f1", "dy", "hochschild", "unital", "spectral"])
def test_cohomology_kinds(kind, signs_file):
    r = invoke("cohomology", "--builtin", "vec:2", "--degmax", "2", "--kind", kind, "--signs", signs_file)
    assert r.exit_code == 0
    json.loads(r.stdout)


def test_unital_without_unit(signs_file):
    r = invoke("cohomology", "--builtin", "quiver:1", "--degmax", "2", "--kind", "unital", "--signs", signs_file)
    assert r.exit_code == cli.EXIT_INPUT


def test_limit_is_an_input_error(signs_file):
    r = invoke("cohomology", "--builtin", "vec:3", "--degmax", "3", "--limit", "10", "--signs", signs_file)
    assert r.exit_code == cli.EXIT_INPUT


def test_timings_only_on_request(signs_file):
    base = ("cohomology", "--builtin", "alg:k", "--degmax", "2", "--signs", signs_file)
    assert "seconds" not in json.loads(invoke(*base).stdout)
    assert "seconds" in json.loads(invoke("--timings", *base).stdout)


def test_casestudy_pass():
    r = invoke("casestudy", "hkr", "--param", "dimV=1", "--param", "p_max=2")
    assert r.exit_code == 0 and json.loads(r.stdout)["pass"]


def test_suite_subset_exit_codes(tmp_path):
    ok = invoke("suite", "--only", "4")
    assert ok.exit_code == cli.EXIT_OK
    assert "pass" in ok.output
    out = tmp_path / "s.json"
    bad = invoke("suite", "--only", "6", "--out", str(out))
    assert bad.exit_code == cli.EXIT_MISMATCH
    assert "FAIL" in bad.output
    assert out.with_suffix(".csv").read_text().splitlines()[0] == "id,pass,title"


def test_cache_gc_keeps_signs(tmp_path, signs):
    signs.save(tmp_path / f"signs-{signs.hash}.json")
    for k in range(2):
        write_matrix(tmp_path / f"mat-{k}.thmx", SparseMatrix.identity(40, GF(65521)))
    r = invoke("--cache", str(tmp_path), "cache", "gc", "--max-bytes", "0")
    assert r.exit_code == 0
    assert len(json.loads(r.stdout)["evicted"]) == 2
    assert [p.name for p in tmp_path.iterdir()] == [f"signs-{signs.hash}.json"]


def test_cache_gc_needs_directory(monkeypatch):
    monkeypatch.delenv("TENSORHOCH_CACHE", raising=False)
    assert invoke("cache", "gc", "--max-bytes", "0").exit_code == cli.EXIT_INPUT


def test_signs_command_saves(tmp_path, signs):
    out = tmp_path / "s.json"
    r = invoke("--cache", str(tmp_path / "c"), "signs", "--out", str(out))
    assert r.exit_code == 0
    assert json.loads(out.read_text())["kind"] == "tensorhoch-signs"
    assert signs.hash in r.stdout


def test_run_returns_status():
    assert cli.run(["aposet", "--n", "1"]) == 0
    assert cli.run(["aposet", "--n", "-1"]) == cli.EXIT_INPUT
