import json

import pytest

from immersion.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out + out.err


def test_gen_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert run(capsys, "gen", "random-gnp", "--n", "40", "--p", "0.3", "--seed", "7", "-o", str(a))[0] == 0
    assert run(capsys, "gen", "random-gnp", "--n", "40", "--p", "0.3", "--seed", "7", "-o", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize(
    "argv, expect",
    [
        (["seymour"], "n=12 m=54"),
        (["class2", "--D", "2", "--t", "4"], "n=12 m=54"),
        (["complement-cycles", "--t", "3"], "n=15 m=90"),
        (["complement-matching", "--n", "8"], "n=8 m=24"),
        (["complete", "--n", "6"], "n=6 m=15"),
        (["random-mindeg", "--n", "30", "--p", "0.1", "--delta", "5"], "n=30"),
    ],
)
def test_gen_families(tmp_path, capsys, argv, expect):
    code, out = run(capsys, "gen", *argv, "-o", str(tmp_path / "g.txt"))
    assert code == 0 and expect in out


def test_gen_missing_parameters(tmp_path, capsys):
    code, out = run(capsys, "gen", "random-gnp", "--n", "10", "-o", str(tmp_path / "g.txt"))
    assert code == 2 and "--p" in out
    code, _ = run(capsys, "gen", "class2", "--D", "3", "--t", "7", "-o", str(tmp_path / "g.txt"))
    assert code == 2


def test_find_dense_verify_roundtrip(tmp_path, capsys):
    g, c1, c2 = tmp_path / "g.txt", tmp_path / "c1.json", tmp_path / "c2.json"
    run(capsys, "gen", "random-gnp", "--n", "200", "--p", "0.32", "--seed", "1", "-o", str(g))
    assert run(capsys, "find", "dense", str(g), "--seed", "3", "-o", str(c1))[0] == 0
    assert run(capsys, "find", "dense", str(g), "--seed", "3", "-o", str(c2))[0] == 0
    assert c1.read_bytes() == c2.read_bytes()
    code, out = run(capsys, "verify", str(g), str(c1), "--expect-strong", "--expect-k", "1")
    assert code == 0 and "valid=True" in out
    assert run(capsys, "verify", str(g), str(c1), "--expect-order", "10000")[0] == 1


def test_find_sparse_and_very_dense(tmp_path, capsys):
    g, c = tmp_path / "g.txt", tmp_path / "c.json"
    run(capsys, "gen", "complement-matching", "--n", "32", "-o", str(g))
    code, out = run(capsys, "find", "very-dense", str(g), "-o", str(c))
    assert code == 0 and "K_29" in out
    # minimum degree 30 is far below 200t
    assert run(capsys, "find", "sparse", str(g), "--t", "3", "-o", str(c))[0] == 2


def test_find_sparse(tmp_path, capsys):
    g, c = tmp_path / "g.txt", tmp_path / "c.json"
    run(capsys, "gen", "random-mindeg", "--n", "650", "--p", "0.93", "--delta", "600", "--seed", "1", "-o", str(g))
    assert run(capsys, "find", "sparse", str(g), "--t", "3", "-o", str(c))[0] == 0
    code, out = run(capsys, "verify", str(g), str(c), "--expect-order", "3")
    assert code == 0 and "valid=True" in out


def test_find_precondition_exit(tmp_path, capsys):
    g = tmp_path / "g.txt"
    run(capsys, "gen", "complement-matching", "--n", "30", "-o", str(g))
    assert run(capsys, "find", "very-dense", str(g), "-o", str(tmp_path / "c.json"))[0] == 2


def test_verify_digest_mismatch(tmp_path, capsys):
    g, h, c = tmp_path / "g.txt", tmp_path / "h.txt", tmp_path / "c.json"
    run(capsys, "gen", "complete", "--n", "9", "-o", str(g))
    run(capsys, "gen", "complete", "--n", "10", "-o", str(h))
    run(capsys, "find", "very-dense", str(g), "-o", str(c))
    code, out = run(capsys, "verify", str(h), str(c))
    assert code == 4 and "different host graph" in out


def test_verify_bad_inputs(tmp_path, capsys):
    g, c = tmp_path / "g.txt", tmp_path / "c.json"
    g.write_text("p 3 1\ne 0 7\n")
    c.write_text("{}")
    assert run(capsys, "verify", str(g), str(c))[0] == 2
    run(capsys, "gen", "complete", "--n", "4", "-o", str(g))
    assert run(capsys, "verify", str(g), str(c))[0] == 2
    assert run(capsys, "verify", str(tmp_path / "missing.txt"), str(c))[0] == 2


def test_oracle_subcommand(tmp_path, capsys):
    g, c = tmp_path / "g.txt", tmp_path / "c.json"
    run(capsys, "gen", "seymour", "-o", str(g))
    code, out = run(capsys, "oracle", str(g), "--t", "10")
    assert code == 1 and out.startswith("NONE")
    code, out = run(capsys, "oracle", str(g), "--t", "9", "-o", str(c))
    assert code == 0 and "FOUND" in out
    assert run(capsys, "verify", str(g), str(c))[0] == 0
    assert run(capsys, "oracle", str(g), "--t", "10", "--budget", "3")[0] == 5
    assert run(capsys, "oracle", str(g), "--t", "3", "--max-vertices", "5")[0] == 5


def test_oracle_one_immersion(tmp_path, capsys):
    g = tmp_path / "g.txt"
    run(capsys, "gen", "complete", "--n", "5", "-o", str(g))
    assert run(capsys, "oracle", str(g), "--t", "3", "--one", "--strong")[0] == 1
    assert run(capsys, "oracle", str(g), "--t", "3", "--one")[0] == 0


def test_line_minor_subcommand(tmp_path, capsys):
    c, k, c2 = tmp_path / "lm.json", tmp_path / "k.txt", tmp_path / "lm2.json"
    code, out = run(capsys, "line-minor", "--p", "3", "-o", str(c), "--graph-out", str(k))
    assert code == 0 and "order 26" in out and "within bound=True" in out
    assert run(capsys, "verify", str(k), str(c))[0] == 0
    assert json.loads(c.read_text())
    code, out = run(capsys, "line-minor", "--graph", str(k), "-o", str(c2))
    assert code == 0 and "order 26" in out


def test_line_minor_degenerate(tmp_path, capsys):
    g, c = tmp_path / "g.txt", tmp_path / "c.json"
    run(capsys, "gen", "seymour", "-o", str(g))
    code, out = run(capsys, "line-minor", "--graph", str(g), "-o", str(c))
    assert code == 0 and "degenerate" in out and "star" in out


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "immersion" in capsys.readouterr().out


def test_verify_tampered_certificate(tmp_path, capsys):
    g, c = tmp_path / "g.txt", tmp_path / "c.json"
    run(capsys, "gen", "complement-matching", "--n", "32", "-o", str(g))
    run(capsys, "find", "very-dense", str(g), "-o", str(c))
    doc = json.loads(c.read_text())
    doc["paths"][1]["edges"] = doc["paths"][0]["edges"]
    c.write_text(json.dumps(doc))
    code, out = run(capsys, "verify", str(g), str(c))
    assert code == 1 and ("EdgeReuse" in out or "BadPath" in out or "WrongEnds" in out)


def test_line_minor_bad_prime(tmp_path, capsys):
    assert run(capsys, "line-minor", "--p", "4", "-o", str(tmp_path / "c.json"))[0] == 2
