"""End-to-end command-line behavior: exit codes, formats, schemas, determinism."""

import json
from importlib import resources as importlib_resources

import jsonschema
import pytest
from referencing import Registry, Resource

from felab import arith, cli


@pytest.fixture(autouse=True)
def _no_cache_dir():
    yield
    arith.set_cache_dir(None)


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def run_json(argv, capsys):
    code, out, err = run(argv + ["--json"], capsys)
    assert err == ""
    return code, json.loads(out)


# ---------------------------------------------------------------------------
# schema registry
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def registry():
    root = importlib_resources.files("felab") / "schemas"
    pairs = []
    for entry in root.iterdir():
        if entry.name.endswith(".json"):
            doc = json.loads(entry.read_text(encoding="utf-8"))
            pairs.append((doc["$id"], Resource.from_contents(doc)))
    return Registry().with_resources(pairs)


def validate(registry, name, payload):
    root = importlib_resources.files("felab") / "schemas" / f"{name}.schema.json"
    schema = json.loads(root.read_text(encoding="utf-8"))
    jsonschema.Draft202012Validator(schema, registry=registry).validate(payload)


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------

def test_check_refuted(registry, capsys):
    code, payload = run_json(["check", "max", "ap(1,2)"], capsys)
    assert code == 1
    assert payload["verdict"]["status"] == "refuted"
    assert payload["verdict"]["certificate"]["n0"] == 2
    assert payload["exit"] == 1
    validate(registry, "check", payload)


def test_check_proved(registry, capsys):
    code, payload = run_json(["check", "a-thick", "N", "--horizon", "5000"], capsys)
    assert code == 0 and payload["verdict"]["status"] == "proved"
    assert payload["horizon"] == 5000
    validate(registry, "check", payload)


def test_check_bounded(registry, capsys):
    code, payload = run_json(["check", "nmax", "N", "--horizon", "10000"], capsys)
    assert code == 2
    assert payload["verdict"]["status"] == "bounded"
    assert payload["verdict"]["direction"] == "for"
    validate(registry, "check", payload)


def test_check_table(capsys):
    code, out, err = run(["check", "max", "ap(1,2)"], capsys)
    assert code == 1 and err == ""
    assert "property: max" in out
    assert "status: refuted" in out
    assert "certificate:" in out


def test_check_property_is_case_insensitive(capsys):
    code, out, _ = run(["check", "MAX", "ap(1,2)"], capsys)
    assert code == 1


def test_check_unknown_property(capsys):
    code, out, err = run(["check", "huge", "N"], capsys)
    assert code == 3
    assert "unknown property" in err


def test_check_parse_error(capsys):
    code, out, err = run(["check", "max", "mult("], capsys)
    assert code == 3 and "error:" in err


def test_check_bad_horizon(capsys):
    code, out, err = run(["check", "max", "N", "--horizon", "0"], capsys)
    assert code == 3 and "horizon" in err


def test_check_expression_and_batch_conflict(tmp_path, capsys):
    batch = tmp_path / "exprs.txt"
    batch.write_text("N\n")
    code, out, err = run(["check", "max", "N", "--batch", str(batch)], capsys)
    assert code == 3 and "not both" in err


def test_check_batch_worst_exit(tmp_path, capsys):
    batch = tmp_path / "exprs.txt"
    batch.write_text("# three runs\nN\nap(1,2)\nmult(\n")
    code, out, err = run(["check", "max", "--batch", str(batch),
                          "--horizon", "5000"], capsys)
    assert code == 3
    lines = [json.loads(ln) for ln in out.splitlines()]
    assert len(lines) == 3
    assert lines[0]["exit"] == 0 and lines[1]["exit"] == 1
    assert "error" in lines[2] and lines[2]["exit"] == 3
    assert all("\n" not in json.dumps(l) for l in lines)


# ---------------------------------------------------------------------------
# fe / me
# ---------------------------------------------------------------------------

def test_fe_proved(registry, capsys):
    code, payload = run_json(["fe", "{2,3}", "mult(6)"], capsys)
    assert code == 0
    assert payload["verdict"]["status"] == "proved"
    assert payload["verdict"]["certificate"]["witness"]["k"] == 6
    assert payload["oracle_agreement"] is True
    validate(registry, "fe", payload)


def test_fe_table_mentions_oracle(capsys):
    code, out, _ = run(["fe", "{2,3}", "mult(6)"], capsys)
    assert code == 0
    assert "oracle agreement: yes" in out


def test_fe_level_refuted(registry, capsys):
    code, payload = run_json(
        ["fe", "{6,8}", "union(level(2),level(5))", "--horizon", "5000"], capsys)
    assert code == 1
    assert payload["verdict"]["certificate"]["refutation"]["kind"] == "level-certificate"
    assert payload["refuters"]["level"] is not None
    validate(registry, "fe", payload)


def test_fe_precision_exit(capsys):
    code, out, err = run(["fe", "{1,704}", "fs(exgamma())",
                          "--kmax", "10", "--horizon", "2000"], capsys)
    assert code == 5 and "error:" in err


def test_me_proved(registry, capsys):
    code, payload = run_json(["me", "{2,3}", "mult(6)", "--m", "2"], capsys)
    assert code == 0
    assert payload["m"] == 2
    assert payload["verdict"]["certificate"]["worst_witness"]["k"] == 6
    validate(registry, "me", payload)


def test_me_requires_m(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["me", "N", "N"])
    assert exc.value.code == 2
    capsys.readouterr()


# ---------------------------------------------------------------------------
# diagram
# ---------------------------------------------------------------------------

def test_diagram_json(registry, capsys):
    code, payload = run_json(["diagram", "N", "--horizon", "10000"], capsys)
    assert code == 0
    rows = payload["report"]["properties"]
    assert [r["name"] for r in rows][:4] == ["A-thick", "M-thick", "A-pcws", "M-pcws"]
    assert len(rows) == 17
    audits = payload["report"]["audits"]
    assert audits and all(a["status"] == "pass" for a in audits)
    validate(registry, "diagram", payload)


def test_diagram_table(capsys):
    code, out, _ = run(["diagram", "ap(1,2)", "--horizon", "10000"], capsys)
    assert code == 0
    assert "A-thick" in out and "refuted" in out
    assert "audit [" in out


def test_diagram_override_flag(registry, capsys):
    code, payload = run_json(
        ["diagram", "mult(2)", "--horizon", "5000", "--n", "3"], capsys)
    assert code == 0
    assert payload["report"]["params"]["run_length"] == 3
    validate(registry, "diagram", payload)


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------

def test_construct_table(capsys):
    code, out, _ = run(["construct", "exgamma", "6"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "1 2 6 12 25 48"


def test_construct_thick_blocks(registry, capsys):
    code, payload = run_json(["construct", "thick_nonmaxstar", "4"], capsys)
    assert code == 0
    assert payload["blocks"] == [[2], [4, 5], [7, 8, 9], [13, 14, 15, 16]]
    assert payload["avoided"] == [3, 6, 12, 20]
    validate(registry, "construct", payload)


def test_construct_unknown_name(capsys):
    code, out, err = run(["construct", "mystery"], capsys)
    assert code == 3 and "unknown fixture" in err


def test_construct_emit_roundtrip(tmp_path, registry, capsys):
    dest = tmp_path / "fp.set"
    code, payload = run_json(
        ["construct", "fp_primes", "odd", "6", "--emit", str(dest)], capsys)
    assert code == 0 and payload["emitted"] == str(dest)
    validate(registry, "construct", payload)
    text = dest.read_text()
    assert text.startswith("#")
    code2, parsed = run_json(["parse", "@" + str(dest)], capsys)
    assert code2 == 0
    assert parsed["ast"]["kind"] == "Explicit"
    assert parsed["ast"]["elems"] == payload["members"]
    assert len(payload["members"]) == 63


def test_set_file_rejects_unsorted(tmp_path, capsys):
    bad = tmp_path / "bad.set"
    bad.write_text("5\n3\n")
    code, out, err = run(["parse", "@" + str(bad)], capsys)
    assert code == 3 and "strictly increasing" in err


def test_set_file_rejects_nonnumeric(tmp_path, capsys):
    bad = tmp_path / "bad.set"
    bad.write_text("2\nthree\n")
    code, out, err = run(["parse", "@" + str(bad)], capsys)
    assert code == 3 and "decimal natural" in err


def test_set_file_requires_values(tmp_path, capsys):
    bad = tmp_path / "empty.set"
    bad.write_text("# nothing here\n")
    code, out, err = run(["parse", "@" + str(bad)], capsys)
    assert code == 3 and "no values" in err


# ---------------------------------------------------------------------------
# chain / atlas / parse
# ---------------------------------------------------------------------------

def test_chain_verify(registry, capsys):
    code, out, err = run(["chain", "5", "8", "--verify"], capsys)
    assert code == 0 and err == ""
    assert "verified 5/5 refutations" in out
    code, payload = run_json(["chain", "5", "8", "--verify"], capsys)
    assert payload["verified_refutations"] == 5
    assert payload["result"]["levels"][0] == [1, 2, 3, 4, 5, 6, 7, 8]
    validate(registry, "chain", payload)


def test_atlas_exit_and_duality(registry, capsys):
    code, out, _ = run(["atlas", "12"], capsys)
    assert code == 0
    assert "duality check: PASS" in out
    code, payload = run_json(["atlas", "12"], capsys)
    assert payload["report"]["violations"] == []
    assert payload["report"]["subsets_checked"] == 4096
    validate(registry, "atlas", payload)


def test_atlas_resource_cap(capsys):
    code, out, err = run(["atlas", "21"], capsys)
    assert code == 4 and "error:" in err


def test_parse_ast(registry, capsys):
    code, payload = run_json(["parse", "union(mult(2),level(3))"], capsys)
    assert code == 0
    assert payload["text"] == "union(mult(2),level(3))"
    ast = payload["ast"]
    assert ast["kind"] == "Union"
    assert [a["kind"] for a in ast["args"]] == ["Mult", "Level"]
    validate(registry, "parse", payload)


def test_parse_table_tree(capsys):
    code, out, _ = run(["parse", "dilate(3,up({6}))"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "text: dilate(3,up({6}))"
    assert lines[1].startswith("Dilate")
    assert lines[2].strip().startswith("Up")


# ---------------------------------------------------------------------------
# determinism and cache
# ---------------------------------------------------------------------------

def test_identical_runs_are_byte_identical(capsys):
    argv = ["check", "m-ip", "fp(primeseq(odd,6))", "--L", "3", "--json"]
    code1, out1, _ = run(argv, capsys)
    code2, out2, _ = run(argv, capsys)
    assert (code1, out1) == (code2, out2)
    assert code1 == 0


def test_json_flag_matches_format_option(capsys):
    a = run(["check", "max", "ap(1,2)", "--json"], capsys)
    b = run(["check", "max", "ap(1,2)", "--format", "json"], capsys)
    assert a == b


def test_cache_env_populates_directory(tmp_path, monkeypatch, capsys):
    cache = tmp_path / "sieves"
    monkeypatch.setenv("FELAB_CACHE", str(cache))
    monkeypatch.setattr(arith, "_sieve", None)  # force a rebuild so the cache is exercised
    argv = ["check", "a-ip", "primes", "--L", "2", "--horizon", "2000"]
    code, out, err = run(argv, capsys)
    assert code == 0
    written = list(cache.glob("spf-*.bin"))
    assert written, "expected a sieve cache file"
    # a second run must reuse the cache without error and match exactly
    code2, out2, err2 = run(argv, capsys)
    assert (code, out) == (code2, out2)


def test_cache_flag_overrides_env(tmp_path, monkeypatch, capsys):
    env_dir = tmp_path / "env"
    flag_dir = tmp_path / "flag"
    monkeypatch.setenv("FELAB_CACHE", str(env_dir))
    monkeypatch.setattr(arith, "_sieve", None)
    code, _, _ = run(["check", "a-ip", "primes", "--L", "2", "--horizon", "2000",
                      "--cache", str(flag_dir)], capsys)
    assert code == 0
    assert list(flag_dir.glob("spf-*.bin"))
    assert not env_dir.exists()
