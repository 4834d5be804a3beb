"""CLI JSON outputs validate against the shipped schemas."""

import json
import os
import pathlib
import subprocess

import pytest

jsonschema = pytest.importorskip("jsonschema")
referencing = pytest.importorskip("referencing")

ROOT = pathlib.Path(__file__).resolve().parents[2]
SCHEMAS = ROOT / "schemas"
CLI = os.environ.get("SCOTTFLAT_CLI")

pytestmark = pytest.mark.skipif(not CLI, reason="SCOTTFLAT_CLI not set")

P3 = "size 3; rel E/2 {(0,1),(1,0),(1,2),(2,1)};"


def registry():
    resources = []
    for path in SCHEMAS.glob("*.schema.json"):
        contents = json.loads(path.read_text())
        resources.append((path.name, referencing.Resource.from_contents(contents)))
    return referencing.Registry().with_resources(resources)


def validate(doc, schema_name, definition=None):
    ref = schema_name + (f"#/$defs/{definition}" if definition else "")
    validator = jsonschema.Draft202012Validator({"$ref": ref}, registry=registry())
    validator.validate(doc)


def cli(*args, expect=0):
    result = subprocess.run([CLI, *map(str, args), "--format", "json"], capture_output=True, text=True)
    assert result.returncode == expect, result.stderr
    return json.loads(result.stdout)


@pytest.fixture
def p3(tmp_path):
    path = tmp_path / "p3.struct"
    path.write_text(P3)
    return path


def test_schemas_are_valid():
    for path in SCHEMAS.glob("*.schema.json"):
        jsonschema.Draft202012Validator.check_schema(json.loads(path.read_text()))


def test_system(p3):
    validate(cli("scott", p3, "--n-max", 2), "system.schema.json")


def test_flat_and_reports(p3, tmp_path):
    flat = subprocess.run([CLI, "flatten", p3, "--n-max", "4"], capture_output=True, text=True, check=True).stdout
    validate(json.loads(flat), "flat.schema.json")
    flat_path = tmp_path / "p3.flat"
    flat_path.write_text(flat)
    validate(cli("checkflat", flat_path), "reports.schema.json", "checkflat")
    validate(cli("hausdorff", flat_path), "reports.schema.json", "hausdorff")
    validate(cli("reconstruct", flat_path), "reports.schema.json", "reconstruct")


def test_structures():
    import scottflat as sf

    m = sf.parse_structure("size 2; rel P/1 {(0)}; fun s/1 {(0)->1,(1)->0}; const c = 0;")
    validate(json.loads(m.to_json()), "structure.schema.json")
    result = subprocess.run([CLI, "th", "--h", "2,2", "--mult", "0,0=2", "--format", "json"],
                            capture_output=True, text=True, check=True)
    validate(json.loads(result.stdout), "structure.schema.json")


def test_code_and_groups():
    validate(cli("code", "(0 1 2)", "--n-max", 2), "code.schema.json")
    validate(cli("conj", "s3", "(01)", "(12)"), "reports.schema.json", "conj")
    validate(cli("conj", "s3", "(01)", "(012)"), "reports.schema.json", "conj")


def test_fs_and_th(tmp_path):
    g, h = tmp_path / "k2.graph", tmp_path / "e2.graph"
    g.write_text("2; (0,1);")
    h.write_text("2;")
    validate(cli("fs", g, h), "reports.schema.json", "fs")
    validate(cli("th", "--h", "2,3"), "reports.schema.json", "th")


def test_corpus_manifest():
    validate(json.loads((ROOT / "corpus" / "manifest.json").read_text()), "reports.schema.json", "manifest")
