import json

import jsonschema
import pytest

from extising.cli import main
from extising.reproduce import export_model_bundle, run_reproduce_all
from extising.schema_io import NAMES, load_schema


def validate(obj, name):
    jsonschema.Draft202012Validator(load_schema(name)).validate(obj)


def test_schemas_are_valid():
    for name in NAMES:
        jsonschema.Draft202012Validator.check_schema(load_schema(name))


def test_unknown_schema():
    with pytest.raises(KeyError):
        load_schema("nope")


def test_bundle_files_validate(tmp_path):
    export_model_bundle(2, 6, 0, tmp_path)
    for fname, schema in [("model.json", "model"), ("f_symbols.json", "fsymbols"),
                          ("r_symbols.json", "rsymbols"), ("braid_generators.json", "braid-generators")]:
        validate(json.loads((tmp_path / fname).read_text()), schema)


def test_reproduce_outputs_validate(tmp_path):
    run_reproduce_all(tmp_path, criteria=[1, 2, 6, 7])
    for p in tmp_path.glob("criterion_*.json"):
        validate(json.loads(p.read_text()), "criterion-report")
    validate(json.loads((tmp_path / "summary.json").read_text()), "summary")
    validate(json.loads((tmp_path / "manifest.json").read_text()), "manifest")


@pytest.mark.parametrize("argv", [
    ["f", "enumerate", "--k", "2"],
    ["f", "census", "--order", "4"],
    ["r", "sum-squares", "--k", "3"],
    ["twists", "classify", "--layers", "1"],
    ["model", "build", "--k", "2"],
])
def test_cli_outputs_validate(tmp_path, argv, capsys):
    assert main(["--out", str(tmp_path)] + argv) == 0
    out = json.loads(capsys.readouterr().out)
    validate(out, "command-output")
    for p in tmp_path.glob("*.manifest.json"):
        validate(json.loads(p.read_text()), "manifest")
    if argv[0] == "model":
        validate(out["result"], "model")
