"""Access to the JSON schemas shipped with the package."""
from __future__ import annotations

import json
from importlib import resources

NAMES = ("model", "fsymbols", "rsymbols", "braid-generators", "criterion-report", "summary",
         "manifest", "command-output")


def load_schema(name: str) -> dict:
    if name not in NAMES:
        raise KeyError(f"unknown schema {name!r}")
    text = resources.files("extising").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)
