import json
import pathlib

import jsonschema
import pytest

from finsift_bridge import ASPECT_LABELS, BridgeConfig, serve_background

REPO = pathlib.Path(__file__).resolve().parents[2]
SCHEMAS = REPO / "schemas"

SCRIPTED = {
    "aspect": list(ASPECT_LABELS),
    "relevance": ["Relevant", "Irrelevant"],
}


def conforms(schema_file: str, def_name: str, instance) -> bool:
    schema = json.loads((SCHEMAS / schema_file).read_text(encoding="utf-8"))
    validator = jsonschema.Draft7Validator({**schema, "$ref": f"#/$defs/{def_name}"})
    return validator.is_valid(instance)


@pytest.fixture(scope="module")
def bridge_url():
    config = BridgeConfig(model="hash-16", answers=SCRIPTED)
    with serve_background(config) as url:
        yield url
