import json
import os
import pathlib
import shutil
import subprocess

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

SCHEMAS = pathlib.Path(__file__).resolve().parents[2] / "schemas"


def _registry():
    resources = []
    for path in SCHEMAS.glob("*.schema.json"):
        contents = json.loads(path.read_text())
        resources.append((contents["$id"], Resource.from_contents(contents)))
    return Registry().with_resources(resources)


@pytest.fixture(scope="session")
def validate():
    registry = _registry()

    def check(instance, name):
        schema = json.loads((SCHEMAS / f"{name}.schema.json").read_text())
        Draft202012Validator(schema, registry=registry).validate(instance)

    return check


@pytest.fixture(scope="session")
def cli():
    exe = os.environ.get("LOGPOT_CLI") or shutil.which("logpot")
    if not exe:
        pytest.skip("logpot executable not found (set LOGPOT_CLI)")

    def run(*args, expect=0):
        p = subprocess.run([exe, *args], capture_output=True, text=True, timeout=300)
        assert p.returncode == expect, p.stderr
        return p

    return run
