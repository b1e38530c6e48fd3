import os
import pathlib
import shutil
import subprocess

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("SKG_CLI") or shutil.which("skg")
    if not path:
        pytest.skip("skg executable not available (set SKG_CLI)")

    def run(*args, check=True):
        proc = subprocess.run([path, *map(str, args)], capture_output=True, text=True)
        if check and proc.returncode != 0:
            raise AssertionError(f"skg {' '.join(map(str, args))} exited {proc.returncode}:\n{proc.stderr}")
        return proc

    return run


@pytest.fixture(scope="session")
def planted(tmp_path_factory, cli):
    out = tmp_path_factory.mktemp("planted")
    cli("synth", "--out-dir", out, "--seed", 0)
    return out / "edges.csv", out / "values.csv"


@pytest.fixture(scope="session")
def report_schema():
    import json

    return json.loads((ROOT / "schemas" / "selection_report.schema.json").read_text())
