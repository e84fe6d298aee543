import json
import subprocess
import sys
import tempfile

import jsonschema

heislab, schema_path = sys.argv[1], sys.argv[2]
schema = json.load(open(schema_path))
failed = 0


def run(*args):
    return subprocess.run([heislab, *args], capture_output=True, text=True)


def expect(name, cond):
    global failed
    print(("ok   " if cond else "FAIL ") + name)
    failed += not cond


r = run("report", "--suite", "sandbox", "--suite", "rumin")
expect("report exit 0", r.returncode == 0)
report = json.loads(r.stdout)
jsonschema.validate(report, schema)
expect("schema", True)
expect("byte identical rerun", run("report", "--suite", "sandbox", "--suite", "rumin").stdout == r.stdout)

bad = run("rumin", "--debug-corrupt", "laplacian_weight")
expect("corrupted exit 1", bad.returncode == 1)
jsonschema.validate(json.loads(bad.stdout), schema)
expect("names the identity", "rumin/rumin.laplacian_projection" in json.loads(bad.stdout)["failures"])

expect("bad n exit 2", run("thresholds", "--n", "0").returncode == 2)
expect("bad convention exit 2", run("sandbox", "--convention", "nope").returncode == 2)
expect("unknown flag exit 2", run("sandbox", "--frobnicate").returncode == 2)
with tempfile.NamedTemporaryFile("w", suffix=".cfg", delete=False) as f:
    f.write("n = 1\nlambda_min = 2\nlambda_max = 1\n")
e = run("thresholds", "--config", f.name)
expect("empty grid exit 2", e.returncode == 2 and "lambda_min" in e.stderr)

dump = run("report", "--dump-config").stdout
with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as f:
    f.write(dump)
expect("config round trip", run("report", "--config", f.name, "--dump-config").stdout == dump)
sys.exit(1 if failed else 0)
