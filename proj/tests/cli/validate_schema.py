"""Validates catalog and report JSON emitted by finsler-verify against the published schemas."""
import json
import pathlib
import subprocess
import sys

try:
    import jsonschema
except ImportError:
    print("jsonschema not installed; skipping")
    sys.exit(77)

exe, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])


def run(*args):
    out = subprocess.run([exe, *args], check=False, capture_output=True, text=True)
    if out.returncode not in (0, 1):
        sys.exit(f"{args}: exit {out.returncode}: {out.stderr}")
    return json.loads(out.stdout)


catalog_schema = json.loads((schema_dir / "catalog.schema.json").read_text())
report_schema = json.loads((schema_dir / "report.schema.json").read_text())

jsonschema.validate(run("catalog", "--format", "json"), catalog_schema)
for name in ("funk", "singular_hyperbolic", "minkowski"):
    jsonschema.validate(run("verify", "--solution", name, "--samples", "5"), report_schema)
print("schemas ok")
