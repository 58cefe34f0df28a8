"""Runs every CLI subcommand and validates its report against the shipped schemas.

usage: validate_reports.py <diskinterp executable> <schemas dir>
"""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema


def main() -> int:
    exe, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])
    schemas = {}
    for path in sorted(schema_dir.glob("*.schema.json")):
        schema = json.loads(path.read_text())
        jsonschema.validators.validator_for(schema).check_schema(schema)
        schemas[path.name.split(".")[0]] = schema

    work = pathlib.Path(tempfile.mkdtemp(prefix="diskinterp_schemas_"))

    def run(args, out):
        cmd = [exe, *args, "--no-timestamp", "-o", str(work / out)]
        return subprocess.run(cmd, capture_output=True, text=True)

    (work / "problem.json").write_text(
        '{"nodes": [[0.5, 0], [0, 0.5], [-0.4, -0.3]], "values": [[0.2, 0], [0, -0.5], [0.1, 0.1]]}')
    run(["gen", "--family", "radial", "--q", "0.5", "--n", "10"], "radial.json")
    run(["gen", "--family", "bwy", "--s", "0.5", "--levels", "8", "--arc-exponent", "0"], "bwy.json")
    radial, bwy = str(work / "radial.json"), str(work / "bwy.json")

    cases = {
        "gen": ["gen", "--family", "stolz", "--levels", "5"],
        "metrics": ["metrics", "--in", radial],
        "carleson": ["carleson", "--test", "kernel", "--in", radial],
        "inner": ["inner", "--zeros", radial, "--p", "0.8", "--s", "0.5"],
        "seminorm_bloch": ["seminorm", "--function", "log", "--norm", "bloch"],
        "seminorm_bps": ["seminorm", "--function", "monomial:2", "--norm", "bps", "--p", "2", "--s", "1"],
        "interpolate": ["interpolate", "--in", str(work / "problem.json")],
        "theorem21": ["theorem21", "--in", radial, "--p", "0.8", "--s", "0.5", "--trials", "2", "--seed", "1"],
        "theorem32": ["theorem32", "--zeros", radial, "--p", "0.8", "--s", "0.5"],
        "zhu": ["zhu", "--c", "0"],
        "forelli": ["forelli", "--pairs", "10", "--seed", "2"],
        "closure": ["closure", "--zeros", radial, "--eps", "0.2"],
        "logtempered": ["logtempered", "--in", bwy],
        "witness": ["logtempered", "--in", bwy, "--witness"],
        "prop22": ["prop22", "--function", "constant", "--function", "monomial:1", "--levels", "5"],
    }
    failures = 0
    for name, args in cases.items():
        out = name + ".json"
        proc = run(args, out)
        problem = None
        if proc.returncode not in (0, 3):
            problem = f"exit {proc.returncode}: {proc.stderr.strip()}"
        else:
            doc = json.loads((work / out).read_text())
            kind = doc.get("report", doc.get("kind"))
            try:
                jsonschema.validate(doc, schemas[kind])
            except (KeyError, jsonschema.ValidationError) as e:
                problem = f"schema {kind}: {str(e).splitlines()[0]}"
            csv = work / (out + ".levels.csv")
            if kind != "sequence" and (not csv.exists() or not csv.read_text().startswith("series,level,value\n")):
                problem = "missing or malformed per-level CSV"
        print(f"{name}: {'ok' if problem is None else 'FAIL ' + problem}")
        failures += problem is not None
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
