"""Generates one fixture per experiment kind and validates its config against the schema."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

KINDS = ["FrameAnalysis", "IdentitySuite", "PerturbationStudy", "FiberizationDemo"]


def main(cli: str, schema_path: str) -> int:
    schema = json.loads(pathlib.Path(schema_path).read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        for kind in KINDS:
            out = pathlib.Path(tmp) / kind
            subprocess.run([cli, "generate", kind, "--seed", "5", "--dim", "4", "--out", str(out)], check=True)
            config = json.loads((out / "config.json").read_text())
            errors = sorted(validator.iter_errors(config), key=lambda e: list(e.path))
            for e in errors:
                print(f"{kind}: {'/'.join(map(str, e.path)) or '<root>'}: {e.message}")
            failures += len(errors)
        bad = {"kind": "FrameAnalysis", "family": {"inline": {}}, "bogus": 1}
        if validator.is_valid(bad):
            print("schema accepted an unknown top-level key")
            failures += 1
    print("schema check:", "ok" if failures == 0 else f"{failures} problem(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1], sys.argv[2]))
