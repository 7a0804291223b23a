"""Runs every subcommand with --json twice; checks exit codes, byte-identical
output and validity against the report schema."""

import json
import subprocess
import sys

import jsonschema

RUNS = [
    (["expand", "--pfaffian", "4"], 0),
    (["expand", "--t2", "2"], 0),
    (["verify", "--lemma", "1.2.2", "--trials", "100"], 0),
    (["verify", "--lemma", "1.2.2", "--dim", "4"], 1),
    (["verify", "--lemma", "1.2.3", "--trials", "20"], 0),
    (["verify", "--lemma", "1.4.1", "--seed", "5"], 0),
    (["verify", "--lemma", "1.2.2", "--trials", "5"], 1),
    (["kernel", "--weight", "4", "--dim", "3"], 0),
    (["kernel", "--weight", "2", "--valence", "sym2", "--dim", "2"], 0),
    (["gauss-bonnet"], 0),
    (["gauss-bonnet", "--dim", "6"], 0),
    (["variation", "--dim", "3", "--weight", "2"], 0),
    (["variation", "--dim", "4", "--weight", "4", "--seed", "2"], 0),
    (["spanning-set", "--weight", "4", "--valence", "sym2"], 0),
]


def main():
    exe, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path) as f:
        schema = json.load(f)
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    for args, expected in RUNS:
        outs = []
        for _ in range(2):
            p = subprocess.run([exe, *args, "--json"], capture_output=True)
            outs.append(p)
        label = " ".join(args)
        if outs[0].returncode != expected:
            print(f"FAIL {label}: exit {outs[0].returncode}, expected {expected}\n{outs[0].stderr.decode()}")
            failures += 1
            continue
        if outs[0].stdout != outs[1].stdout:
            print(f"FAIL {label}: output differs between identical runs")
            failures += 1
            continue
        doc = json.loads(outs[0].stdout)
        errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
        if errors:
            print(f"FAIL {label}: {errors[0].message} at {list(errors[0].path)}")
            failures += 1
            continue
        print(f"ok   {label} (exit {expected})")
    for args in (["frobnicate"], ["gauss-bonnet", "--dim", "3"], ["expand", "--bogus"]):
        p = subprocess.run([exe, *args], capture_output=True)
        if p.returncode != 2:
            print(f"FAIL {' '.join(args)}: exit {p.returncode}, expected 2")
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
