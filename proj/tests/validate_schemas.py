#!/usr/bin/env python3
"""Validates the --json output of every ramrec subcommand against schemas/."""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema


def main() -> int:
    cli, corpus, schemas = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
    with tempfile.TemporaryDirectory() as tmp:
        vtg = Path(tmp) / "leaf.json"
        vtg.write_text(subprocess.run([cli, "serialize", str(corpus / "ltree.s1")], check=True,
                                      capture_output=True, text=True).stdout)
        cases = [
            ("run", ["run", str(corpus / "times.s1"), "--meter"], 0),
            ("run", ["run", str(corpus / "height_cs.s1"), "--semantics", "td"], 0),
            ("check", ["check", str(corpus / "sum_lst.s1")], 0),
            ("compress", ["compress", str(corpus / "height_grow.s1")], 0),
            ("bounds", ["bounds", str(corpus / "times_prime.s1")], 0),
            ("ni-check", ["ni-check", str(corpus / "plus_prime.s1"), "--trials", "20"], 0),
            ("cek", ["cek", str(corpus / "plus.s1"), "--trace"], 0),
            ("serialize", ["serialize", str(corpus / "ltree.s1")], 0),
            ("deserialize", ["deserialize", "--type", "ltree", "--program", str(corpus / "ltree.s1"), "--input", str(vtg)], 0),
            ("corpus", ["corpus", str(corpus)], 0),
            ("error", ["check", str(corpus / "negative" / "fold_safe.s1")], 1),
            ("error", ["run", str(corpus / "missing.s1")], 1),
        ]
        failures = 0
        for schema_name, args, want in cases:
            schema = json.loads((schemas / f"{schema_name}.schema.json").read_text())
            proc = subprocess.run([cli, "--json", *args], capture_output=True, text=True)
            label = " ".join(args)
            try:
                if proc.returncode != want:
                    raise AssertionError(f"exit {proc.returncode}, expected {want}: {proc.stderr.strip()}")
                jsonschema.validate(json.loads(proc.stdout), schema)
            except (AssertionError, ValueError, jsonschema.ValidationError) as e:
                failures += 1
                print(f"FAIL {label}: {e}")
                continue
            print(f"ok   {label}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
