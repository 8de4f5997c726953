#!/usr/bin/env python3
# tests/check_report_schema.py

# Copyright 2026  The speechdist Authors

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
# KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
# WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
# MERCHANTABLITY OR NON-INFRINGEMENT.
# See the Apache 2 License for the specific language governing permissions and
# limitations under the License.

"""Cross-check report.json from the bundled mini corpus with a stock validator."""

import json
import pathlib
import subprocess
import sys

import jsonschema


def main():
    cli, schema_path, work = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
    config = schema_path.parent.parent / "data" / "mini" / "config.json"
    out = work / "report"
    subprocess.run([cli, "report", "--config", str(config), "--out-dir", str(out)], check=True,
                   stdout=subprocess.DEVNULL)
    schema = json.loads(schema_path.read_text())
    jsonschema.Draft7Validator.check_schema(schema)
    report = json.loads((out / "report.json").read_text())
    errors = sorted(jsonschema.Draft7Validator(schema).iter_errors(report), key=lambda e: list(e.path))
    for e in errors:
        print("/".join(map(str, e.path)) or "/", e.message)
    if errors:
        return 1
    print("report.json valid")
    return 0


if __name__ == "__main__":
    sys.exit(main())
