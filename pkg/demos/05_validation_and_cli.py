# # Validation suite and command line
#
# run_validation executes every consistency check and returns JSON-ready
# records. The same report is available as `ermakov-lab validate`.

import json
import subprocess
import sys

from ermakov_lab import run_validation

report = run_validation("frequency_models")
print("passed:", report["passed"], "checks:", len(report["results"]))
for r in report["results"]:
    if r.get("kind") == "expected_discrepancy":
        print(" ", r["check"])

# The CLI writes deterministic CSV or JSON.

model = json.dumps({"variant": "constant", "params": {"omega0": 1.0}})
out = subprocess.run([sys.executable, "-m", "ermakov_lab", "simulate", "--model", model,
                      "--span", "0,1", "--dt", "0.25"], capture_output=True, text=True)
print(out.stdout)
