"""Run the acceptance suite and print one PASS/FAIL line per criterion.

    python scripts/run_acceptance.py
"""

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def main():
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", str(ROOT / "tests" / "test_acceptance.py")],
        cwd=ROOT,
        capture_output=True,
        text=True,
    )
    lines = [l for l in proc.stdout.splitlines() if l.startswith("criterion")]
    for l in lines:
        print(l)
    failed = sum("FAIL" in l for l in lines)
    print(f"{len(lines) - failed}/{len(lines)} criteria passed")
    sys.exit(proc.returncode)


if __name__ == "__main__":
    main()
