"""Regenerate the golden JSON reports used by the CLI schema tests."""
from pathlib import Path

from qdeform.cli import main

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"

# (preset, extra flags) at small, fixed parameters
CASES = {
    "boson": ["--dim", "6"],
    "calogero_vasiliev": ["--dim", "8", "--alphas", "0.5,-0.5"],
    "gdoa": ["--dim", "9"],
    "bosonic": ["--dim", "4", "--lambda", "4"],
    "case1": ["--dim", "4", "--lambda", "4", "--nu", "0.25"],
    "case2": ["--dim", "4", "--lambda", "4", "--nu", "0.25"],
    "fermionic_c1": ["--dim", "4", "--lambda", "4", "--nu", "1"],
    "fermionic_c2": ["--dim", "4", "--lambda", "4", "--nu", "1"],
    "deformed_clambda": ["--dim", "4", "--nu", "0.1"],
}


def argv_for(name: str, out: Path) -> list[str]:
    return ["check", "--preset", name, *CASES[name], "--out", str(out)]


if __name__ == "__main__":
    GOLDEN.mkdir(exist_ok=True)
    for name in CASES:
        path = GOLDEN / f"{name}.json"
        code = main(argv_for(name, path))
        print(f"{name}: exit {code} -> {path}")
