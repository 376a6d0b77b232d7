"""Regenerate the CLI golden files under tests/golden.

Run only after an intended change to the output format; the CLI tests
compare fresh runs against these files byte for byte.
"""

from pathlib import Path

from hermix.cli import main

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"

# (output file, argv); "{data}" is replaced by the committed sample path
RUNS = [
    ("sample_n5000_seed0.csv", [
        "gen", "--families", "gaussian:mu=0,sigma2=1;exponential:theta=1",
        "--weights", "0.3,0.7", "--n", "5000", "--seed", "0",
    ]),
    ("fit.json", [
        "fit", "--input", "{data}", "--families", "gaussian:mu=0,sigma2=1;exponential:theta=1",
        "--moments", "2", "--seed", "0",
    ]),
    ("eda.json", [
        "eda", "--input", "{data}",
        "--pool", "gaussian:mu=0,sigma2=1;exponential:theta=1;uniform:a=0,b=1",
        "--subset-size", "2", "--moments", "2", "--seed", "0",
    ]),
    ("roots.json", ["roots", "--poly", "x - y", "--poly", "x^2 + y^2 - 1", "--seed", "0"]),
]


def main_() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    data = str(GOLDEN / RUNS[0][0])
    for name, argv in RUNS:
        argv = [a.replace("{data}", data) for a in argv] + ["--output", str(GOLDEN / name)]
        code = main(argv)
        print(f"{name}: exit {code}")


if __name__ == "__main__":
    main_()
