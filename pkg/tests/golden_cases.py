"""CLI invocations pinned by golden files. Run this module to regenerate.

Each case is (name, argv, expected exit code); commands run from the
repository root so fixture paths are relative.
"""
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = Path(__file__).resolve().parent / "golden"

S1 = "john has eaten an apple and fred has eaten peaches and a candy bar"
S2 = "cookie monster tells grover to jump over the fence"
S3 = "cookie monster touches grover after jumping over the fence"

CASES = [
    ("validate-l4", ["validate", "fixtures/l4.tag"], 0),
    ("validate-coord", ["validate", "fixtures/coord.stg"], 0),
    ("validate-bad-annotation", ["validate", "tests/data/bad-annotation.tsg"], 3),
    ("validate-bad-root", ["validate", "tests/data/bad-root.stg"], 3),
    ("validate-bad-root-structured", ["--format", "structured", "validate", "tests/data/bad-root.stg"], 3),
    ("member-coord", ["member", "fixtures/coord.stg", S1], 0),
    ("member-coord-false", ["member", "fixtures/coord.stg", "john has eaten"], 1),
    ("member-l4", ["member", "fixtures/l4.tag", "a a b b c c d d"], 0),
    ("member-anbn-false", ["member", "fixtures/anbn.tsg", "a a b"], 1),
    ("enumerate-abplus", ["enumerate", "fixtures/abplus.stg", "--max-len", "3"], 0),
    ("enumerate-abplus-trees", ["enumerate", "fixtures/abplus.stg", "--max-len", "2", "--trees"], 0),
    ("enumerate-l4-trees", ["enumerate", "fixtures/l4.tag", "--max-len", "12", "--max-steps", "3", "--trees"], 0),
    ("enumerate-anbn-structured", ["enumerate", "fixtures/anbn.tsg", "--max-len", "8", "--format", "structured"], 0),
    ("derive-coord", ["derive", "fixtures/coord.stg", S1, "--trace"], 0),
    ("derive-compl", ["derive", "fixtures/compl.tsg", S2, "--trace"], 0),
    ("derive-mod", ["derive", "fixtures/mod.tag", S3, "--trace"], 0),
    ("compile-abplus-regex", ["compile", "fixtures/abplus.stg", "--to", "regex"], 0),
    ("compile-adversarial-regex", ["compile", "fixtures/adversarial.stg", "--to", "regex"], 0),
    ("compile-abplus-automaton", ["compile", "fixtures/abplus.stg", "--to", "automaton"], 0),
    ("compile-compl-cfg", ["compile", "fixtures/compl.tsg", "--to", "cfg"], 0),
    ("regex2stg", ["regex2stg", "( a b ) * c", "--terminals", "a,b,c"], 0),
    ("compare-abplus-anbn", ["compare", "fixtures/abplus.stg", "fixtures/anbn.tsg", "--max-len", "8"], 1),
    ("compare-coord-self", ["compare", "fixtures/coord.stg", "fixtures/stages/1-coord.stg", "--max-len", "10"], 0),
    ("compare-structured", ["--format", "structured", "compare", "fixtures/abplus.stg", "fixtures/anbn.tsg",
                            "--max-len", "8"], 1),
    ("stages-1", ["stages", "--fixtures", "fixtures/stages", S1], 0),
    ("stages-2", ["stages", "--fixtures", "fixtures/stages", S2], 0),
    ("stages-3", ["stages", "--fixtures", "fixtures/stages", S3], 0),
    ("stages-3-structured", ["--format", "structured", "stages", S3], 0),
    ("stages-none", ["stages", "john touches the fence"], 1),
]


def run(argv):
    proc = subprocess.run([sys.executable, "-m", "stgkit", *argv], cwd=ROOT,
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout


def regenerate():
    GOLDEN.mkdir(exist_ok=True)
    for name, argv, code in CASES:
        got, out = run(argv)
        if got != code:
            raise SystemExit(f"{name}: exit {got}, expected {code}")
        (GOLDEN / f"{name}.txt").write_text(out, encoding="utf-8")
        print(f"wrote {name}")


if __name__ == "__main__":
    regenerate()
