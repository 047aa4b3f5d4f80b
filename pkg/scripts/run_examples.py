"""Run the built-in worked examples through the job pipeline.

Prints a one-line summary per germ and writes the full JSON reports and
DOT dual graphs next to this script under ``out/``.

Usage: python3 scripts/run_examples.py [output-dir]
"""
import json
import sys
from pathlib import Path

from foliations.cli import JobSpec, run

EXAMPLES = {
    "dicritical-saddle-node": {
        "one_form": {
            "P": [[1, 2, "1"], [2, 2, "1"], [2, 1, "-1"], [0, 3, "-1"]],
            "Q": [[4, 0, "-1"], [3, 0, "1"]],
        },
        "options": {"extra_curves": {"B": "x*y*(y - x)"}},
    },
    "corner-saddle-node": {
        "one_form": {
            "P": [[0, 1, "1"]],
            "Q": [[1, 0, "-2"], [0, 2, "-1"]],
        },
        "options": {"extra_curves": {"B": "y"}},
    },
    "tangent-saddle-node": {
        "one_form": {
            "P": [[0, 1, "1"]],
            "Q": [[0, 1, "1"], [1, 0, "-1"]],
        },
        "options": {"extra_curves": {"B": "y"}},
    },
    "cusp": {
        "one_form": {
            "P": [[2, 0, "3"]],
            "Q": [[0, 1, "2"]],
        },
        "options": {
            "extra_curves": {"B": "y**2 + x**3"},
            "permutation": [2, 3, 1],
        },
    },
    "radial": {
        "one_form": {
            "P": [[0, 1, "-1"]],
            "Q": [[1, 0, "1"]],
        },
    },
}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    out_dir = Path(argv[0]) if argv else Path(__file__).parent / "out"
    out_dir.mkdir(parents=True, exist_ok=True)
    worst = 0
    for name, doc in EXAMPLES.items():
        job = JobSpec.from_dict(doc)
        report, code = run(job, dot_path=str(out_dir / ("%s.dot" % name)))
        (out_dir / ("%s.json" % name)).write_text(
            json.dumps(report, indent=2, sort_keys=True) + "\n")
        if "error" in report:
            print("%-24s exit=%d error=%s" % (
                name, code, report["error"]["type"]))
        else:
            cls = report["classification"]
            tags = [k for k in ("generalized_curve", "second_type", "cnd")
                    if cls[k]]
            print("%-24s exit=%d mu=%s bb=%s delta=%s [%s]" % (
                name, code, report["scalars"]["milnor"],
                report["scalars"]["baum_bott"],
                report["global_relations"]["polar_excess"],
                " ".join(tags) or "none"))
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    raise SystemExit(main())
