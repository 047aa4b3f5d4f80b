"""Batch front door: job documents in, exact reports and DOT graphs out.

A job is a JSON document describing the 1-form by sparse coefficient
triples, plus options.  The report serializes every number as an exact
"num/den" string so fixture files diff cleanly; for a fixed seed the
output is byte-identical across runs.

Exit codes: 0 all checks pass, 2 a formula or oracle check failed,
3 unsupported input (algebraic blow-up center, non-rational branch,
parse failure, blow-up budget exceeded).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import sympy as sp

from . import combinatorics as cb
from . import invariants as inv
from . import oracles
from .algebra import x, y
from .errors import (
    AlgebraicCenterUnsupported,
    FoliationError,
    FormulaMismatch,
    MaxBlowupsExceeded,
    ParseError,
    ProximityMismatch,
    UnsupportedBranch,
)
from .resolution import OneForm

ALL_CHECKS = ("milnor", "van_den_essen", "cs_theorem", "bb_recursion",
              "noether", "polar")


def _q(v) -> str:
    r = sp.Rational(v)
    return "%d/%d" % (r.p, r.q)


def _qvec(vec) -> List[str]:
    return [_q(v) for v in vec]


def _qmat(M) -> List[List[str]]:
    return [[_q(M[i, j]) for j in range(M.cols)] for i in range(M.rows)]


@dataclass
class JobSpec:
    """A parsed job document."""

    p_terms: List[Tuple[int, int, sp.Rational]]
    q_terms: List[Tuple[int, int, sp.Rational]]
    max_blowups: int = 64
    seed: int = 0
    extra_curves: Dict[str, str] = field(default_factory=dict)
    permutation: Optional[List[int]] = None
    checks_enabled: List[str] = field(default_factory=lambda: list(ALL_CHECKS))

    @staticmethod
    def _parse_terms(entries, which: str):
        out = []
        if not isinstance(entries, list) or not entries:
            raise ParseError("%s must be a non-empty list of triples" % which)
        for entry in entries:
            try:
                i, j, c = entry
                num, den = str(c).split("/") if "/" in str(c) else (str(c), "1")
                out.append((int(i), int(j), sp.Rational(int(num), int(den))))
            except (TypeError, ValueError) as exc:
                raise ParseError("bad coefficient triple %r in %s: %s"
                                 % (entry, which, exc))
        return out

    @classmethod
    def from_dict(cls, doc: dict) -> "JobSpec":
        if not isinstance(doc, dict) or "one_form" not in doc:
            raise ParseError("job document must contain 'one_form'")
        one_form = doc["one_form"]
        if "P" not in one_form or "Q" not in one_form:
            raise ParseError("'one_form' needs coefficient lists 'P' and 'Q'")
        options = doc.get("options", {})
        curves = options.get("extra_curves", {})
        if isinstance(curves, list):
            curves = {"C%d" % (k + 1): s for k, s in enumerate(curves)}
        permutation = options.get("permutation")
        checks = options.get("checks_enabled", list(ALL_CHECKS))
        if checks == ["all"] or checks == "all":
            checks = list(ALL_CHECKS)
        if checks == ["none"] or checks == "none":
            checks = []
        unknown = [c for c in checks if c not in ALL_CHECKS]
        if unknown:
            raise ParseError("unknown checks %s (known: %s)"
                             % (unknown, list(ALL_CHECKS)))
        return cls(
            p_terms=cls._parse_terms(one_form["P"], "P"),
            q_terms=cls._parse_terms(one_form["Q"], "Q"),
            max_blowups=int(options.get("max_blowups", 64)),
            seed=int(options.get("seed", 0)),
            extra_curves=dict(curves),
            permutation=list(permutation) if permutation else None,
            checks_enabled=list(checks))

    def to_dict(self) -> dict:
        return {
            "one_form": {
                "P": [[i, j, _q(c)] for i, j, c in self.p_terms],
                "Q": [[i, j, _q(c)] for i, j, c in self.q_terms],
            },
            "options": {
                "max_blowups": self.max_blowups,
                "seed": self.seed,
                "extra_curves": self.extra_curves,
                "permutation": self.permutation,
                "checks_enabled": self.checks_enabled,
            },
        }

    def one_form(self) -> OneForm:
        def build(terms):
            return sp.expand(sp.Add(*[c * x**i * y**j for i, j, c in terms]))
        return OneForm.from_exprs(build(self.p_terms), build(self.q_terms))

    def curve_exprs(self) -> Dict[str, sp.Expr]:
        out = {}
        for name, text in self.extra_curves.items():
            try:
                expr = sp.expand(sp.sympify(text, locals={"x": x, "y": y}))
            except (sp.SympifyError, SyntaxError) as exc:
                raise ParseError("cannot parse curve %s = %r: %s"
                                 % (name, text, exc))
            out[name] = expr
        return out


# ---------------------------------------------------------------------------
# Report assembly
# ---------------------------------------------------------------------------

def _singularity_row(rec) -> dict:
    row = {
        "label": rec.label,
        "kind": rec.kind,
        "components": list(rec.components),
        "orbit_size": rec.orbit_size,
        "milnor": rec.milnor,
        "corner": rec.corner,
        "bb_trace": _q(rec.bb_trace),
        "cs_transverse_trace": (None if rec.cs_transverse_trace is None
                                else _q(rec.cs_transverse_trace)),
    }
    if rec.saddle_node:
        row["k"] = rec.k
        row["lambda_trace"] = _q(rec.lam_trace)
        row["tangent"] = rec.tangent
    return row


def _divisor_block(d: inv.DivisorIndices) -> dict:
    return {
        "s_vector": _qvec(d.s_vector),
        "mu_along": None if d.mu_along is None else _q(d.mu_along),
        "cs": None if d.cs is None else _q(d.cs),
        "var": None if d.var is None else _q(d.var),
        "gsv": None if d.gsv is None else _q(d.gsv),
        "polar_excess": _q(d.delta),
        "notes": list(d.notes),
    }


def _run_checks(job: JobSpec, report: inv.InvariantReport,
                curve_exprs: Dict[str, sp.Expr]) -> Tuple[dict, List[str]]:
    data = report.data
    tree = data.tree
    verdicts: Dict[str, object] = {}
    notes: List[str] = []
    enabled = job.checks_enabled
    if "milnor" in enabled:
        verdicts["milnor"] = (report.milnor == oracles.milnor_direct(
            tree.original_form, seed=job.seed))
    if "van_den_essen" in enabled:
        verdicts["van_den_essen"] = oracles.van_den_essen_check(
            tree, oracles.milnor_direct(tree.original_form, seed=job.seed))
    if "cs_theorem" in enabled:
        per_comp = oracles.cs_index_theorem_check(tree)
        verdicts["cs_theorem"] = all(per_comp.values())
    if "bb_recursion" in enabled:
        verdicts["bb_recursion"] = oracles.bb_recursion_check(tree, report.bb)
    if "noether" in enabled:
        names = sorted(curve_exprs)
        pairs = {}
        F, A = data.F, data.A
        for a in range(len(names)):
            for b in range(a + 1, len(names)):
                na, nb = names[a], names[b]
                if sp.gcd(curve_exprs[na], curve_exprs[nb]).has(x, y):
                    notes.append("noether skipped for %s,%s: common factor"
                                 % (na, nb))
                    continue
                pairs["%s|%s" % (na, nb)] = oracles.noether_check(
                    F, A, tree.group_s_vector(na), tree.group_s_vector(nb),
                    curve_exprs[na], curve_exprs[nb], seed=job.seed)
        if pairs:
            verdicts["noether"] = all(pairs.values())
            verdicts["noether_pairs"] = pairs
        else:
            notes.append("noether skipped: needs two extra curves")
    if "polar" in enabled:
        if "B" in curve_exprs:
            ok = True
            for name, expr in curve_exprs.items():
                direct = oracles.polar_oracle(
                    tree.original_form, expr, curve_exprs["B"], seed=job.seed)
                closed = inv.polar_excess(data, inv.user_divisor(tree, name))
                ok = ok and (sp.Rational(direct) == sp.Rational(closed))
            verdicts["polar"] = ok
        else:
            notes.append("polar check skipped: supply the balanced divisor "
                         "equation as an extra curve named B")
    return verdicts, notes


def _permutation_block(job: JobSpec, report: inv.InvariantReport) -> dict:
    data = report.data
    vectors = {
        "S_B": data.vectors.S_B,
        "T": data.vectors.T,
        "C": data.vectors.C,
        "S_F": data.vectors.S_F,
    }
    moved = cb.permute(data.F, data.A, job.permutation, vectors)
    # scalar invariants recomputed from transported data
    s_f = sp.Matrix([[sp.Rational(e)] for e in moved.vectors["S_F"]])
    t_f = sp.Matrix([[sp.Rational(e)] for e in moved.vectors["T"]])
    ones = sp.ones(data.n, 1)
    weight = -moved.A.inv() * s_f - (sp.eye(data.n) + moved.F.inv()) * ones
    mu_again = (weight.T * s_f)[0] + 1 + cb.transverse_excess(
        data.tree, data.balanced)
    tau = moved.F.inv().T * t_f
    return {
        "sigma": list(moved.sigma),
        "F": _qmat(moved.F),
        "A": _qmat(moved.A),
        "vectors": {k: _qvec(v) for k, v in moved.vectors.items()},
        "milnor_invariant": bool(mu_again == report.milnor),
        "tau_norm_invariant": bool(
            (tau.T * tau)[0] == report.relations.tau_norm_sq),
    }


def dual_graph_dot(tree) -> str:
    """DOT rendering of the dual graph of the final model."""
    lines = ["graph dual {", "  node [fontname=monospace];"]
    for comp in tree.components:
        shape = "ellipse" if comp.invariant_flag else "box"
        lines.append(
            '  E%d [shape=%s label="E%d\\nself=%d l=%d %s"];'
            % (comp.index, shape, comp.index, comp.self_intersection,
               comp.recorded_discrepancy,
               "inv" if comp.invariant_flag else "dic"))
    for a, b in sorted(tuple(sorted(e)) for e in tree.edges):
        lines.append("  E%d -- E%d;" % (a, b))
    for k, rec in enumerate(tree.singularities):
        if rec.corner:
            continue
        lines.append('  s%d [shape=point label=""];' % k)
        lines.append('  s%d -- E%d [label="%s"];'
                     % (k, rec.components[0], rec.kind))
    lines.append("}")
    return "\n".join(lines) + "\n"


def run(job: JobSpec, dot_path: Optional[str] = None) -> Tuple[dict, int]:
    """Execute a job; returns (report document, exit code)."""
    try:
        form = job.one_form()
        curve_exprs = job.curve_exprs()
        report = inv.analyze(form, curves=curve_exprs or None,
                             max_blowups=job.max_blowups, seed=job.seed)
        verdicts, check_notes = _run_checks(job, report, curve_exprs)
    except (AlgebraicCenterUnsupported, UnsupportedBranch,
            MaxBlowupsExceeded, ParseError) as exc:
        return ({"error": {"type": type(exc).__name__, "message": str(exc)},
                 "job": job.to_dict()}, 3)
    except (FormulaMismatch, ProximityMismatch) as exc:
        return ({"error": {"type": type(exc).__name__, "message": str(exc)},
                 "job": job.to_dict()}, 2)
    except FoliationError as exc:
        return ({"error": {"type": type(exc).__name__, "message": str(exc)},
                 "job": job.to_dict()}, 3)

    data = report.data
    tree = data.tree
    if dot_path:
        Path(dot_path).write_text(dual_graph_dot(tree))
    doc = {
        "job": job.to_dict(),
        "tree": {
            "components": [
                {"index": c.index, "invariant": c.invariant_flag,
                 "self_intersection": c.self_intersection,
                 "recorded_discrepancy": c.recorded_discrepancy,
                 "center_hosts": list(c.center_hosts), "label": c.label}
                for c in tree.components],
            "iota": _qvec(tree.iota()),
            "delta": _qvec(tree.delta()),
            "singularities": [_singularity_row(r) for r in tree.singularities],
            "notes": list(tree.notes),
        },
        "matrices": {"F": _qmat(data.F), "A": _qmat(data.A)},
        "vectors": {
            "rho": _qvec(cb.weights_vector(data.F)),
            "S_B": _qvec(data.vectors.S_B),
            "T": _qvec(data.vectors.T),
            "C": _qvec(data.vectors.C),
            "S_F": _qvec(data.vectors.S_F),
            "tau": _qvec(data.tau),
            "ell": _qvec(report.ell),
            "nu": _qvec(report.nu),
        },
        "scalars": {"milnor": _q(report.milnor), "baum_bott": _q(report.bb)},
        "classification": {
            "generalized_curve": report.classification.generalized_curve,
            "second_type": report.classification.second_type,
            "cnd": report.classification.cnd,
        },
        "global_relations": {
            "var_minus_cs": _q(report.relations.var_minus_cs),
            "bb_minus_var": _q(report.relations.bb_minus_var),
            "bb_minus_cs": _q(report.relations.bb_minus_cs),
            "polar_excess": _q(report.relations.delta),
            "tau_norm_sq": _q(report.relations.tau_norm_sq),
        },
        "mil_gaps": {"balanced": _q(report.mil_gaps[0]),
                     "corner_weighted": _q(report.mil_gaps[1])},
        "divisors": {name: _divisor_block(d)
                     for name, d in report.divisors.items()},
        "checks": verdicts,
        "notes": check_notes,
        "seed": job.seed,
    }
    if job.permutation:
        doc["permutation"] = _permutation_block(job, report)
    failed = [k for k, v in verdicts.items()
              if isinstance(v, bool) and not v]
    return doc, (2 if failed else 0)


# ---------------------------------------------------------------------------
# Command line
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="foliations",
        description="Reduce a plane foliation germ and evaluate its "
                    "resolution invariants exactly.")
    parser.add_argument("job", nargs="?", help="path to a JSON job document")
    parser.add_argument("--max-blowups", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--check", default=None,
                        help="all, none, or comma-separated check names")
    parser.add_argument("--curve", action="append", default=[],
                        help="extra curve polynomial (repeatable)")
    parser.add_argument("--permute", default=None,
                        help="component reordering, e.g. 2,3,1")
    parser.add_argument("--dot", default=None,
                        help="write the dual graph to this DOT file")
    parser.add_argument("--batch", default=None,
                        help="process every *.json job in this directory")
    return parser


def _apply_flags(job: JobSpec, args) -> JobSpec:
    if args.max_blowups is not None:
        job.max_blowups = args.max_blowups
    if args.seed is not None:
        job.seed = args.seed
    if args.check is not None:
        if args.check == "all":
            job.checks_enabled = list(ALL_CHECKS)
        elif args.check == "none":
            job.checks_enabled = []
        else:
            names = [c.strip() for c in args.check.split(",") if c.strip()]
            unknown = [c for c in names if c not in ALL_CHECKS]
            if unknown:
                raise ParseError("unknown checks %s" % unknown)
            job.checks_enabled = names
    for poly in args.curve:
        job.extra_curves["C%d" % (len(job.extra_curves) + 1)] = poly
    if args.permute is not None:
        job.permutation = [int(s) for s in args.permute.split(",")]
    return job


def _run_one(path: Path, args, out_path: Optional[Path]) -> int:
    try:
        doc = json.loads(path.read_text())
        job = _apply_flags(JobSpec.from_dict(doc), args)
    except (json.JSONDecodeError, ParseError, OSError) as exc:
        payload = {"error": {"type": "ParseError", "message": str(exc)}}
        text = json.dumps(payload, indent=2) + "\n"
        code = 3
    else:
        report, code = run(job, dot_path=args.dot)
        text = json.dumps(report, indent=2) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        out_path.write_text(text)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.batch:
        directory = Path(args.batch)
        worst = 0
        for path in sorted(directory.glob("*.json")):
            if path.name.endswith(".report.json"):
                continue
            out = path.with_name(path.stem + ".report.json")
            worst = max(worst, _run_one(path, args, out))
        return worst
    if not args.job:
        _build_parser().print_usage(sys.stderr)
        return 3
    return _run_one(Path(args.job), args, None)


if __name__ == "__main__":
    sys.exit(main())
