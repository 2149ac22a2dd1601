"""Command line front end: ``sck COMMAND PROBLEM [options]`` and ``sck --fixtures``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema

from . import __version__
from .clifford import DEFAULT_DMAX, GSCASpec, NotEliminable, build_relations, check_regularity, eliminate_y
from .freealg import NotCompatible, QuadraticPresentation, algebra_dims
from .linalg import same_span
from .points import (
    NoEmbedding,
    PencilError,
    ScanTooLarge,
    SpanFamily,
    count_point_modules,
)
from .pointscheme import classify_plane_cubic, multilinearize, point_scheme_cubic
from .polys import MPoly, proportional
from .quadform import NotMuSymmetric, factor_quadratic, matrix_of_form, mu_rank, mu_rank3, tau
from .scalars import FieldMismatch, ScalarParseError, TowerOverflow, evaluate_expression, field_from_spec, format_scalar, parse_scalar
from .skewring import MuError, MuParams, graded_dim, parse_skewpoly
from .tensor import parse_ncpoly

COMMANDS = ["build", "check-regular", "mu-rank", "factor", "count-points", "point-scheme", "hilbert", "scan"]

EXIT_OK, EXIT_NEGATIVE, EXIT_INCONCLUSIVE, EXIT_SCHEMA, EXIT_PRECONDITION = 0, 2, 3, 64, 65

PRECONDITION_ERRORS = (
    MuError,
    NotMuSymmetric,
    NotEliminable,
    NotCompatible,
    PencilError,
    ScanTooLarge,
    NoEmbedding,
    FieldMismatch,
    TowerOverflow,
    ValueError,
    ArithmeticError,
)


class ProblemError(Exception):
    """Schema violation; ``path`` points at the offending JSON node."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


def _schema(name):
    return json.loads(resources.files("skewclifford").joinpath(f"schemas/{name}.schema.json").read_text())


def validate_problem(raw):
    v = jsonschema.Draft202012Validator(_schema("problem"))
    errors = sorted(v.iter_errors(raw), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        e = errors[0]
        raise ProblemError("/" + "/".join(map(str, e.absolute_path)), e.message)


def validate_report(doc):
    jsonschema.Draft202012Validator(_schema("report")).validate(doc)


def _parse(path, fn, *args):
    try:
        return fn(*args)
    except (ScalarParseError, SyntaxError, NameError) as exc:
        raise ProblemError(path, str(exc)) from exc


@dataclass
class Problem:
    raw: dict
    name: str
    field: object
    n: int
    mu: MuParams

    @classmethod
    def from_json(cls, raw, name="<inline>"):
        validate_problem(raw)
        try:
            K = field_from_spec(raw["field"])
        except (ScalarParseError, ValueError) as exc:
            raise ProblemError("/field", str(exc)) from exc
        n = raw["n"]
        mu_raw = raw.get("mu")
        if mu_raw is None:
            mu = MuParams.commutative(n, K)
        elif isinstance(mu_raw, dict):
            vals = {}
            for key, text in mu_raw.items():
                i, j = map(int, key.split(","))
                if not 1 <= i < j <= n:
                    raise ProblemError(f"/mu/{key}", "need 1 <= i < j <= n")
                vals[(i, j)] = _parse(f"/mu/{key}", parse_scalar, text, K)
            mu = MuParams.from_upper(n, vals, K)
        else:
            if len(mu_raw) != n:
                raise ProblemError("/mu", f"expected {n} rows")
            m = [[_parse(f"/mu/{i}/{j}", parse_scalar, x, K) for j, x in enumerate(row)] for i, row in enumerate(mu_raw)]
            mu = MuParams(m, K)
        return cls(raw, raw.get("name", name), K, n, mu)

    def option(self, key, override=None, default=None):
        if override and key in override:
            return override[key]
        return self.raw.get("options", {}).get(key, default)

    def forms(self):
        return [_parse(f"/forms/{k}", parse_skewpoly, t, self.mu) for k, t in enumerate(self.raw.get("forms", []))]

    def matrices(self):
        if "matrices" in self.raw:
            out = []
            for k, M in enumerate(self.raw["matrices"]):
                out.append([[_parse(f"/matrices/{k}/{i}/{j}", parse_scalar, x, self.field) for j, x in enumerate(r)] for i, r in enumerate(M)])
            return out
        if "forms" in self.raw:
            return [matrix_of_form(q).entries for q in self.forms()]
        raise ProblemError("/", "needs matrices or forms")

    def spec(self):
        return GSCASpec(self.mu, self.matrices())

    def presentation(self):
        if "presentation" in self.raw:
            rels = [_parse(f"/presentation/{k}", parse_ncpoly, t, self.n, self.field) for k, t in enumerate(self.raw["presentation"])]
            return QuadraticPresentation(self.n, rels, self.field)
        return eliminate_y(build_relations(self.spec())).eliminated

    def family(self, opts=None):
        idx = self.option("family", opts)
        if "matrices" in self.raw:
            from .quadform import MuSymMatrix

            mats = [MuSymMatrix(M, self.mu) for M in self.matrices()]
        else:
            mats = [matrix_of_form(q) for q in self.forms()]
        if idx is not None:
            mats = [mats[k] for k in idx]
        return SpanFamily(mats)

    def form_Q(self, opts=None):
        text = self.option("Q", opts) or self.raw.get("Q")
        if text is None:
            raise ProblemError("/Q", "this command needs a form Q")
        return _parse("/Q", parse_skewpoly, text, self.mu)


def load_problem(arg: str) -> Problem:
    p = Path(arg)
    if p.exists():
        text, name = p.read_text(), p.stem
    elif arg.lstrip().startswith("{"):
        text, name = arg, "<inline>"
    else:
        raise ProblemError("/", f"no such problem file: {arg}")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError("/", f"invalid JSON: {exc}") from exc
    return Problem.from_json(raw, name)


# ---------------------------------------------------------------- commands


def _s(x):
    return format_scalar(x)


def cmd_build(pb: Problem, opts):
    pres = eliminate_y(build_relations(pb.spec()))
    res = {
        "relations": [r.fmt() for r in pres.relations],
        "eliminated": [r.fmt() for r in pres.eliminated.given],
        "y": [y.fmt() for y in pres.y_values],
        "pivots": [[pres.relations[k].i + 1, pres.relations[k].j + 1] for k in pres.pivots],
        "quadrics": [str(tau(M)) for M in pres.spec.matrices],
    }
    return res, EXIT_OK, {}


def cmd_check_regular(pb: Problem, opts):
    dmax = pb.option("dmax", opts, DEFAULT_DMAX)
    hd = pb.option("hilbert_dmax", opts, dmax)
    rep = check_regularity(pb.spec(), dmax, hd)
    code = {"Regular": EXIT_OK, "NotRegular": EXIT_NEGATIVE}.get(rep.verdict, EXIT_INCONCLUSIVE)
    return rep.to_json(), code, {"dmax": dmax, "hilbert_dmax": hd}


def cmd_mu_rank(pb: Problem, opts):
    Q = pb.form_Q(opts)
    if pb.n == 3:
        a = mu_rank3(Q, analysis=True)
        res = a.to_json()
    else:
        res = {"mu_rank": mu_rank(Q), "factorizations": len(factor_quadratic(Q))}
    res["Q"] = str(Q)
    return res, EXIT_OK, {}


def cmd_factor(pb: Problem, opts):
    Q = pb.form_Q(opts)
    facs = factor_quadratic(Q)
    res = {"Q": str(Q), "count": len(facs), "factorizations": [f.to_json() for f in facs]}
    for f, j in zip(facs, res["factorizations"]):
        L1, L2 = f.forms(pb.mu)
        j["product"] = f"({L1}) * ({L2})"
        j["square"] = f.proportional()
    if len(facs) > 2:
        res["anomaly"] = "more than two factorizations"
    return res, EXIT_OK, {}


def _scan_opt(pb, opts):
    sc = pb.option("scan", opts)
    if sc is None:
        return None
    return sc["p"], sc.get("e", 1)


def cmd_count_points(pb: Problem, opts, strategy=None):
    fam = pb.family(opts)
    strategy = strategy or pb.option("strategy", opts, "candidates")
    cands = None
    if strategy == "candidates":
        raw = pb.option("candidates", opts)
        if raw is None:
            raise ProblemError("/options/candidates", "candidates strategy needs candidate points")
        cands = [[_parse(f"/options/candidates/{i}/{j}", parse_scalar, x, pb.field) for j, x in enumerate(t)] for i, t in enumerate(raw)]
    scan = _scan_opt(pb, opts)
    if strategy == "scan" and scan is None:
        raise ProblemError("/options/scan", "scan strategy needs p (and e)")
    rep = count_point_modules(fam, pb.option("mode", opts), strategy, cands, scan)
    bounds = {"strategy": strategy}
    if strategy == "scan":
        bounds["scan"] = {"p": scan[0], "e": scan[1]}
    return rep.to_json(), EXIT_OK, bounds


def cmd_scan(pb: Problem, opts):
    return cmd_count_points(pb, opts, strategy="scan")


def cmd_point_scheme(pb: Problem, opts):
    if pb.n != 3:
        raise PencilError("point schemes are computed for three generators only")
    sys_ = multilinearize(pb.presentation())
    f = point_scheme_cubic(sys_)
    c = classify_plane_cubic(f)
    res = c.to_json()
    res["matrix"] = sys_.rows_as_strings()
    return res, EXIT_OK, {}


def cmd_hilbert(pb: Problem, opts):
    dmax = pb.option("hilbert_dmax", opts, pb.option("dmax", opts, 6))
    P = pb.presentation()
    dims = algebra_dims(P, dmax)
    expected = [graded_dim(pb.n, d) for d in range(dmax + 1)]
    return {"dims": dims, "polynomial_growth_dims": expected, "matches": dims == expected}, EXIT_OK, {"dmax": dmax}


HANDLERS = {
    "build": cmd_build,
    "check-regular": cmd_check_regular,
    "mu-rank": cmd_mu_rank,
    "factor": cmd_factor,
    "count-points": cmd_count_points,
    "point-scheme": cmd_point_scheme,
    "hilbert": cmd_hilbert,
    "scan": cmd_scan,
}


def run(command: str, pb: Problem, opts=None):
    """Report document and exit code for one command."""
    if command not in HANDLERS:
        raise ProblemError("/command", f"unknown command {command!r}")
    result, code, bounds = HANDLERS[command](pb, opts or {})
    doc = {
        "command": command,
        "version": __version__,
        "field": pb.field.spec,
        "problem": pb.name,
        "bounds": bounds,
        "result": result,
    }
    validate_report(doc)
    return doc, code


# ---------------------------------------------------------------- fixture checks


def _mpoly(text, K):
    names = dict(K.generators())
    for i, v in enumerate(MPoly.gens(3)):
        names[f"a{i + 1}"] = v
    val = evaluate_expression(text, names, K)
    return val if isinstance(val, MPoly) else MPoly.const(3, val)


def _check(pb: Problem, doc, key, expected):
    res = doc["result"]
    if key == "eliminated_span":
        P = pb.presentation()
        other = QuadraticPresentation.from_text(pb.n, expected, pb.field)
        ok = same_span(P.vectors(), other.vectors())
        return ok, res.get("eliminated")
    if key == "cubic_proportional_to":
        a = _mpoly(res["cubic"], pb.field) if res.get("cubic", "0") != "0" else MPoly(3)
        return proportional(a, _mpoly(expected, pb.field)), res.get("cubic")
    if key == "bpf_status":
        return res["bpf"]["status"] == expected, res["bpf"]["status"]
    actual = res.get(key)
    return actual == expected, actual


def run_fixture(path: Path):
    pb = load_problem(str(path))
    rows, docs = [], []
    for k, chk in enumerate(pb.raw.get("checks", [])):
        label = chk.get("label", chk["command"])
        try:
            doc, _code = run(chk["command"], pb, chk.get("options"))
            results = []
            for key, exp in sorted(chk["expect"].items()):
                ok, actual = _check(pb, doc, key, exp)
                results.append({"key": key, "expected": exp, "actual": actual, "ok": bool(ok)})
            doc["checks"] = results
            ok = all(r["ok"] for r in results)
        except PRECONDITION_ERRORS as exc:
            doc = {"command": chk["command"], "error": f"{type(exc).__name__}: {exc}"}
            ok = False
        rows.append((pb.name, label, ok))
        docs.append(doc)
    return rows, docs


def fixture_paths():
    root = resources.files("skewclifford").joinpath("fixtures")
    return sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith(".json"))


def run_fixtures(out=None) -> int:
    all_rows, all_docs = [], []
    for p in fixture_paths():
        rows, docs = run_fixture(p)
        all_rows.extend(rows)
        all_docs.extend(docs)
    w = max(len(f"{a} / {b}") for a, b, _ in all_rows)
    for a, b, ok in all_rows:
        print(f"{(a + ' / ' + b).ljust(w)}  {'PASS' if ok else 'FAIL'}")
    npass = sum(ok for *_, ok in all_rows)
    print(f"{npass}/{len(all_rows)} fixture checks passed")
    if out:
        Path(out).write_text(_dump({"version": __version__, "reports": all_docs}))
    return EXIT_OK if npass == len(all_rows) else EXIT_NEGATIVE


def _dump(doc):
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------- main


def build_parser():
    ap = argparse.ArgumentParser(prog="sck", description="Graded skew Clifford algebra toolkit")
    ap.add_argument("command", nargs="?", choices=COMMANDS)
    ap.add_argument("problem", nargs="?", help="problem JSON file or inline JSON text")
    ap.add_argument("--dmax", type=int)
    ap.add_argument("--strategy", choices=["pencil", "candidates", "scan"])
    ap.add_argument("--scan", help="p,e for finite-field scans")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--fixtures", action="store_true", help="run every shipped example and print a pass/fail table")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.fixtures:
        return run_fixtures(args.out)
    if not args.command or not args.problem:
        ap.print_usage(sys.stderr)
        return EXIT_SCHEMA
    opts = {}
    if args.dmax is not None:
        opts["dmax"] = args.dmax
        opts["hilbert_dmax"] = args.dmax
    if args.strategy:
        opts["strategy"] = args.strategy
    if args.scan:
        try:
            parts = [int(x) for x in args.scan.split(",")]
            opts["scan"] = {"p": parts[0], "e": parts[1] if len(parts) > 1 else 1}
        except (ValueError, IndexError):
            print("--scan: expected p,e", file=sys.stderr)
            return EXIT_SCHEMA
    try:
        pb = load_problem(args.problem)
        doc, code = run(args.command, pb, opts)
    except ProblemError as exc:
        print(f"schema error at {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except PRECONDITION_ERRORS as exc:
        print(f"precondition failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    text = _dump(doc)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.command == "check-regular":
        print(f"verdict: {doc['result']['verdict']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
