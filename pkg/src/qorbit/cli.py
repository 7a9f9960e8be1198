"""Command-line front end.

Subcommands::

    qorbit verify --suite tridiag --n-max 6 --m-max 12 --format json
    qorbit coeffs --op EK --m 0 --n 1
    qorbit psi --m 1 --n 1
    qorbit norm --m 0 --n 2 --method quadrature --tol 1e-8

Exit codes: 0 when every check passes, 1 on any verification failure,
2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from importlib import resources

from qorbit import __version__
from qorbit import classical as cl
from qorbit import qdiscrete as qd
from qorbit import qop
from qorbit.exactfield import GaussianRational, format_scalar_q
from qorbit.exactfield.zfunc import format_factored
from qorbit.properties import kernel_properties
from qorbit.report import Case, Report

SUITES = ("field", "relations", "leibniz", "star", "eigen", "tridiag", "limit",
          "classical", "group", "norm")
OP_NAMES = {"EK": "EKinv", "FK": "FKinv", "K2": "Kinv2"}

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# (identity, suite, check prefix) triples; "all" reports how many cases hit each.
COVERAGE = (
    ("Hopf algebra defining relations", "relations", ""),
    ("coproduct Leibniz rule and counit", "leibniz", ""),
    ("star structure on the relations", "star", ""),
    ("eigenvalue identity for q^2n EK - FK", "eigen", "q^2nEK-FK"),
    ("three-term action of EK^-1", "tridiag", "EKinv"),
    ("three-term action of FK^-1", "tridiag", "FKinv"),
    ("three-term action of K^-2", "tridiag", "Kinv2"),
    ("q -> 1 limit of the three-term coefficients", "limit", "limit:"),
    ("q -> 1 limit of psi_m", "limit", "psi"),
    ("classical operators on psi_m", "classical", "rho("),
    ("sl2 brackets of the classical operators", "classical", "["),
    ("integrated group action is a homomorphism", "group", "rho(g1)"),
    ("coadjoint orbit chart equivariance", "group", "chart"),
    ("closed-form norms", "norm", "norm"),
    ("orthogonality of psi_m", "norm", "inner"),
)


def _threads() -> int:
    """Worker processes for grid suites: ``QORBIT_THREADS`` if set, else the CPU count."""
    env = os.environ.get("QORBIT_THREADS", "").strip()
    if env.isdigit() and int(env) > 0:
        return int(env)
    return os.cpu_count() or 1


def _fmt_tol(tol: float) -> str:
    s = f"{tol:g}"
    return s.replace("e-0", "e-").replace("e+0", "e+")


# -- per-cell workers (module level so they pickle) -------------------------

def _cell_eigen(m: int, n: int, cfg: dict) -> Report:
    return qd.compact_eigencheck(qd.QSeriesParams(n, m))


def _cell_tridiag(m: int, n: int, cfg: dict) -> Report:
    return qd.verify_tridiagonal(qd.QSeriesParams(n, m), amended=cfg["amended"])


def _cell_limit(m: int, n: int, cfg: dict) -> Report:
    p = qd.QSeriesParams(n, m)
    report = Report("limit")
    for which in qd.OPERATORS:
        triple, ok = qd.classical_limit_coeffs(which, p, amended=cfg["amended"])
        detail = "" if ok else f"limit={triple} want={qd.classical_triple(which, p)}"
        report.add(f"limit:{which}", ok, detail, m=m, n=n)
    diff = qd.classical_psi_limit(p) - cl.classical_psi(m, n)
    report.add("psi(u=1)=classical psi", diff.is_zero(), "" if not diff else str(diff), m=m, n=n)
    return report


def _cell_classical(m: int, n: int, cfg: dict) -> Report:
    return cl.verify_classical(m, n)


def _cell_norm(m: int, n: int, cfg: dict) -> Report:
    tol = cfg["tol"]
    bound = max(1e-6, 10 * tol)
    report = Report("norm")
    try:
        closed = float(cl.norm_closed(m, n))
        res = cl.norm_quadrature(m, n, tol)
        rel = abs(res.value.real - closed) / closed
        report.add("norm", rel <= bound, "" if rel <= bound else f"relative error {rel:.3e}",
                   m=m, n=n)
        for mp in range(m + 1, cfg["m_max"] + 1):
            inner = cl.inner_quadrature(m, mp, n, tol)
            scale = (closed * float(cl.norm_closed(mp, n))) ** 0.5
            rel = abs(inner.value) / scale
            report.add(f"inner(m'={mp})", rel <= bound,
                       "" if rel <= bound else f"relative size {rel:.3e}", m=m, n=n)
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        report.add("norm", False, f"{type(exc).__name__}: {exc}", m=m, n=n)
    return report


_CELL = {
    "eigen": _cell_eigen,
    "tridiag": _cell_tridiag,
    "limit": _cell_limit,
    "classical": _cell_classical,
    "norm": _cell_norm,
}


def _run_cell(args) -> list[Case]:
    suite, m, n, cfg = args
    try:
        return _CELL[suite](m, n, cfg).cases
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        return [Case(suite, False, f"{type(exc).__name__}: {exc}", {"m": m, "n": n})]


def _grid(suite: str, cfg: dict) -> list[tuple[int, int]]:
    n_lo = max(cfg["n_min"], 2) if suite == "norm" else cfg["n_min"]
    return [(n, m) for n in range(n_lo, cfg["n_max"] + 1) for m in range(cfg["m_max"] + 1)]


def _run_grid(suite: str, cfg: dict) -> Report:
    tasks = [(suite, m, n, cfg) for n, m in _grid(suite, cfg)]
    threads = min(cfg["threads"], len(tasks))
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_cell, tasks, chunksize=max(1, len(tasks) // (4 * threads))))
    else:
        results = [_run_cell(t) for t in tasks]
    report = Report(suite)
    for cases in results:  # pool.map preserves task order: (n, m) lexicographic
        report.cases.extend(cases)
    return report


# -- whole-suite runners ------------------------------------------------------------

def _suite_field(cfg: dict) -> Report:
    return kernel_properties(cfg["seed"], cfg["samples"])


def _sigma_suite(name: str, check, cfg: dict) -> Report:
    report = Report(name)
    for n in range(0, cfg["n_max"] + 1):
        sub = check(-n)
        for c in sub.cases:
            report.cases.append(Case(c.check, c.passed, c.residual, {"n": n}))
    return report


def _suite_relations(cfg: dict) -> Report:
    return _sigma_suite("relations", qop.verify_relations, cfg)


def _suite_star(cfg: dict) -> Report:
    return _sigma_suite("star", qop.star_relation_check, cfg)


def _suite_leibniz(cfg: dict) -> Report:
    report = Report("leibniz")
    report.extend(qop.leibniz_check(cfg["jmax"]), n=0)
    return report


def _suite_group(cfg: dict) -> Report:
    rng = random.Random(cfg["seed"])
    pairs = [(cl.random_sl2(rng), cl.random_sl2(rng)) for _ in range(cfg["pairs"])]
    report = Report("group")
    for n in range(cfg["n_min"], cfg["n_max"] + 1):
        for idx, (g1, g2) in enumerate(pairs):
            report.extend(cl.homomorphism_check(g1, g2, n), pair=idx)
    point = cl.OrbitPoint.from_parameters(2, 1, 3)
    for idx, (g1, _) in enumerate(pairs):
        report.extend(cl.chart_equivariance(g1, point), pair=idx)
    return report


_SUITE_RUNNERS = {
    "field": _suite_field,
    "relations": _suite_relations,
    "leibniz": _suite_leibniz,
    "star": _suite_star,
    "group": _suite_group,
}


def run_suite(suite: str, cfg: dict) -> Report:
    if suite in _CELL:
        return _run_grid(suite, cfg)
    return _SUITE_RUNNERS[suite](cfg)


def coverage_map(reports: dict[str, Report]) -> dict:
    out = {}
    for label, suite, prefix in COVERAGE:
        rep = reports.get(suite)
        hits = [c for c in rep.cases if c.check.startswith(prefix)] if rep is not None else []
        out[label] = {"suite": suite, "cases": len(hits),
                      "passed": sum(c.passed for c in hits)}
    return out


def run(cfg: dict) -> dict:
    """Execute a verify configuration and return the report document."""
    suites = SUITES if cfg["suite"] == "all" else (cfg["suite"],)
    reports: dict[str, Report] = {}
    per_suite = {}
    cases = []
    start = time.perf_counter()
    for s in suites:
        t0 = time.perf_counter()
        rep = run_suite(s, cfg)
        reports[s] = rep
        per_suite[s] = {"passed": rep.passed, "failed": rep.failed,
                        "seconds": round(time.perf_counter() - t0, 3) if cfg["timing"] else None}
        for c in rep.cases:
            d = c.to_dict()
            d["suite"] = s
            cases.append(d)
    seconds = round(time.perf_counter() - start, 3)
    params = {k: cfg[k] for k in ("n_min", "n_max", "m_max", "tol", "seed", "amended",
                                  "jmax", "pairs", "samples")}
    doc = {
        "suite": cfg["suite"],
        "params": params,
        "cases": cases,
        "summary": {
            "passed": sum(r.passed for r in reports.values()),
            "failed": sum(r.failed for r in reports.values()),
            "seconds": seconds if cfg["timing"] else None,
        },
        "suites": per_suite,
    }
    if cfg["suite"] == "all":
        doc["coverage"] = coverage_map(reports)
    doc["_wall"] = seconds
    return doc


# -- rendering ------------------------------------------------------------------

def _case_line(c: dict) -> str:
    where = " ".join(f"{k}={c[k]}" for k in ("m", "n") if c.get(k) is not None)
    extra = " ".join(f"{k}={v}" for k, v in c.get("detail", {}).items())
    head = " ".join(x for x in (c["suite"], c["check"], where, extra) if x)
    return f"  FAIL {head}: {c.get('residual', '')}".rstrip(": ")


def render_report(doc: dict, fmt: str) -> str:
    wall = doc.pop("_wall", None)
    if fmt == "json":
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if fmt == "latex":
        lines = [r"\begin{tabular}{lrr}", r"\hline", r"suite & passed & failed \\", r"\hline"]
        for s, v in doc["suites"].items():
            lines.append(f"{s} & {v['passed']} & {v['failed']} \\\\")
        lines += [r"\hline",
                  f"total & {doc['summary']['passed']} & {doc['summary']['failed']} \\\\",
                  r"\hline", r"\end{tabular}"]
        return "\n".join(lines) + "\n"
    lines = []
    for s, v in doc["suites"].items():
        secs = f" ({v['seconds']:.2f} s)" if v["seconds"] is not None else ""
        lines.append(f"{s}: {v['passed']} passed, {v['failed']} failed{secs}")
        lines += [_case_line(c) for c in doc["cases"] if c["suite"] == s and c["status"] == "fail"]
    if "coverage" in doc:
        lines.append("coverage:")
        for label, v in doc["coverage"].items():
            lines.append(f"  {label}: {v['passed']}/{v['cases']} ({v['suite']})")
    summ = doc["summary"]
    tail = f" in {wall:.2f} s" if wall is not None and summ["seconds"] is not None else ""
    verdict = "OK" if summ["failed"] == 0 else "FAILED"
    lines.append(f"{verdict}: {summ['passed']} passed, {summ['failed']} failed{tail}")
    return "\n".join(lines) + "\n"


def format_gaussian_compact(x: GaussianRational) -> str:
    """``i/2``, ``3i/2``, ``-1+i`` style, for classical coefficient triples."""
    def part(r, unit: str) -> str:
        num, den = int(r.numerator), int(r.denominator)
        if unit:
            body = unit if abs(num) == 1 else f"{abs(num)}{unit}"
        else:
            body = str(abs(num))
        body = body if den == 1 else f"{body}/{den}"
        return ("-" if num < 0 else "") + body

    re, im = x.re, x.im
    if not im:
        return part(re, "")
    if not re:
        return part(im, "i")
    ims = part(im, "i")
    return part(re, "") + (ims if ims.startswith("-") else "+" + ims)


def _latex_scalar(x) -> str:
    return format_scalar_q(x, latex=True)


def _coeffs_doc(args) -> tuple[dict, bool]:
    which = OP_NAMES[args.op]
    p = qd.QSeriesParams(args.n, args.m)
    derived = qd.decompose_tridiagonal(qd.tridiagonal_operator(which, args.n), p)
    printed = qd.expected_coeffs(which, p)
    diffs = qd.compare_coeffs(derived, printed)
    return {"derived": derived, "printed": printed, "diffs": diffs, "which": which, "p": p}, not diffs


def cmd_coeffs(args) -> tuple[str, int]:
    info, ok = _coeffs_doc(args)
    derived, printed = info["derived"], info["printed"]
    names = ("alpha", "beta", "gamma")
    if args.q is not None:
        lim = tuple(c.classical_limit() for c in derived)
        lim_printed = tuple(c.classical_limit() for c in printed)
        text = "(" + ", ".join(format_gaussian_compact(c) for c in lim) + ")"
        if args.format == "json":
            out = {"op": args.op, "m": args.m, "n": args.n, "q": 1,
                   "derived": dict(zip(names, map(str, lim))),
                   "transcribed": dict(zip(names, map(str, lim_printed))),
                   "match": lim == lim_printed}
            return json.dumps(out, indent=2, ensure_ascii=False) + "\n", EXIT_OK
        if lim != lim_printed:
            text += "\ntranscription differs: (" + ", ".join(
                format_gaussian_compact(c) for c in lim_printed) + ")"
        return text + "\n", EXIT_OK if lim == lim_printed else EXIT_FAIL
    if args.format == "json":
        out = {"op": args.op, "m": args.m, "n": args.n,
               "derived": dict(zip(names, map(str, derived))),
               "transcribed": dict(zip(names, map(str, printed))),
               "match": ok}
        if not ok:
            out["differences"] = info["diffs"]
        return json.dumps(out, indent=2, ensure_ascii=False) + "\n", EXIT_OK if ok else EXIT_FAIL
    if args.format == "latex":
        body = r",\quad ".join(f"\\{nm} = {_latex_scalar(c)}" for nm, c in zip(names, derived))
        text = f"\\[ {body} \\]\n"
        if not ok:
            bad = r",\quad ".join(f"\\{nm} = {_latex_scalar(c)}"
                                  for nm, c, d in zip(names, printed, derived) if c != d)
            text += f"% transcription differs: \\[ {bad} \\]\n"
        return text, EXIT_OK if ok else EXIT_FAIL
    text = "  ".join(f"{nm}={c}" for nm, c in zip(names, derived)) + "\n"
    if not ok:
        text += "transcription differs: " + "; ".join(info["diffs"]) + "\n"
    return text, EXIT_OK if ok else EXIT_FAIL


def cmd_psi(args) -> tuple[str, int]:
    f = qd.psi(qd.QSeriesParams(args.n, args.m))
    factored = format_factored(f, q_notation=True)
    expanded = str(f.expand())
    if args.format == "json":
        out = {"m": args.m, "n": args.n, "factored": factored, "expanded": expanded}
        return json.dumps(out, indent=2, ensure_ascii=False) + "\n", EXIT_OK
    if args.format == "latex":
        return f"\\psi_{{{args.m}}}(z) = {factored}\n", EXIT_OK
    return f"{factored}\nexpanded: {expanded}\n", EXIT_OK


def cmd_norm(args) -> tuple[str, int]:
    if args.method == "closed":
        v = cl.norm_closed(args.m, args.n)
        if args.format == "json":
            out = {"m": args.m, "n": args.n, "method": "closed", **v.to_json()}
            return json.dumps(out, indent=2) + "\n", EXIT_OK
        if args.format == "latex":
            c = v.coeff
            frac = r"\pi" if c == 1 else f"\\frac{{{c.numerator}\\pi}}{{{c.denominator}}}"
            return f"\\|\\psi_{{{args.m}}}\\|^2 = {frac}\n", EXIT_OK
        return f"{v}\n", EXIT_OK
    res = cl.norm_quadrature(args.m, args.n, args.tol)
    value = res.value.real
    met = res.error <= args.tol * abs(value)
    if args.format == "json":
        out = {"m": args.m, "n": args.n, "method": "quadrature", "tol": args.tol, **res.to_json()}
        return json.dumps(out, indent=2) + "\n", EXIT_OK
    rel = "<" if met else ">="
    return f"{value:.12f} (est err {rel} {_fmt_tol(args.tol)})\n", EXIT_OK


# -- argument parsing ------------------------------------------------------------

def _positive_float(s: str) -> float:
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qorbit", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"qorbit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites over a parameter grid")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--n-min", type=int, default=1)
    v.add_argument("--n-max", type=int, default=6)
    v.add_argument("--m-max", type=int, default=12)
    v.add_argument("--tol", type=_positive_float, default=1e-8,
                   help="quadrature tolerance (norm suite)")
    v.add_argument("--seed", type=int, default=20240229, help="seed for randomized suites")
    v.add_argument("--samples", type=int, default=1000, help="instances per field property")
    v.add_argument("--pairs", type=int, default=20, help="random SL(2) pairs (group suite)")
    v.add_argument("--jmax", type=int, default=10, help="monomial degree bound (leibniz suite)")
    v.add_argument("--amended", action="store_true",
                   help="compare against the corrected K^-2 middle coefficient")
    v.add_argument("--timing", action="store_true",
                   help="record wall times in JSON/LaTeX output (makes it nondeterministic)")
    v.add_argument("--output", default="-", help="file path, or - for stdout")
    v.add_argument("--format", choices=("text", "json", "latex"), default="text")

    c = sub.add_parser("coeffs", help="three-term coefficients, derived vs transcribed")
    c.add_argument("--op", choices=tuple(OP_NAMES), required=True)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--q", choices=("1",), default=None, help="evaluate at q = 1")
    c.add_argument("--format", choices=("text", "json", "latex"), default="text")
    c.add_argument("--output", default="-")

    p = sub.add_parser("psi", help="basis function, factored and expanded")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=("text", "json", "latex"), default="text")
    p.add_argument("--output", default="-")

    nm = sub.add_parser("norm", help="squared norm of the classical basis function")
    nm.add_argument("--m", type=int, required=True)
    nm.add_argument("--n", type=int, required=True)
    nm.add_argument("--method", choices=("closed", "quadrature"), default="closed")
    nm.add_argument("--tol", type=_positive_float, default=1e-8)
    nm.add_argument("--format", choices=("text", "json", "latex"), default="text")
    nm.add_argument("--output", default="-")
    parser._subs = {"verify": v, "coeffs": c, "psi": p, "norm": nm}
    return parser


def _validate(parser, args) -> None:
    sp = parser._subs[args.command]
    if args.command == "verify":
        n_floor = 2 if args.suite == "norm" else 1
        if args.n_min < n_floor:
            sp.error(f"--n-min must be >= {n_floor} for suite {args.suite}")
        if args.n_max < args.n_min:
            sp.error(f"--n-max must be >= --n-min (n must be >= {n_floor})")
        if args.m_max < 0:
            sp.error("--m-max must be >= 0")
        if args.samples < 1 or args.pairs < 1 or args.jmax < 1:
            sp.error("--samples, --pairs and --jmax must be >= 1")
        return
    n_floor = 2 if args.command == "norm" else 1
    if args.n < n_floor:
        sp.error(f"--n must be >= {n_floor}")
    if args.m < 0:
        sp.error("--m must be >= 0")


def _write(text: str, output: str) -> None:
    if output == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _validate(parser, args)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8")
    if args.command == "verify":
        cfg = {
            "suite": args.suite, "n_min": args.n_min, "n_max": args.n_max,
            "m_max": args.m_max, "tol": args.tol, "seed": args.seed, "amended": args.amended,
            "jmax": args.jmax, "pairs": args.pairs, "samples": args.samples,
            "timing": args.timing or args.format == "text", "threads": _threads(),
        }
        doc = run(cfg)
        failed = doc["summary"]["failed"]
        _write(render_report(doc, args.format), args.output)
        return EXIT_OK if failed == 0 else EXIT_FAIL
    handler = {"coeffs": cmd_coeffs, "psi": cmd_psi, "norm": cmd_norm}[args.command]
    text, code = handler(args)
    _write(text, args.output)
    return code


def report_schema() -> dict:
    """The JSON schema that ``verify --format json`` output satisfies."""
    return json.loads(resources.files("qorbit").joinpath("report_schema.json").read_text("utf-8"))


if __name__ == "__main__":
    sys.exit(main())
