"""Command-line front end.

    lietrees dims --n 2 --kmax 4
    lietrees group Dq --n 2 --k 3
    lietrees verify all --n 2 --kmax 4 --format json
    lietrees conjecture eta-iso --n 2 --kmax 4

Exit status: 0 when every check passes, 1 when one fails, 2 on usage
errors, 3 when a job is refused for size.  Conjecture scans only report
verdicts and never fail.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from . import freelie, presented
from . import quasilie as Q
from . import treediag as T
from .cache import Cache
from .checks import Check
from .presented import IllDefinedHom
from .trees import catalan

REPORT_VERSION = 1
DEFAULT_LIMIT = 50_000

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_REFUSED = 0, 1, 2, 3

log = logging.getLogger("lietrees")


def _lq_size(n: int, k: int) -> int:
    return catalan(k - 1) * n ** k if k >= 1 else 0


def _at_size(n: int, k: int) -> int:
    return catalan(k) * n ** (k + 2)


VERIFY: dict[str, tuple[Callable[[int, int], list[Check]], Callable[[int, int], int]]] = {
    "lemma-quasi": (Q.lemma_quasi_checks, lambda n, k: _lq_size(n, k)),
    "cor-dd": (Q.snake_verify, lambda n, k: _lq_size(n, k + 2)),
    "lemma-root": (T.lemma_root_checks, lambda n, k: _lq_size(n, k + 2)),
    "thm-tree": (T.thm_tree_checks, lambda n, k: _lq_size(n, k + 2)),
    "rho-eta": (T.rho_eta_checks, lambda n, k: _at_size(n, k)),
    "tau": (T.tau_check, lambda n, k: _lq_size(n, k + 2)),
    "cor-rational": (T.cor_rational_checks, lambda n, k: _lq_size(n, k + 2)),
}

CONJECTURES = {
    # degree k of the target L'_k; the source is L_l / 2L_l with k = 2l
    "square-mono": (lambda n, k: Q.square_injectivity(n, k // 2), lambda n, k: _lq_size(n, k)),
    "eta-iso": (T.eta_injectivity, lambda n, k: _lq_size(n, k + 2)),
}

GROUPS = {
    "L": (lambda n, k: presented.AbelianStructure(freelie.witt_dim(n, k)), lambda n, k: 0),
    "Lq": (lambda n, k: Q.lprime_presentation(n, k).structure, _lq_size),
    "K": (lambda n, k: Q.kernel_gamma(n, k)[0].structure, _lq_size),
    "D": (lambda n, k: Q.d_presentation(n, k)[0].structure, lambda n, k: 0),
    "Dq": (lambda n, k: Q.dprime_group(n, k)[0].structure, lambda n, k: _lq_size(n, k + 2)),
    "At": (lambda n, k: T.at_presentation(n, k).structure, _at_size),
    "KerEta": (T.ker_etaprime, lambda n, k: _lq_size(n, k + 2)),
}


@dataclass(frozen=True)
class JobSpec:
    command: str
    name: str | None
    n: int
    k_range: tuple[int, int]
    format: str = "text"
    cache_dir: str | None = None
    jobs: int = 1
    limit: int = DEFAULT_LIMIT
    timings: bool = False

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        lo, hi = self.k_range
        if lo > hi:
            raise ValueError(f"empty degree range {lo}..{hi}")

    @property
    def degrees(self) -> list[int]:
        return list(range(self.k_range[0], self.k_range[1] + 1))


@dataclass
class Report:
    spec: JobSpec
    rows: list[dict] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return any(r["status"] == "fail" for r in self.rows)

    def summary(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for r in self.rows:
            out[r["status"]] = out.get(r["status"], 0) + 1
        return dict(sorted(out.items()))

    def to_json_obj(self) -> dict:
        obj = {
            "report": "lietrees",
            "version": REPORT_VERSION,
            "command": self.spec.command,
            "name": self.spec.name,
            "n": self.spec.n,
            "k_range": list(self.spec.k_range),
            "rows": self.rows,
            "summary": self.summary(),
        }
        if self.spec.timings:
            obj["timings"] = self.timings
        return obj

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for r in self.rows:
            w.writerow([r["n"], r["k"], r["item"], r["kind"], r["status"], r["value"], r["detail"],
                        json.dumps(r["data"], sort_keys=True)])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f"{self.spec.command} {self.spec.name or ''} n={self.spec.n} "
                 f"k={self.spec.k_range[0]}..{self.spec.k_range[1]}".replace("  ", " ")]
        for r in self.rows:
            tail = f"  ({r['detail']})" if r["detail"] else ""
            if r["kind"] == "check":
                lines.append(f"  [{r['status'].upper():4}] n={r['n']} k={r['k']} {r['item']}{tail}")
                if r["status"] == "fail" and r["data"]:
                    lines.append(f"         witness: {json.dumps(r['data'], sort_keys=True)}")
            elif r["kind"] == "verdict":
                lines.append(f"  {r['item']}: {r['value']} at (n={r['n']}, k={r['k']}){tail}")
                if r["data"]:
                    lines.append(f"         witness: {json.dumps(r['data'], sort_keys=True)}")
            else:
                lines.append(f"  n={r['n']} k={r['k']} {r['item']:>8} = {r['value']}{tail}")
        s = self.summary()
        lines.append("summary: " + ", ".join(f"{k} {v}" for k, v in s.items()))
        if self.spec.timings:
            lines.extend(f"  time {key}: {t:.3f}s" for key, t in sorted(self.timings.items()))
        return "\n".join(lines) + "\n"

    def render(self) -> str:
        return {"json": self.to_json, "csv": self.to_csv, "text": self.to_text}[self.spec.format]()


CSV_FIELDS = ["n", "k", "item", "kind", "status", "value", "detail", "data"]


def rows_from_csv(text: str) -> list[dict]:
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        rec["n"] = int(rec["n"])
        rec["k"] = int(rec["k"])
        rec["data"] = json.loads(rec["data"])
        rows.append(rec)
    return rows


def _row(n, k, item, kind, status, value="", detail="", data=None) -> dict:
    return {"n": n, "k": k, "item": item, "kind": kind, "status": status,
            "value": str(value), "detail": detail, "data": data or {}}


# -- per-degree tasks; module level so they pickle into worker processes ---

def _task_dims(n, k, limit):
    est = _lq_size(n, k)
    if est > limit:
        return [_row(n, k, item, "group", "skipped", "skipped (size)",
                     f"estimated generators {est} > {limit}") for item in ("dim L", "L'", "K")]
    return [
        _row(n, k, "dim L", "group", "info", freelie.witt_dim(n, k) if n else 0),
        _row(n, k, "L'", "group", "info", *_struct(Q.lprime_presentation(n, k).structure)),
        _row(n, k, "K", "group", "info", *_struct(Q.kernel_gamma(n, k)[0].structure)),
    ]


def _struct(s):
    return str(s), "", s.to_dict()


def _task_group(name, n, k, limit):
    est = GROUPS[name][1](n, k)
    if est > limit:
        return [_row(n, k, name, "group", "skipped", "skipped (size)",
                     f"estimated generators {est} > {limit}")]
    s = GROUPS[name][0](n, k)
    return [_row(n, k, name, "group", "info", *_struct(s))]


def _task_verify(name, n, k):
    fn = VERIFY[name][0]
    try:
        checks = fn(n, k)
    except IllDefinedHom as e:
        checks = [Check("well-defined", False, str(e), e.witness)]
    return [_row(n, k, f"{name}:{c.name}", "check", c.status, c.status, c.detail, _jsonable(c.witness))
            for c in checks]


def _task_conjecture(name, n, k, limit):
    fn, size = CONJECTURES[name]
    est = size(n, k)
    detail = f"l={k // 2}" if name == "square-mono" else ""
    if est > limit:
        return [_row(n, k, name, "verdict", "skipped", "skipped (size)",
                     f"{detail} estimated generators {est} > {limit}".strip())]
    holds, witness = fn(n, k)
    return [_row(n, k, name, "verdict", "holds" if holds else "fails",
                 "holds" if holds else "fails", detail, _jsonable(witness))]


def _jsonable(obj):
    return json.loads(json.dumps(obj, sort_keys=True, default=str))


def _init_worker(cache_dir, level):
    logging.basicConfig(level=level)
    if cache_dir:
        presented.set_reduction_store(Cache(cache_dir))


def _run_tasks(spec: JobSpec, tasks: list[tuple]) -> Report:
    report = Report(spec)
    if spec.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs, initializer=_init_worker,
                                 initargs=(spec.cache_dir, log.getEffectiveLevel())) as ex:
            results = list(ex.map(_timed, tasks))
    else:
        if spec.cache_dir:
            presented.set_reduction_store(Cache(spec.cache_dir))
        results = [_timed(t) for t in tasks]
    for task, (rows, dt) in zip(tasks, results):
        report.rows.extend(rows)
        report.timings[f"{task[0].__name__}{task[1:]}"] = dt
    report.rows.sort(key=lambda r: (r["n"], r["k"]))
    return report


def _timed(task):
    t0 = time.perf_counter()
    rows = task[0](*task[1:])
    return rows, time.perf_counter() - t0


class Refused(Exception):
    pass


def run(spec: JobSpec) -> Report:
    n = spec.n
    ks = spec.degrees
    if spec.command == "dims":
        return _run_tasks(spec, [(_task_dims, n, k, spec.limit) for k in ks])
    if spec.command == "group":
        return _run_tasks(spec, [(_task_group, spec.name, n, k, spec.limit) for k in ks])
    if spec.command == "verify":
        names = sorted(VERIFY) if spec.name == "all" else [spec.name]
        _guard(spec, max(VERIFY[m][1](n, k) for m in names for k in ks))
        return _run_tasks(spec, [(_task_verify, m, n, k) for k in ks for m in names])
    if spec.command == "conjecture":
        names = sorted(CONJECTURES) if spec.name == "all" else [spec.name]
        kk = [k for k in ks if k % 2 == 0] if spec.name == "square-mono" else ks
        tasks = [(_task_conjecture, m, n, k, spec.limit) for k in kk for m in names
                 if not (m == "square-mono" and k % 2)]
        return _run_tasks(spec, tasks)
    raise ValueError(f"unknown command {spec.command!r}")


def _guard(spec: JobSpec, estimate: int) -> None:
    if estimate > spec.limit:
        raise Refused(f"refusing job: estimated free-cover generator count {estimate} "
                      f"exceeds limit {spec.limit} (raise --limit to force)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    rank = common.add_mutually_exclusive_group()
    rank.add_argument("--n", type=int, help="rank of H")
    rank.add_argument("--genus", type=int, help="genus g; sets n = 2g")
    common.add_argument("--k", type=int, help="single degree")
    common.add_argument("--kmin", type=int, default=1, help="first degree of a range (default 1)")
    common.add_argument("--kmax", type=int, help="last degree of a range")
    common.add_argument("--format", choices=["text", "json", "csv"], default="text")
    common.add_argument("--cache", metavar="DIR", help="directory for cached reductions")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--limit", type=int, default=DEFAULT_LIMIT, metavar="GENCOUNT",
                        help="largest free-cover generator count to attempt")
    common.add_argument("--timings", action="store_true", help="include timings (not reproducible)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="lietrees", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("dims", parents=[common], help="dim L_k, L'_k and K_k for a range of degrees")
    g = sub.add_parser("group", parents=[common], help="structure of one family of groups")
    g.add_argument("name", choices=sorted(GROUPS))
    v = sub.add_parser("verify", parents=[common], help="run a named verification")
    v.add_argument("name", choices=sorted(VERIFY) + ["all"])
    c = sub.add_parser("conjecture", parents=[common], help="evidence scan for a conjecture")
    c.add_argument("name", choices=sorted(CONJECTURES) + ["all"])
    return p


def spec_from_args(args: argparse.Namespace) -> JobSpec:
    if args.genus is not None:
        n = 2 * args.genus
    elif args.n is not None:
        n = args.n
    else:
        raise ValueError("one of --n or --genus is required")
    if args.k is not None:
        k_range = (args.k, args.k)
    elif args.kmax is not None:
        k_range = (args.kmin, args.kmax)
    else:
        raise ValueError("one of --k or --kmax is required")
    if k_range[0] < 1:
        raise ValueError("degrees start at 1")
    if args.jobs < 1:
        raise ValueError("--jobs must be positive")
    return JobSpec(args.command, getattr(args, "name", None), n, k_range, args.format,
                   args.cache, args.jobs, args.limit, args.timings)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        spec = spec_from_args(args)
    except ValueError as e:
        parser.error(str(e))
    try:
        report = run(spec)
    except Refused as e:
        print(str(e), file=sys.stderr)
        return EXIT_REFUSED
    sys.stdout.write(report.render())
    if spec.command == "verify" and report.failed:
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
