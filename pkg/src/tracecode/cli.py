"""Command line: build codes, run the verification suites, write reports.

    tracecode code run --p 3 --m 8 --modulus 2,2,2,0,1,2,0,0,1 --a exp:820
    tracecode verify lemmas --p 3 --m 4 --a exp:7
    tracecode code sweep --p 3,5 --m 3,4,5 --count 5 --seed 1
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import logging
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

from . import applications, char_sums, closed_form, codes, counting
from .errors import ConfigError, OutOfRegime, TraceCodeError
from .field import (
    FieldCtx,
    FieldElement,
    element_from_exponent,
    format_modulus,
    make_field,
    parse_modulus,
)

log = logging.getLogger("tracecode")

TASKS = ("enumerate", "predict", "verify-lemmas", "dual", "minimality", "sumset")
FORMATS = ("json", "csv", "text")


@dataclass
class JobConfig:
    p: int
    m: int
    modulus: list[int] | None = None
    a_spec: dict = field(default_factory=lambda: {"exponent": 1})
    tasks: list[str] = field(default_factory=lambda: ["enumerate", "predict"])
    max_field: int | None = None
    s: int = 3
    output: str | None = None
    fmt: str = "json"

    def validate(self):
        bad = [t for t in self.tasks if t not in TASKS]
        if bad:
            raise ConfigError(f"unknown task(s) {bad}; choose from {list(TASKS)}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"unknown format {self.fmt}")
        if self.max_field is not None and self.max_field <= 0:
            raise ConfigError("bounds must be positive")
        if set(self.a_spec) not in ({"exponent"}, {"coeffs"}):
            raise ConfigError(f"a must be given by exponent or coeffs, got {self.a_spec}")


@dataclass
class RunReport:
    p: int
    m: int
    modulus: list[int]
    a: dict
    tasks: list[str]
    n: int | None = None
    k: int | None = None
    d: int | None = None
    case: str | None = None
    general_case: str | None = None
    eta_a: int | None = None
    I1: int | None = None
    I2: int | None = None
    weight_distribution: list[dict] | None = None
    cwe: list[dict] | None = None
    predicted_weight_distribution: list[dict] | None = None
    predicted_match: bool | None = None
    vanishing_weights: list[int] | None = None
    mds: bool | None = None
    dual: dict | None = None
    lemmas: dict | None = None
    minimality: dict | None = None
    sumset: dict | None = None
    mismatches: list[dict] = field(default_factory=list)
    error: str | None = None
    timing: dict = field(default_factory=dict)

    def ok(self) -> bool:
        return self.error is None and not self.mismatches

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> RunReport:
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> RunReport:
        return cls.from_dict(json.loads(text))


def _wd_rows(wd: codes.WeightDistribution) -> list[dict]:
    return [{"weight": w, "count": c} for w, c in sorted(wd.entries.items())]


def _cwe_rows(cwe: codes.CompleteWeightEnumerator) -> list[dict]:
    return [{"composition": list(c), "count": v} for c, v in sorted(cwe.terms.items())]


def resolve_a(ctx: FieldCtx, spec: dict) -> FieldElement:
    if "exponent" in spec:
        a = element_from_exponent(ctx, int(spec["exponent"]))
    else:
        coeffs = [int(c) for c in spec["coeffs"]]
        if len(coeffs) > ctx.m:
            raise ConfigError(f"a has {len(coeffs)} coefficients, field degree is {ctx.m}")
        a = ctx.elem(coeffs + [0] * (ctx.m - len(coeffs)))
    if a.in_prime_field():
        raise ConfigError(f"a = {a} lies in F_{ctx.p}")
    return a


def parse_a(text: str) -> dict:
    kind, _, body = text.partition(":")
    if kind == "exp" and body:
        return {"exponent": int(body)}
    if kind == "coeffs" and body:
        return {"coeffs": [int(c) for c in body.split(",")]}
    raise ConfigError(f"cannot parse a = {text!r}; use exp:K or coeffs:c0,c1,...")


def build_field(p: int, m: int, modulus: Sequence[int] | None) -> FieldCtx:
    # without an explicit modulus pick a primitive one so exp:K always resolves
    return make_field(p, m, modulus, primitive=modulus is None)


def _mismatch(report: RunReport, task: str, expected, actual):
    report.mismatches.append({"task": task, "expected": expected, "actual": actual})


def _verify_lemmas(ctx: FieldCtx, a: FieldElement, report: RunReport) -> dict:
    p = ctx.p
    out: dict[str, Any] = {}
    cs = char_sums.char_sum_report(ctx, a)
    out["char_sums"] = cs.matches()
    if not cs.matches():
        _mismatch(report, "char_sums", [cs.predicted_I1, cs.predicted_I2], [cs.I1, cs.I2])

    table = counting.count_N_table(ctx, a)
    cases = counting.classify_all(ctx, a)
    bad = [
        (b, r) for b, bc in enumerate(cases, start=1) for r in range(p)
        if counting.count_N_closed_case(p, ctx.m, bc, r) != table[b, r]
    ]
    out["N_counts"] = not bad
    if bad:
        b, r = bad[0]
        _mismatch(report, "N_counts", counting.count_N_closed_case(p, ctx.m, cases[b - 1], r),
                  int(table[b, r]))

    brute = counting.region_sizes_brute(ctx, a)
    closed = counting.region_sizes_closed(ctx, a, cs.I1, cs.I2)
    out["region_sizes"] = brute == closed
    if brute != closed:
        _mismatch(report, "region_sizes", str(closed), str(brute))

    aux_ok = True
    for g in itertools.product(range(p), repeat=3):
        for eps in (1, -1):
            r = counting.aux_counts(ctx, a, g, eps)
            if not (r.T_matches() and r.L_matches()):
                aux_ok = False
                _mismatch(report, f"aux{g}{eps:+d}", [r.T_closed, str(r.L_numeric)],
                          [r.T_brute, r.L_brute])
    out["aux_counts"] = aux_ok
    out["m_set"] = counting.m_set(ctx, a) == counting.m_set_predicted(ctx, a)

    e_ok = True
    for gamma in range(1, p):
        es = char_sums.E_sums(ctx, a, gamma)
        scale = float(p ** 3)
        e_ok &= char_sums.close(es.e1, es.e1_closed, scale)
        if es.e2 is not None:
            e_ok &= char_sums.close(es.e2, es.e2_closed, scale)
    out["E_sums"] = bool(e_ok)
    if ctx.m % 2 == 0 and counting._regime(ctx, a) == "even-sub":
        out["remark_identity"] = counting.remark_identity(ctx, a, cs.I1, cs.I2) == 0
    for key in ("m_set", "E_sums", "remark_identity"):
        if out.get(key) is False:
            _mismatch(report, key, True, False)
    return out


def run(config: JobConfig) -> RunReport:
    """Execute the requested tasks; errors are captured in the report."""
    config.validate()
    report = RunReport(config.p, config.m, list(config.modulus or []), dict(config.a_spec),
                       list(config.tasks))
    try:
        _run(config, report)
    except TraceCodeError as exc:
        report.error = f"{type(exc).__name__}: {exc}"
    return report


def _timed(report: RunReport, name: str):
    class _T:
        def __enter__(self):
            self.t = time.perf_counter()

        def __exit__(self, *exc):
            report.timing[name] = round(time.perf_counter() - self.t, 4)

    return _T()


def _run(config: JobConfig, report: RunReport):
    tasks = config.tasks
    ctx = build_field(config.p, config.m, config.modulus)
    report.modulus = list(ctx.modulus)
    a = resolve_a(ctx, config.a_spec)
    bound = config.max_field

    wd = cwe = None
    if "enumerate" in tasks or "dual" in tasks:
        with _timed(report, "enumerate"):
            wd, cwe = codes.enumerate_code(ctx, a, bound=bound)
        report.n, report.k = wd.n, wd.k
        report.d = codes.min_distance(wd)
        report.weight_distribution = _wd_rows(wd)
        report.cwe = _cwe_rows(cwe)
        report.mds = closed_form.mds_check(wd.n, wd.k, report.d)

    case = None
    if {"predict", "dual"} & set(tasks):
        with _timed(report, "predict"):
            case = closed_form.classify_case(ctx, a)
        report.case, report.general_case = case.label, case.general_label
        report.eta_a, report.I1, report.I2 = case.eta_a, case.I1, case.I2

    if "predict" in tasks:
        pred = closed_form.predict(case)
        report.predicted_weight_distribution = _wd_rows(pred.wd)
        report.vanishing_weights = pred.vanishing_weights
        if wd is not None:
            report.predicted_match = pred.wd == wd and pred.cwe == cwe
            if pred.wd != wd:
                _mismatch(report, "predict.wd", _wd_rows(pred.wd), _wd_rows(wd))
            if pred.cwe != cwe:
                _mismatch(report, "predict.cwe", _cwe_rows(pred.cwe), _cwe_rows(cwe))

    if "verify-lemmas" in tasks:
        with _timed(report, "verify-lemmas"):
            report.lemmas = _verify_lemmas(ctx, a, report)

    if "dual" in tasks:
        with _timed(report, "dual"):
            cols = codes.dual_low_weights_columns(ctx, a)
            moms = codes.dual_low_weights_moments(wd, ctx.p)
        dual = {"a1": cols.a1, "a2": cols.a2, "a3": cols.a3,
                "distance": codes.dual_min_distance_upto3(cols),
                "methods_agree": cols.values() == moms.values()}
        if cols.values() != moms.values():
            _mismatch(report, "dual.methods", list(cols.values()), list(moms.values()))
        try:
            pd = closed_form.predict_dual(case)
            dual["predicted"] = asdict(pd)
            got = cols.a2 if pd.distance == 2 else cols.a3
            want = pd.a2 if pd.distance == 2 else pd.a3
            dual["predicted_match"] = dual["distance"] == pd.distance and got == want
            if not dual["predicted_match"]:
                _mismatch(report, "dual.predicted", [pd.distance, want], [dual["distance"], got])
        except OutOfRegime as exc:
            dual["predicted"] = None
            dual["note"] = str(exc)
        report.dual = dual

    if "minimality" in tasks:
        with _timed(report, "minimality"):
            mr = applications.minimal_codewords_exhaustive(ctx, a)
        report.minimality = asdict(mr)
        if mr.ab_ratio_passes and mr.non_minimal_count:
            _mismatch(report, "minimality", 0, mr.non_minimal_count)

    if "sumset" in tasks:
        if ctx.m < 5 or ctx.m % 2 == 0:
            log.warning("the sum-set construction is only claimed for odd m >= 5")
        with _timed(report, "sumset"):
            sr = applications.sumset_pipeline(ctx, a, config.s, strict=False)
        report.sumset = asdict(sr)
        if not sr.is_sum_set:
            _mismatch(report, "sumset", True, False)


def sweep(configs: Sequence[JobConfig], workers: int = 1) -> list[RunReport]:
    """Run every job; one job's failure does not affect the others. Output keeps input order."""

    def one(cfg: JobConfig) -> RunReport:
        try:
            return run(cfg)
        except Exception as exc:  # isolate jobs: bad configs become errored cells
            rep = RunReport(cfg.p, cfg.m, list(cfg.modulus or []), dict(cfg.a_spec), list(cfg.tasks))
            rep.error = f"{type(exc).__name__}: {exc}"
            return rep

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(one, configs))
    return [one(c) for c in configs]


def sweep_grid(
    ps: Sequence[int], ms: Sequence[int], count: int, tasks: Sequence[str],
    seed: int | None = None, max_field: int | None = None,
) -> list[JobConfig]:
    """count values of a per (p, m): the first exponents outside F_p, or random ones with a seed."""
    rng = random.Random(seed) if seed is not None else None
    jobs = []
    for p, m in itertools.product(ps, ms):
        try:
            ctx = build_field(p, m, None)
        except TraceCodeError as exc:
            log.warning("skipping p=%s m=%s: %s", p, m, exc)
            jobs.append(JobConfig(p, m, tasks=list(tasks), a_spec={"exponent": 1}))
            continue
        # beta^k lies in F_p iff (q-1)/(p-1) divides k
        step = (ctx.q - 1) // (p - 1)
        pool = [k for k in range(1, ctx.q - 1) if k % step]
        chosen = rng.sample(pool, min(count, len(pool))) if rng else pool[:count]
        for k in sorted(chosen):
            jobs.append(JobConfig(p, m, list(ctx.modulus), {"exponent": k}, list(tasks),
                                  max_field=max_field))
    return jobs


def emit(reports: RunReport | list[RunReport], fmt: str) -> str:
    many = isinstance(reports, list)
    items = reports if many else [reports]
    if fmt == "json":
        if many:
            return json.dumps([r.to_dict() for r in items], sort_keys=True, indent=2)
        return items[0].to_json()
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow((["p", "m", "a"] if many else []) + ["weight", "count"])
        for r in items:
            for row in r.weight_distribution or []:
                prefix = [r.p, r.m, json.dumps(r.a, sort_keys=True)] if many else []
                writer.writerow(prefix + [row["weight"], row["count"]])
        return buf.getvalue()
    return "\n\n".join(_text(r) for r in items)


def _text(r: RunReport) -> str:
    lines = [f"GF({r.p}^{r.m}) modulus {format_modulus(r.modulus)}  a = {r.a}"]
    if r.case:
        lines.append(f"case {r.case} (general {r.general_case}); eta(a)={r.eta_a} I1={r.I1} I2={r.I2}")
    if r.n is not None:
        lines.append(f"[{r.n}, {r.k}, {r.d}]" + ("  MDS" if r.mds else ""))
        lines.append("  " + " + ".join(f"{x['count']}z^{x['weight']}" for x in r.weight_distribution))
    if r.predicted_match is not None:
        lines.append(f"prediction {'matches' if r.predicted_match else 'DIFFERS'}")
    for name in ("dual", "lemmas", "minimality", "sumset"):
        val = getattr(r, name)
        if val is not None:
            lines.append(f"{name}: {json.dumps(val, sort_keys=True)}")
    for mm in r.mismatches:
        lines.append(f"MISMATCH {mm['task']}: expected {mm['expected']} got {mm['actual']}")
    if r.error:
        lines.append(f"ERROR {r.error}")
    lines.append("status: " + ("ok" if r.ok() else "FAILED"))
    return "\n".join(lines)


def field_info(p: int, m: int, modulus: Sequence[int] | None) -> dict:
    ctx = build_field(p, m, modulus)
    g = char_sums.gauss_sum_closed(p, m)
    return {
        "p": p, "m": m, "q": ctx.q, "modulus": list(ctx.modulus),
        "x_is_primitive": ctx.check_generator(),
        "gauss_sum": {"unit_power": g.quarter, "p_half_exponent": g.half_exp},
    }


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _common(sp: argparse.ArgumentParser, single: bool = True):
    if single:
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--m", type=int, required=True)
        sp.add_argument("--modulus", type=parse_modulus, default=None,
                        help="ascending coefficients, e.g. 2,2,2,0,1,2,0,0,1")
        sp.add_argument("--a", type=str, default="exp:1", help="exp:K or coeffs:c0,c1,...")
    sp.add_argument("--max-field", type=int, default=None, help="bound on p^m")
    sp.add_argument("--output", default=None, help="write the report here instead of stdout")
    sp.add_argument("--format", choices=FORMATS, default="json")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tracecode", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    top = ap.add_subparsers(dest="group", required=True)

    fld = top.add_parser("field").add_subparsers(dest="cmd", required=True)
    info = fld.add_parser("info", help="modulus, primitivity and Gauss sum of GF(p^m)")
    info.add_argument("--p", type=int, required=True)
    info.add_argument("--m", type=int, required=True)
    info.add_argument("--modulus", type=parse_modulus, default=None)

    code = top.add_parser("code").add_subparsers(dest="cmd", required=True)
    run_p = code.add_parser("run", help="enumerate one code and compare with the tables")
    _common(run_p)
    run_p.add_argument("--tasks", default="enumerate,predict")
    run_p.add_argument("--s", type=int, default=3)
    run_p.add_argument("--dump", default=None, help="write every codeword to this file")
    sw = code.add_parser("sweep", help="run a grid of (p, m, a)")
    sw.add_argument("--p", type=_int_list, required=True)
    sw.add_argument("--m", type=_int_list, required=True)
    sw.add_argument("--count", type=int, default=5)
    sw.add_argument("--seed", type=int, default=None, help="random choice of a; omit for the first exponents")
    sw.add_argument("--tasks", default="enumerate,predict")
    sw.add_argument("--workers", type=int, default=1)
    _common(sw, single=False)

    ver = top.add_parser("verify").add_subparsers(dest="cmd", required=True)
    _common(ver.add_parser("lemmas", help="closed forms of the counting lemmas against enumeration"))
    _common(ver.add_parser("dual", help="low-weight dual counts by two methods"))

    apps = top.add_parser("apps").add_subparsers(dest="cmd", required=True)
    _common(apps.add_parser("minimality", help="exhaustive minimal-codeword check"))
    ss = apps.add_parser("sumset", help="s-sum set check of the column set")
    _common(ss)
    ss.add_argument("--s", type=int, default=3)
    return ap


FIXED_TASKS = {
    ("verify", "lemmas"): ["verify-lemmas"],
    ("verify", "dual"): ["dual"],
    ("apps", "minimality"): ["minimality"],
    ("apps", "sumset"): ["sumset"],
}


def _write(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.group == "field":
            print(json.dumps(field_info(args.p, args.m, args.modulus), sort_keys=True, indent=2))
            return 0
        if args.cmd == "sweep":
            tasks = [t for t in args.tasks.split(",") if t]
            reports = sweep(sweep_grid(args.p, args.m, args.count, tasks, args.seed,
                                       args.max_field), args.workers)
            _write(emit(reports, args.format), args.output)
            return 0 if all(r.ok() for r in reports) else 1
        tasks = FIXED_TASKS.get((args.group, args.cmd)) or [t for t in args.tasks.split(",") if t]
        cfg = JobConfig(args.p, args.m, args.modulus, parse_a(args.a), tasks,
                        max_field=args.max_field, s=getattr(args, "s", 3),
                        output=args.output, fmt=args.format)
        report = run(cfg)
        if getattr(args, "dump", None) and report.error is None:
            ctx = build_field(args.p, args.m, args.modulus)
            with open(args.dump, "w", encoding="utf-8") as fh:
                codes.dump_codewords(ctx, resolve_a(ctx, cfg.a_spec), fh,
                                     by_exponent="exponent" in cfg.a_spec)
        _write(emit(report, args.format), args.output)
        return 0 if report.ok() else 1
    except TraceCodeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
