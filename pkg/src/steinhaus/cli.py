"""Command-line front end.

Usage::

    steinhaus verify --lemma fp3-table
    steinhaus constant --name Cp --p 0.5
    steinhaus moment --coeffs 0.6,0.8 --p 0.3 --method quad
    steinhaus table1 --format csv
    steinhaus sweep --what psi --p 0.5 --s-range 2:10:0.5

Exit codes: 0 when everything was verified (and every value printed in the
source was reproduced) or computed; 1 when a margin is violated or a
printed value is not reproduced; 2 when a verification is inconclusive or
the input is malformed (a diagnostic goes to stderr).

Sweeps run on ``STEINHAUS_THREADS`` worker threads (default 1); the output
does not depend on the thread count.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import constants as _const
from . import entropy as _ent
from . import moments as _mom
from . import verifier as _ver
from .errors import ConvergenceError, DomainError, RangeError
from .report import computation_record, dumps, to_csv, verification_record

DEFAULT_SEED = 20240601
FORMATS = ("json", "csv", "human")
LEMMAS = {
    "fp-le-up": _ver.LemmaId.FP_LE_UP,
    "up-le-gp": _ver.LemmaId.UP_LE_GP,
    "fp3-table": _ver.LemmaId.FP3_TABLE,
    "l-bound": _ver.LemmaId.L_BOUND,
    "d-logconvex": _ver.LemmaId.D_LOGCONVEX,
    "ext-concavity": _ver.LemmaId.EXT_CONCAVITY,
    "base-case": _ver.LemmaId.BASE_CASE,
    "main-inequality": _ver.LemmaId.MAIN_INEQUALITY,
    "holder-chain": _ver.LemmaId.HOLDER_CHAIN,
    "psi-master": _ver.LemmaId.PSI_MASTER,
    "renyi": _ver.LemmaId.RENYI_UPPER,
}
CONSTANTS = ("Cp", "kappa", "psi2", "D", "A", "B", "pstar")
MOMENT_METHODS = ("quad", "mc", "pair", "exact")
SWEEPS = ("constants", "psi")
_PER_P_DEFAULT = (0.1, 0.5, 0.9)

EXIT_OK, EXIT_VIOLATION, EXIT_INCONCLUSIVE = 0, 1, 2


class InputError(ValueError):
    """Malformed command-line input."""


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    """Everything one CLI invocation needs; identical configs give identical output."""

    command: str
    lemma: str | None = None
    name: str | None = None
    p: tuple | None = None
    s: tuple | None = None
    coeffs: tuple = ()
    n_list: tuple | None = None
    method: str = "quad"
    samples: int = 1_000_000
    seed: int = DEFAULT_SEED
    tol: float = 1e-9
    refine: int = 0
    trials: int = 10_000
    instances: int = 50
    n_max: int = 6
    what: str = "constants"
    fmt: str = "json"
    output: str | None = None
    timing: bool = False
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in ("verify", "constant", "moment", "table1", "sweep"):
            raise InputError(f"unknown command {self.command!r}")
        if self.fmt not in FORMATS:
            raise InputError(f"format must be one of {FORMATS}")
        if not self.tol > 0:
            raise InputError("tol must be positive")
        if self.refine < 0:
            raise InputError("refinement level must be non-negative")
        if self.samples < 1000:
            raise InputError("samples must be at least 1000")
        if self.instances < 1 or self.n_max < 2:
            raise InputError("instances must be >= 1 and n-max >= 2")
        if self.command == "verify" and self.lemma not in LEMMAS:
            raise InputError(f"--lemma must be one of {sorted(LEMMAS)}")
        if self.command == "constant" and self.name not in CONSTANTS:
            raise InputError(f"--name must be one of {CONSTANTS}")
        if self.command == "moment":
            if self.method not in MOMENT_METHODS:
                raise InputError(f"--method must be one of {MOMENT_METHODS}")
            if len(self.coeffs) != 1 or not self.p or len(self.p) != 1:
                raise InputError("moment needs exactly one coefficient vector and one --p")
        if self.command == "sweep" and self.what not in SWEEPS:
            raise InputError(f"--what must be one of {SWEEPS}")


@dataclass
class RunResult:
    exit_code: int
    text: str
    records: list


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------


def parse_floats(text: str) -> tuple:
    try:
        vals = tuple(float(v) for v in text.replace(",", " ").split())
    except ValueError:
        raise InputError(f"expected a comma-separated list of numbers, got {text!r}") from None
    if not vals or not all(np.isfinite(vals)):
        raise InputError(f"expected finite numbers, got {text!r}")
    return vals


def parse_range(text: str) -> tuple:
    """``start:stop:step`` (inclusive of ``stop``) -> tuple of floats rounded to 12 decimals."""
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError(f"range must be start:stop:step, got {text!r}")
    start, stop, step = parse_floats(" ".join(parts))
    if not step > 0 or stop < start:
        raise InputError(f"range needs step > 0 and stop >= start, got {text!r}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    if count > 100_000:
        raise InputError("range has more than 100000 points")
    return tuple(np.round(start + step * np.arange(count), 12).tolist())


def read_coeff_file(path: str) -> tuple:
    """One coefficient vector per non-empty line; ``#`` starts a comment."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InputError(f"cannot read coefficient file: {exc}") from None
    out = []
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_floats(line))
    if not out:
        raise InputError(f"no coefficient vectors in {path}")
    return tuple(out)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _reports_exit(reports) -> int:
    if any(r.verdict is _ver.Verdict.VIOLATED or not r.paper_agreement for r in reports):
        return EXIT_VIOLATION
    if any(r.verdict is _ver.Verdict.INCONCLUSIVE for r in reports):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _human_reports(reports) -> str:
    lines = []
    for r in reports:
        lines.append(r.summary())
        if r.counterexample is not None:
            c = r.counterexample
            lines.append(f"  counterexample: {c.label} {c.params} in [{c.lo:.6g}, {c.hi:.6g}]")
        for chk in r.paper_checks:
            if not chk.holds:
                lines.append(f"  printed value not reproduced: {chk.label} = {chk.paper_value:g}, certified [{chk.lo:.6g}, {chk.hi:.6g}]")
    return "\n".join(lines) + "\n"


def table1_rows(report: _ver.VerificationReport) -> list:
    """Rows ``(j, u_j, u_j+1, paper/certified d-, paper/certified d+, dominance flags)``."""
    u = report.grid["u_nodes"]
    dm, dp = report.extra["d_minus"], report.extra["d_plus"]
    rows = []
    for j in range(len(dm)):
        pm, pp = _ver.TABLE1["d_minus"][j], _ver.TABLE1["d_plus"][j]
        rows.append(
            {
                "j": j + 1,
                "u_j": float(u[j]),
                "u_j+1": float(u[j + 1]),
                "paper_d_minus": pm,
                "certified_d_minus": float(dm[j].lo),
                "d_minus_dominates": bool(dm[j].lo >= pm - _ver.TABLE1_SLACK),
                "paper_d_plus": pp,
                "certified_d_plus": float(dp[j].lo),
                "d_plus_dominates": bool(dp[j].lo >= pp - _ver.TABLE1_SLACK),
            }
        )
    return rows


TABLE1_HEADER = (
    "j",
    "u_j",
    "u_j+1",
    "paper_d_minus",
    "certified_d_minus",
    "d_minus_dominates",
    "paper_d_plus",
    "certified_d_plus",
    "d_plus_dominates",
)


def emit_table1(fmt: str = "human", *, timing: bool = False) -> RunResult:
    """Certified ``d_-(j)``, ``d_+(j)`` next to the printed Table 1 and a dominance flag."""
    if fmt not in FORMATS:
        raise InputError(f"format must be one of {FORMATS}")
    report, _ = _ver.verify_fp3_table(timing=timing)
    rows = table1_rows(report)
    dominated = all(r["d_minus_dominates"] and r["d_plus_dominates"] for r in rows)
    if report.verdict is _ver.Verdict.INCONCLUSIVE:
        code = EXIT_INCONCLUSIVE
    elif report.verdict is _ver.Verdict.VIOLATED or not dominated:
        code = EXIT_VIOLATION
    else:
        code = EXIT_OK
    rec = computation_record("TABLE1", {"u_nodes": report.grid["u_nodes"]}, {"rows": rows, "verdict": report.verdict.value}, provenance="paper", runtime_ms=report.runtime_ms)
    if fmt == "json":
        text = dumps([rec])
    elif fmt == "csv":
        text = to_csv(TABLE1_HEADER, [[r[k] for k in TABLE1_HEADER] for r in rows])
    else:
        lines = [f"{'j':>2} {'segment':>13} {'d- paper':>9} {'d- cert.':>10} {'d+ paper':>9} {'d+ cert.':>10}"]
        for r in rows:
            seg = f"[{r['u_j']:g}, {r['u_j+1']:g}]"
            fm = "" if r["d_minus_dominates"] else "!"
            fp = "" if r["d_plus_dominates"] else "!"
            lines.append(
                f"{r['j']:>2} {seg:>13} {r['paper_d_minus']:>9.5g} {r['certified_d_minus']:>9.7f}{fm:1} "
                f"{r['paper_d_plus']:>9.5g} {r['certified_d_plus']:>9.7f}{fp:1}"
            )
        lines.append("('!' marks a certified value below the printed one)")
        text = "\n".join(lines) + "\n"
    return RunResult(code, text, [rec])


def _p_values(cfg: RunConfig, default):
    return cfg.p if cfg.p is not None else default


def _verify(cfg: RunConfig) -> RunResult:
    lemma = cfg.lemma
    t = cfg.timing
    p_grid = _p_values(cfg, _ver.DEFAULT_P_GRID)
    s_grid = cfg.s if cfg.s is not None else _ver.DEFAULT_S_GRID
    reports = []
    extra_by_report = {}
    if lemma == "fp-le-up":
        reports.append(_ver.verify_fp_le_up(p_grid, s_grid, timing=t))
    elif lemma == "up-le-gp":
        reports.append(_ver.verify_up_le_gp(p_grid, timing=t))
    elif lemma == "fp3-table":
        rep, breakdowns = _ver.verify_fp3_table(p_grid, timing=t)
        reports.append(rep)
        extra_by_report[0] = {"segments": table1_rows(rep), "breakdowns": [b.to_dict() for b in breakdowns]}
    elif lemma == "l-bound":
        reports.append(_ver.verify_L_bound(timing=t))
    elif lemma == "d-logconvex":
        reports.append(_ver.verify_d_logconvex(cfg.p, timing=t))
    elif lemma == "ext-concavity":
        for q in _p_values(cfg, _PER_P_DEFAULT):
            reports.append(_ver.verify_extended_concavity(q, cfg.trials, cfg.seed, timing=t))
    elif lemma == "base-case":
        for q in _p_values(cfg, _PER_P_DEFAULT):
            reports.append(_ver.verify_base_case(q, timing=t))
    elif lemma == "main-inequality":
        vecs = list(cfg.coeffs) or _mom.random_unit_vectors(cfg.instances, cfg.n_max, cfg.seed)
        vecs = [_mom._coerce(v).normalized() for v in vecs]
        for q in _p_values(cfg, _PER_P_DEFAULT):
            reports.append(_ver.verify_main_inequality(q, vecs, timing=t))
    elif lemma == "holder-chain":
        for q in _p_values(cfg, _PER_P_DEFAULT):
            reports.append(_ver.verify_holder_chain(q, cfg.s, timing=t))
    elif lemma == "psi-master":
        reports.append(_ver.verify_psi_master(p_grid, s_grid, timing=t))
    elif lemma == "renyi":
        if cfg.coeffs:
            vecs = [_mom.CoefficientVector(v).normalized() for v in cfg.coeffs]
        else:
            vecs = [np.full(n, 1.0 / np.sqrt(n)) for n in (cfg.n_list or (2, 4, 8, 16))]
        spec = _ent.GridSpec()
        for _ in range(cfg.refine):
            spec = spec.refined()
        reports.append(_ent.verify_renyi_upper(vecs, _p_values(cfg, (0.25, 0.5, 0.75, 1.0)), spec, timing=t))
    records = []
    for i, r in enumerate(reports):
        rec = verification_record(r)
        rec["extra"].update(extra_by_report.get(i, {}))
        records.append(rec)
    code = _reports_exit(reports)
    if cfg.fmt == "human":
        text = _human_reports(reports)
    elif cfg.fmt == "csv":
        header = ("id", "label", "params", "lo", "hi", "kind", "status")
        rows = [[rec["id"], m["label"], _flat(m["params"]), m["lo"], m["hi"], m["kind"], m["status"]] for rec in records for m in rec["margins"]]
        text = to_csv(header, rows)
    else:
        text = dumps(records)
    return RunResult(code, text, records)


def _flat(params: dict) -> str:
    return ";".join(f"{k}={v}" for k, v in params.items())


def _constant(cfg: RunConfig) -> RunResult:
    name = cfg.name
    if name == "pstar":
        ps = (None,)
    elif cfg.p is None:
        raise InputError(f"constant {name} needs --p")
    else:
        ps = cfg.p
    records, lines, rows = [], [], []
    pstar = _const.find_pstar(1e-13)
    for q in ps:
        values: dict = {}
        if name == "pstar":
            values["value"] = pstar
        elif name in ("A", "B"):
            k = _const.khinchin_constants(q, pstar)
            values["value"] = k.A_p if name == "A" else k.B_p
            values["regime"] = k.A_regime if name == "A" else k.B_regime
            values["provenance"] = "paper" if name == "A" else k.B_provenance
        else:
            fn, enc = {
                "Cp": (_const.c_p, _const.c_p_enclosure),
                "kappa": (_const.kappa_p, _const.kappa_p_enclosure),
                "psi2": (_const.psi_2, _const.psi_2_enclosure),
                "D": (_const.d_func, _const.d_func_enclosure),
            }[name]
            values["value"] = float(fn(q))
            e = enc(q)
            values["enclosure"] = {"lo": float(np.atleast_1d(e.lo)[0]), "hi": float(np.atleast_1d(e.hi)[0])}
        params = {} if q is None else {"p": q}
        records.append(computation_record(f"CONSTANT_{name}", params, values))
        label = name if q is None else f"{name}({q:g})"
        lines.append(f"{label} = {values['value']:.12g}")
        rows.append(["" if q is None else q, values["value"]])
    if cfg.fmt == "human":
        text = "\n".join(lines) + "\n"
    elif cfg.fmt == "csv":
        text = to_csv(("p", name), rows)
    else:
        text = dumps(records)
    return RunResult(EXIT_OK, text, records)


def _moment(cfg: RunConfig) -> RunResult:
    a, p = cfg.coeffs[0], cfg.p[0]
    if cfg.method == "quad":
        est = _mom.quad_negative_moment(a, p, tol=max(cfg.tol, 1e-12), normalize=False)
    elif cfg.method == "mc":
        est = _mom.mc_negative_moment(a, p, samples=cfg.samples, seed=cfg.seed)
    elif cfg.method == "pair":
        est = _mom.pair_moment(a, p, tol=max(cfg.tol, 1e-14))
    else:
        est = _mom.exact_single_moment(a, p)
    vec = _mom.CoefficientVector(a)
    params = {"a": vec.a, "p": p, "method": cfg.method}
    if cfg.method == "mc":
        params.update(samples=cfg.samples, seed=cfg.seed)
    else:
        params["tol"] = cfg.tol
    values = {"value": est.value, "half_width": est.half_width, "estimator": est.method, "norm": vec.norm}
    rec = computation_record("MOMENT", params, values)
    if cfg.fmt == "human":
        text = f"E|S|^(-{p:g}) = {est.value:.12g} +/- {est.half_width:.3g} ({est.method})\n"
    elif cfg.fmt == "csv":
        text = to_csv(("p", "method", "value", "half_width"), [[p, est.method, est.value, est.half_width]])
    else:
        text = dumps([rec])
    return RunResult(EXIT_OK, text, [rec])


def _sweep(cfg: RunConfig) -> RunResult:
    if cfg.what == "constants":
        ps = cfg.p if cfg.p is not None else parse_range("-0.9:4:0.01")
        pstar = _const.find_pstar(1e-13)
        rows = []
        for q in ps:
            k = _const.khinchin_constants(q, pstar)
            rows.append([q, k.A_p, k.B_p])
        header = ("p", "A_p", "B_p")
        params = {"p": ps}
    else:
        ps = np.atleast_1d(np.asarray(cfg.p if cfg.p is not None else (0.5,), dtype=float))
        ss = cfg.s if cfg.s is not None else tuple(_ver.DEFAULT_S_GRID.tolist())
        ps = _ver._check_p_grid(ps)
        _ver._check_s_grid(ss, ps)
        rows = []
        for s in ss:
            enc = _mom.psi_func_grid(ps, s)
            for i, q in enumerate(ps):
                lo, hi = float(enc.lo[i]), float(enc.hi[i])
                rows.append([float(q), float(s), 0.5 * (lo + hi), lo, hi])
        header = ("p", "s", "psi", "psi_lo", "psi_hi")
        params = {"p": ps, "s": ss}
    if cfg.fmt == "json":
        rec = computation_record(f"SWEEP_{cfg.what.upper()}", params, {"header": list(header), "rows": rows})
        return RunResult(EXIT_OK, dumps([rec]), [rec])
    return RunResult(EXIT_OK, to_csv(header, rows), [])


def run(cfg: RunConfig) -> RunResult:
    """Dispatch one configuration.  Library input errors propagate to :func:`main`."""
    if cfg.command == "verify":
        return _verify(cfg)
    if cfg.command == "constant":
        return _constant(cfg)
    if cfg.command == "moment":
        return _moment(cfg)
    if cfg.command == "table1":
        return emit_table1(cfg.fmt, timing=cfg.timing)
    return _sweep(cfg)


# ---------------------------------------------------------------------------
# argparse
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="steinhaus", description="Validated numerics for negative moments of Steinhaus sums.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=FORMATS, default=None, help="output format")
    common.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")
    common.add_argument("--timing", action="store_true", help="record runtime_ms (makes output non-reproducible)")
    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--p", default=None, help="comma-separated exponents")
    grid.add_argument("--p-range", default=None, help="exponent grid start:stop:step")
    grid.add_argument("--s-range", default=None, help="s grid start:stop:step")
    coeffs = argparse.ArgumentParser(add_help=False)
    coeffs.add_argument("--coeffs", action="append", default=None, help="comma-separated moduli (repeatable)")
    coeffs.add_argument("--coeffs-file", default=None, help="file with one coefficient vector per line")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common, grid, coeffs], help="re-verify one proof step")
    v.add_argument("--lemma", required=True, choices=sorted(LEMMAS))
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--trials", type=int, default=10_000, help="random pairs (ext-concavity)")
    v.add_argument("--instances", type=int, default=50, help="random vectors (main-inequality)")
    v.add_argument("--n-max", type=int, default=6, help="largest random vector length (main-inequality)")
    v.add_argument("--n-list", default=None, help="equal-weight lengths (renyi), e.g. 2,4,8,16")
    v.add_argument("--refine", type=int, default=0, help="grid refinement level (renyi)")

    c = sub.add_parser("constant", parents=[common, grid], help="evaluate a closed-form constant")
    c.add_argument("--name", required=True, choices=CONSTANTS)

    m = sub.add_parser("moment", parents=[common, grid, coeffs], help="negative moment E|S|^-p")
    m.add_argument("--method", choices=MOMENT_METHODS, default="quad")
    m.add_argument("--samples", type=int, default=1_000_000)
    m.add_argument("--seed", type=int, default=DEFAULT_SEED)
    m.add_argument("--tol", type=float, default=1e-9)

    sub.add_parser("table1", parents=[common], help="certified Table 1 differences d-(j), d+(j)")

    s = sub.add_parser("sweep", parents=[common, grid], help="plot data as CSV")
    s.add_argument("--what", choices=SWEEPS, default="constants")
    return parser


_DEFAULT_FMT = {"verify": "json", "constant": "human", "moment": "human", "table1": "human", "sweep": "csv"}


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    p = None
    if getattr(ns, "p", None) is not None and getattr(ns, "p_range", None) is not None:
        raise InputError("give either --p or --p-range, not both")
    if getattr(ns, "p", None) is not None:
        p = parse_floats(ns.p)
    elif getattr(ns, "p_range", None) is not None:
        p = parse_range(ns.p_range)
    s = parse_range(ns.s_range) if getattr(ns, "s_range", None) else None
    vecs = []
    for item in getattr(ns, "coeffs", None) or ():
        vecs.append(parse_floats(item))
    if getattr(ns, "coeffs_file", None):
        vecs.extend(read_coeff_file(ns.coeffs_file))
    n_list = None
    if getattr(ns, "n_list", None):
        n_list = tuple(int(v) for v in parse_floats(ns.n_list))
    kw = {}
    for key in ("lemma", "name", "method", "samples", "seed", "tol", "refine", "trials", "instances", "n_max", "what"):
        if getattr(ns, key, None) is not None:
            kw[key] = getattr(ns, key)
    return RunConfig(
        command=ns.command,
        p=p,
        s=s,
        coeffs=tuple(vecs),
        n_list=n_list,
        fmt=ns.fmt or _DEFAULT_FMT[ns.command],
        output=ns.output,
        timing=ns.timing,
        **kw,
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return int(exc.code or 0)
    try:
        cfg = config_from_args(ns)
        result = run(cfg)
    except (InputError, DomainError, RangeError, ValueError) as exc:
        print(f"steinhaus: error: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except ConvergenceError as exc:
        print(f"steinhaus: inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    if cfg.output:
        Path(cfg.output).write_text(result.text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(result.text)
        sys.stdout.flush()
    return result.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
