"""Command-line front end: ``ising-lab verify | scan | charges``.

A config file is TOML with the same keys as the long flags (dashes become
underscores); flags given on the command line win::

    n_sites = 4
    omega = [0.1, 0.3, 0.5]
    floquet_t = [0.2]
    h = [0.7, 2.0]
    j = [0.5]
    suite = ["duality", "algebra"]
    tolerance = 1e-10
    seed = 1234
    format = "json"
    out = "report.json"
    mutation = ["kw_plus_sign"]
"""

from __future__ import annotations

import argparse
import contextvars
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import __version__, charges, circuits, duality, fermion, lax, mutation
from .errors import ContractError, IsingLabError, ResourceError
from .linalg import mat_inv
from .pauli import max_dense_qubits
from .report import CheckReport, _jsonable, rel_residual

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

SUITES = ("ybe", "rtt", "transfer-commute", "circuit-identities", "duality", "algebra",
          "floquet", "charges", "onsager")
FORMATS = ("json", "csv", "text")
DEFAULT_FORMAT = {"verify": "text", "scan": "csv", "charges": "json"}


@dataclass
class RunConfig:
    n_sites: int = 3
    omega: list[float] = field(default_factory=lambda: [0.1, 0.3])
    floquet_t: list[float] = field(default_factory=lambda: [0.2])
    h: list[float] = field(default_factory=lambda: [0.7, 2.0])
    j: list[float] = field(default_factory=lambda: [0.5, 0.7])
    suite: list[str] = field(default_factory=lambda: list(SUITES))
    tolerance: float | None = None
    out: str | None = None
    format: str | None = None
    seed: int = 1234
    mutation: list[str] = field(default_factory=list)
    workers: int = 4

    def validate(self, dense: bool = True) -> "RunConfig":
        if dense and not 2 <= self.n_sites <= 6:
            raise ContractError(f"n_sites must lie in [2, 6] for dense suites, got {self.n_sites}")
        if dense and self.n_sites + 1 > max_dense_qubits():
            raise ResourceError(f"{self.n_sites + 1} qubits exceeds ISING_LAB_MAX_QUBITS={max_dense_qubits()}")
        for name in ("omega", "floquet_t", "h", "j", "suite"):
            if not getattr(self, name):
                raise ContractError(f"grid {name!r} is empty")
        bad = set(self.suite) - set(SUITES)
        if bad:
            raise ContractError(f"unknown suites {sorted(bad)}; choose from {', '.join(SUITES)}")
        if self.format is not None and self.format not in FORMATS:
            raise ContractError(f"format must be one of {FORMATS}")
        bad = set(self.mutation) - mutation.KNOWN
        if bad:
            raise ContractError(f"unknown mutations {sorted(bad)}; known: {sorted(mutation.KNOWN)}")
        return self


def load_config(path: str | None, overrides: dict) -> RunConfig:
    data = {}
    if path:
        with open(path, "rb") as fh:
            data = {k.replace("-", "_"): v for k, v in tomllib.load(fh).items()}
        known = set(RunConfig.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ContractError(f"unknown config keys {sorted(unknown)}")
    data.update({k: v for k, v in overrides.items() if v is not None})
    for key in ("omega", "floquet_t", "h", "j", "suite", "mutation"):
        if key in data and not isinstance(data[key], list):
            data[key] = [data[key]]
    return RunConfig(**data)


# -- suites --------------------------------------------------------------------

Task = tuple[str, Callable[[], list[CheckReport]]]


def _suite_tasks(name: str, cfg: RunConfig) -> list[Task]:
    N = cfg.n_sites
    rng = np.random.default_rng(cfg.seed)
    tasks: list[Task] = []
    add = lambda tid, fn: tasks.append((tid, fn))
    if name == "ybe":
        pts = rng.uniform(-1, 1, size=(100, 2))
        add("lax.ybe", lambda: [lax.ybe_check(l, m) for l, m in pts])
    elif name in ("rtt", "transfer-commute"):
        etas = [lax.Inhomogeneity.staggered(N, w) for w in cfg.omega]
        etas += [lax.Inhomogeneity.random(N, rng) for _ in range(3)]
        lm = rng.uniform(-1, 1, size=(len(etas), 2))
        check = lax.rtt_check if name == "rtt" else lax.transfer_commute_check
        for k, eta in enumerate(etas):
            add(f"lax.{name}.{k}", lambda eta=eta, k=k: [check(lm[k, 0], lm[k, 1], eta)])
    elif name == "circuit-identities":
        add("fermion.clifford", lambda: [fermion.clifford_check(N)])
        add("lax.twisted_translation", lambda: [lax.twisted_translation_check(N)])
        for w in cfg.omega:
            add(f"circuits.transfer.{w}", lambda w=w: circuits.transfer_identity_suite(w, N))
    elif name == "duality":
        add("duality.D", lambda: duality.continuous_algebra(N))
        for w in cfg.omega:
            om = float(np.tanh(w))
            add(f"duality.layers.{w}", lambda om=om: duality.layer_actions(om, N))
            add(f"duality.route.{w}", lambda w=w: [duality.kw_transfer_route_check(w, s, N) for s in "+-"])
            for c in sorted(set(cfg.h) | set(cfg.j)):
                add(f"duality.generic.{w}.{c}", lambda om=om, c=c:
                    [duality.duality_on_generic_circuit(om, s, c, N) for s in "-+"])
    elif name == "algebra":
        for w in cfg.omega:
            add(f"duality.algebra.{w}", lambda w=w: duality.algebra_suite(float(np.tanh(w)), N))
    elif name == "floquet":
        for t in cfg.floquet_t:
            add(f"floquet.phase_link.{t}", lambda t=t: duality.floquet_phase_link(t, N))
            if abs(t) >= np.pi / 4:
                continue  # tan-linked relations are only defined inside the window
            for h in cfg.h:
                for j in cfg.j:
                    add(f"floquet.suite.{t}.{h}.{j}", lambda t=t, h=h, j=j: duality.floquet_duality_suite(t, h, j, N))
    elif name == "charges":
        if N > 5:
            raise ResourceError("charge oracle needs N <= 5")
        for w in cfg.omega:
            add(f"charges.commute.{w}", lambda w=w: charges.commutation_suite(w, N))
            for r, maker in ((1, charges.closed_q1), (2, charges.closed_q2)):
                for s in "+-":
                    lam0 = w / 2 if s == "+" else -w / 2
                    add(f"charges.oracle.{r}{s}.{w}", lambda w=w, r=r, maker=maker, s=s, lam0=lam0:
                        [charges.compare_to_oracle(maker(s, w, N), r, lam0, w)])
        add("charges.limits", lambda: charge_limit_checks(N))
    elif name == "onsager":
        add("onsager.dolan_grady", lambda: charges.dolan_grady_check(N))

        def relations():
            fam = charges.onsager_recursion(3, min(N, 5))
            return charges.onsager_relations(fam, 3) + charges.onsager_commuting_family(fam, 3)
        add("onsager.relations", relations)
        for w in cfg.omega:
            beta = np.arctan(np.tanh(w))
            if 0 < abs(w) <= 0.3 and N * beta < np.pi / 2:
                add(f"onsager.transfer.{w}", lambda w=w: charges.onsager_from_transfer(w, N)[2])
    return tasks


def charge_limit_checks(N: int) -> list[CheckReport]:
    """``Q1_+-(0) = H``, ``Q2_+-(0) = Q_2`` and the quadratic audit, all at the sparse level."""
    out = []
    h, q2 = charges.closed_qr(1, N).operator, charges.closed_qr(2, N).operator
    for s in "+-":
        name = "plus" if s == "+" else "minus"
        out.append(CheckReport.make(f"charges.limit.Q1_{name}", "Q1_+-(0) = H", {"N": N},
                                    (charges.closed_q1(s, 0.0, N).operator - h).max_coeff(), 0.0))
        out.append(CheckReport.make(f"charges.limit.Q2_{name}", "Q2_+-(0) = Q_2", {"N": N},
                                    (charges.closed_q2(s, 0.0, N).operator - q2).max_coeff(), 0.0))
    qs = [charges.closed_q1(s, 0.3, N) for s in "+-"] + [charges.closed_q2(s, 0.3, N) for s in "+-"]
    bad = sum(not charges.is_quadratic(q) for q in qs)
    out.append(CheckReport.make("charges.quadratic", "all charges are Majorana bilinears", {"N": N}, bad, 0.0))
    return out


def _failed(tid: str, exc: BaseException) -> CheckReport:
    return CheckReport(tid, "", {}, float("inf"), 0.0, 0.0, {"error": f"{type(exc).__name__}: {exc}"})


def _retol(rep: CheckReport, tol: float | None) -> CheckReport:
    # exact checks (tolerance 0) and oracle checks keep their own tolerance
    if tol is None or rep.tolerance == 0.0 or rep.id.startswith("charges.oracle"):
        return rep
    return CheckReport(rep.id, rep.paper_anchor, rep.params, rep.residual, tol, rep.wall_time_ms, rep.metadata)


def run_verify(cfg: RunConfig) -> list[CheckReport]:
    """Run the selected suites on a thread pool; reports come back sorted by id."""
    cfg.validate()
    with mutation.inject(*cfg.mutation):
        tasks = [t for name in cfg.suite for t in _suite_tasks(name, cfg)]

        def run(task):
            tid, fn = task
            try:
                return fn()
            except Exception as exc:  # a crashing check is a failing check
                return [_failed(tid, exc)]

        with ThreadPoolExecutor(max_workers=max(1, cfg.workers)) as pool:
            futures = [pool.submit(contextvars.copy_context().run, run, t) for t in tasks]
            reports = [r for f in futures for r in f.result()]
    reports = [_retol(r, cfg.tolerance) for r in reports]
    return sorted(reports, key=lambda r: (r.id, json.dumps(_jsonable(r.params), sort_keys=True)))


def render_reports(reports: list[CheckReport], fmt: str, cfg: RunConfig | None = None) -> str:
    if fmt == "json":
        doc = {"version": __version__, "config": asdict(cfg) if cfg else None,
               "summary": {"total": len(reports), "failed": sum(not r.passed for r in reports)},
               "checks": [r.to_dict() for r in reports]}
        return json.dumps(doc, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["id", "residual", "tolerance", "pass", "wall_time_ms", "params"])
        for r in reports:
            w.writerow([r.id, f"{r.residual:.6e}", r.tolerance, r.passed, f"{r.wall_time_ms:.2f}",
                        json.dumps(_jsonable(r.params), sort_keys=True)])
        return buf.getvalue()
    lines = [r.line() + (f"  [{r.metadata['error']}]" if "error" in r.metadata else "") for r in reports]
    failed = [r.id for r in reports if not r.passed]
    lines.append(f"{len(reports) - len(failed)}/{len(reports)} checks passed")
    if failed:
        lines.append("failed: " + ", ".join(sorted(set(failed))))
    return "\n".join(lines)


# -- scan ------------------------------------------------------------------------

SCAN_COLUMNS = ["study", "N", "param", "value", "n", "metric", "note"]


def run_scan(cfg: RunConfig, steps=(4, 8, 16, 32, 64), window_points: int = 9) -> list[dict]:
    """Trotter-order scaling at ``t = 1`` and a sweep of the Floquet window.

    Inside the window the phase link is evaluated and the transfer-matrix
    route is compared with ``omega = artanh(tan t)``; just outside it only
    the product forms are evaluated.
    """
    cfg.validate()
    N = cfg.n_sites
    proj = fermion.projector_even(N).to_dense()
    rows = []
    for order, sign, study in ((1, "-", "trotter_first"), (2, "-", "trotter_second_minus"),
                               (2, "+", "trotter_second_plus")):
        prev = None
        for n in steps:
            e = circuits.trotter_error(1.0, n, 1.0, 1.0, order, N, sign)
            note = "" if prev is None else f"ratio={prev / e:.4f}"
            rows.append(dict(study=study, N=N, param="t", value=1.0, n=n, metric=e, note=note))
            prev = e
    ts = list(np.linspace(0.0, np.pi / 4, window_points)) + [np.pi / 4 + 0.01]
    for t in ts:
        inside = t <= np.pi / 4
        res = max(r.residual for r in duality.floquet_phase_link(t, N))
        rows.append(dict(study="floquet_phase_link", N=N, param="t", value=float(t), n=1, metric=res,
                         note="inside-window" if inside else "outside-window"))
        if 0 < t < np.pi / 4:
            w = float(np.arctanh(np.tan(t)))
            cal = mat_inv(lax.tau_staggered(-w / 2, w, N)) @ lax.tau_staggered(w / 2, w, N)
            rows.append(dict(study="floquet_transfer_link", N=N, param="t", value=float(t), n=1,
                             metric=rel_residual(cal @ proj, np.exp(-2j * N * t) * circuits.floquet(t, 1.0, 1.0, N) @ proj),
                             note="omega=artanh(tan t)"))
        elif t > np.pi / 4:
            rows.append(dict(study="floquet_transfer_link", N=N, param="t", value=float(t), n=1,
                             metric=float("nan"), note="outside-window: skipped"))
    return rows


def render_scan(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_jsonable(rows), indent=2)
    if fmt == "text":
        return "\n".join(f"{r['study']:<24s} N={r['N']} {r['param']}={r['value']:.4f} n={r['n']:<3d} "
                         f"{r['metric']:.4e} {r['note']}" for r in rows)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SCAN_COLUMNS)
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


# -- entry point -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML config file; flags override it")
    common.add_argument("--n-sites", type=int, dest="n_sites")
    common.add_argument("--omega", type=float, nargs="+", help="inhomogeneity grid (Omega = tanh omega)")
    common.add_argument("--floquet-t", type=float, nargs="+", dest="floquet_t")
    common.add_argument("--h", type=float, nargs="+")
    common.add_argument("--j", type=float, nargs="+")
    common.add_argument("--suite", nargs="+", choices=SUITES)
    common.add_argument("--tolerance", type=float, help="override for non-exact algebraic checks")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--seed", type=int)
    common.add_argument("--mutation", nargs="+", choices=sorted(mutation.KNOWN),
                        help="inject known defects to confirm the checks can fail")
    common.add_argument("--workers", type=int)

    parser = argparse.ArgumentParser(prog="ising-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="run identity suites; exit 0 iff all pass")
    sub.add_parser("scan", parents=[common], help="Trotter scaling and Floquet window sweep (CSV)")
    sub.add_parser("charges", parents=[common], help="charge table (JSON)")
    return parser


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        cfg = load_config(args.config, overrides)
        fmt = cfg.format or DEFAULT_FORMAT[args.command]
        if args.command == "verify":
            reports = run_verify(cfg)
            _emit(render_reports(reports, fmt, cfg), cfg.out)
            return 0 if all(r.passed for r in reports) else 1
        if args.command == "scan":
            _emit(render_scan(run_scan(cfg), fmt), cfg.out)
            return 0
        cfg.validate()
        if any(abs(w) > 0.5 for w in cfg.omega):
            raise ContractError("charges need |omega| <= 0.5")
        with mutation.inject(*cfg.mutation):
            rows = charges.charge_table(tuple(cfg.omega), min(cfg.n_sites, 5))
        _emit(json.dumps(_jsonable(rows), indent=2), cfg.out)
        return 0 if all("error" not in r["residuals"] for r in rows) else 1
    except (IsingLabError, ValueError, OSError, tomllib.TOMLDecodeError) as exc:
        print(f"ising-lab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
