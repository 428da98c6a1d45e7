"""Command-line driver: identity verification, certificate replay, and
truncated-series checks, with reproducible seeds and machine-readable reports.

Exit status: 0 when every selected check passed, 1 on any failure, 2 on
configuration errors.  Reports are deterministic for a fixed config modulo
the elapsed_s timing fields.  Counterexample points are printed as exact
fractions.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .qcore import PoleError
from . import identities as ident
from . import certs
from . import psers

DEFAULT_TRIALS = 20
DEFAULT_SEED = 42
SERIES_DEFAULT_TRIALS = 5
SERIES_DEFAULT_ORDER = 60
CERT_DEFAULT_TRIALS = 10
CERT_REPLAY_N_MAX = 5


@dataclass
class RunConfig:
    command: str
    identity_ids: Tuple[str, ...] = ()
    proof_ids: Tuple[str, ...] = ()
    series_ids: Tuple[str, ...] = ()
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    n_max: int = 6
    m_max: int = 4
    r_max: int = 3
    order: int = SERIES_DEFAULT_ORDER
    series_trials: int = SERIES_DEFAULT_TRIALS
    cert_trials: int = CERT_DEFAULT_TRIALS
    max_abs: int = ident.DEFAULT_SIZE_BOUND
    jobs: int = 1
    fmt: str = "text"
    out: Optional[str] = None

    def echo(self) -> Dict:
        return {
            "command": self.command,
            "identities": list(self.identity_ids),
            "proofs": list(self.proof_ids),
            "series": list(self.series_ids),
            "trials": self.trials,
            "cert_trials": self.cert_trials,
            "series_trials": self.series_trials,
            "seed": self.seed,
            "n_max": self.n_max,
            "m_max": self.m_max,
            "r_max": self.r_max,
            "order": self.order,
            "max_abs": self.max_abs,
            "jobs": self.jobs,
        }


class ConfigError(Exception):
    pass


def _progress(message: str) -> None:
    print(message, file=sys.stderr)


# ---------------------------------------------------------------------------
# per-item runners
# ---------------------------------------------------------------------------

_MULTISUM_IDS = ("schlosser_cr", "cr_prop_1", "cr_prop_2")


def _identity_ranges(identity_id: str, config: RunConfig) -> Dict[str, Tuple[int, int]]:
    if identity_id in _MULTISUM_IDS:
        return {"n": (0, min(config.n_max, 3)), "r": (1, config.r_max)}
    if identity_id == "schlosser_lemma_n1":
        return {"r": (1, config.r_max)}
    return {"n": (0, config.n_max), "m": (0, config.m_max)}


def _verify_item(identity_id: str, config: RunConfig) -> Dict:
    ranges = _identity_ranges(identity_id, config)
    noisy = identity_id in _MULTISUM_IDS and config.r_max >= 3
    if noisy:
        _progress("# %s: multi-sum verification up to r=%d"
                  % (identity_id, config.r_max))
    item = {"kind": "identity", "id": identity_id, "status": "PASS",
            "trials": config.trials, "succeeded": 0, "rejected": 0,
            "point_rejections": 0, "first_failure": None, "elapsed_s": 0.0}
    start = time.monotonic()
    try:
        report = ident.verify(identity_id, config.trials, config.seed, ranges,
                              size_bound=config.max_abs, jobs=config.jobs)
    except ident.CounterexampleFound as exc:
        rep = exc.report
        item.update(status="FAIL", succeeded=rep.succeeded,
                    rejected=rep.rejected,
                    point_rejections=rep.point_rejections,
                    first_failure=rep.counterexample)
    except ident.RetryExhausted as exc:
        item.update(status="ERROR", first_failure={"error": str(exc)})
    else:
        item.update(succeeded=report.succeeded, rejected=report.rejected,
                    point_rejections=report.point_rejections)
    item["elapsed_s"] = round(time.monotonic() - start, 6)
    return item


def _certificate_checks(cert: certs.ProofCertificate, point, config: RunConfig
                        ) -> Tuple[Dict[str, int], Optional[Dict]]:
    """Run every check for one sampled point; returns (counts, failure)."""
    counts = {"term_recurrence": 0, "telescoping": 0, "boundary": 0, "replay": 0}

    def fail(check: str, **extra) -> Dict:
        info = {"check": check, "point": ident.serialize_point(point)}
        info.update(extra)
        return info

    if cert.multi:
        r = point.idx("r")
        sweep_n = min(config.n_max, certs.SCHLOSSER_REPLAY_MAX_N)
        for n in range(1, sweep_n + 1):
            for ks in itertools.product(range(n + 1), repeat=r):
                if certs.term_recurrence_residual(cert, point, n, ks) != 0:
                    return counts, fail("term_recurrence", n=n, k=list(ks))
                counts["term_recurrence"] += 1
        if not certs.inductive_replay(cert, point, min(config.n_max,
                                                       CERT_REPLAY_N_MAX)):
            return counts, fail("inductive_replay")
        counts["replay"] += 1
        return counts, None

    for n in range(cert.order, config.n_max + 1):
        for k in range(n + 1):
            if certs.term_recurrence_residual(cert, point, n, k) != 0:
                return counts, fail("term_recurrence", n=n, k=k)
            counts["term_recurrence"] += 1
    if cert.anti_diff is not None:
        for n in range(cert.order, config.n_max + 1):
            for k in range(n + 1):
                if certs.telescoping_residual(cert, point, n, k) != 0:
                    return counts, fail("telescoping", n=n, k=k)
                counts["telescoping"] += 1
            if not certs.boundary_check(cert, point, n):
                return counts, fail("boundary", n=n)
            counts["boundary"] += 1
    if not certs.inductive_replay(cert, point, min(config.n_max,
                                                   CERT_REPLAY_N_MAX)):
        return counts, fail("inductive_replay")
    counts["replay"] += 1
    return counts, None


def _certify_item(proof_id: str, config: RunConfig) -> Dict:
    cert = certs.get_certificate(proof_id)
    item = {"kind": "certificate", "id": proof_id, "status": "PASS",
            "trials": config.cert_trials, "succeeded": 0, "rejected": 0,
            "checks": {"term_recurrence": 0, "telescoping": 0,
                       "boundary": 0, "replay": 0},
            "first_failure": None, "elapsed_s": 0.0}
    start = time.monotonic()
    if cert.multi and config.r_max >= 3:
        _progress("# %s: certificate sweep up to r=%d" % (proof_id, config.r_max))
    for trial in range(config.cert_trials):
        rng = random.Random(ident.derive_trial_seed(
            config.seed, "cert:%s" % proof_id, trial))
        done = False
        for _ in range(ident.DEFAULT_RETRY_CAP):
            point = certs.sample_certificate_point(
                cert, rng, config.max_abs, (1, min(config.r_max, 3)))
            try:
                counts, failure = _certificate_checks(cert, point, config)
            except PoleError:
                item["rejected"] += 1
                continue
            for key, value in counts.items():
                item["checks"][key] += value
            if failure is not None:
                item["status"] = "FAIL"
                item["first_failure"] = failure
                item["elapsed_s"] = round(time.monotonic() - start, 6)
                return item
            item["succeeded"] += 1
            done = True
            break
        if not done and item["succeeded"] == 0 and trial == config.cert_trials - 1:
            item["status"] = "ERROR"
            item["first_failure"] = {"error": "pole retries exhausted"}
    item["elapsed_s"] = round(time.monotonic() - start, 6)
    return item


def _series_symbols(series_id: str, rng: random.Random, bound: int
                    ) -> Dict[str, Fraction]:
    if series_id == "lebesgue_inf":
        return {"a": ident.random_rational(rng, bound)}
    if series_id == "q_kummer":
        return {"a": ident.random_rational(rng, bound),
                "b": ident.random_rational(rng, bound)}
    return {"z": ident.random_rational(rng, bound)}


def _series_item(series_id: str, config: RunConfig) -> Dict:
    item = {"kind": "series", "id": series_id, "status": "PASS",
            "order": config.order, "trials": config.series_trials,
            "succeeded": 0, "first_failure": None, "elapsed_s": 0.0}
    start = time.monotonic()
    for trial in range(config.series_trials):
        rng = random.Random(ident.derive_trial_seed(
            config.seed, "series:%s" % series_id, trial))
        symbols = _series_symbols(series_id, rng, config.max_abs)
        try:
            residual = psers.infinite_identity_residual(
                series_id, symbols, config.order)
        except (PoleError, psers.NonTerminatingExponent) as exc:
            item["status"] = "ERROR"
            item["first_failure"] = {"error": str(exc)}
            break
        if not residual.is_zero():
            first_bad = next(i for i, c in enumerate(residual.coeffs) if c != 0)
            item["status"] = "FAIL"
            item["first_failure"] = {
                "symbols": {k: str(v) for k, v in sorted(symbols.items())},
                "first_nonzero_order": first_bad,
                "coefficient": str(residual.coeffs[first_bad]),
            }
            break
        item["succeeded"] += 1
    item["elapsed_s"] = round(time.monotonic() - start, 6)
    return item


# ---------------------------------------------------------------------------
# orchestration
# ---------------------------------------------------------------------------

def _resolve_selection(requested: Sequence[str], known: Sequence[str],
                       what: str) -> Tuple[str, ...]:
    if not requested or "all" in requested:
        return tuple(known)
    out = []
    for name in requested:
        if name not in known and not (what == "identity"
                                      and name == "lebesgue_finite_2"):
            raise ConfigError("unknown %s %r (known: %s)"
                              % (what, name, ", ".join(known)))
        out.append(name)
    return tuple(out)


def run(config: RunConfig) -> Tuple[int, Dict]:
    """Execute the configured checks; returns (exit_status, report)."""
    items: List[Dict] = []
    if config.command in ("verify", "all"):
        for identity_id in config.identity_ids:
            items.append(_verify_item(identity_id, config))
    if config.command in ("certify", "all"):
        for proof_id in config.proof_ids:
            items.append(_certify_item(proof_id, config))
    if config.command in ("series", "all"):
        for series_id in config.series_ids:
            items.append(_series_item(series_id, config))
    summary = {
        "total": len(items),
        "passed": sum(1 for i in items if i["status"] == "PASS"),
        "failed": sum(1 for i in items if i["status"] == "FAIL"),
        "errors": sum(1 for i in items if i["status"] == "ERROR"),
    }
    report = {"config": config.echo(), "items": items, "summary": summary}
    status = 0 if summary["passed"] == summary["total"] else 1
    return status, report


def format_report(report: Dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    lines = []
    for item in report["items"]:
        label = "%s %s" % (item["kind"], item["id"])
        if item["kind"] == "identity":
            detail = "trials=%d/%d rejects=%d" % (
                item["succeeded"], item["trials"], item["point_rejections"])
        elif item["kind"] == "certificate":
            detail = ("points=%d/%d residuals=%d" % (
                item["succeeded"], item["trials"],
                item["checks"]["term_recurrence"] + item["checks"]["telescoping"]))
        else:
            detail = "order=%d specializations=%d/%d" % (
                item["order"], item["succeeded"], item["trials"])
        lines.append("%-4s %-42s %s (%.2fs)" % (
            item["status"], label, detail, item["elapsed_s"]))
        if item["first_failure"]:
            lines.append("     first failure: %s"
                         % json.dumps(item["first_failure"], sort_keys=True))
    s = report["summary"]
    lines.append("summary: %d total, %d passed, %d failed, %d errors"
                 % (s["total"], s["passed"], s["failed"], s["errors"]))
    return "\n".join(lines) + "\n"


def _emit(report: Dict, config: RunConfig) -> None:
    text = format_report(report, config.fmt)
    if config.out:
        with open(config.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _int_env(name: str, fallback: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError:
        raise ConfigError("environment variable %s=%r is not an integer"
                          % (name, raw))


def build_parser(default_seed: int, default_trials: int) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qident",
        description="Exact verification of terminating q-series identities, "
                    "proof-certificate replay, and truncated-series checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=default_seed)
        p.add_argument("--max-abs", type=int, default=ident.DEFAULT_SIZE_BOUND,
                       help="numerator/denominator size bound for samples")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--format", dest="fmt", choices=("text", "json"),
                       default="text")
        p.add_argument("--out", default=None, help="write the report here "
                       "instead of standard output")

    pv = sub.add_parser("verify", help="verify terminating identities")
    pv.add_argument("--id", action="append", default=None,
                    help="identity id or 'all' (repeatable)")
    pv.add_argument("--trials", type=int, default=default_trials)
    pv.add_argument("--n-max", type=int, default=6)
    pv.add_argument("--m-max", type=int, default=4)
    pv.add_argument("--r-max", type=int, default=3)
    common(pv)

    pc = sub.add_parser("certify", help="replay proof certificates")
    pc.add_argument("--proof", action="append", default=None,
                    help="proof id or 'all' (repeatable)")
    pc.add_argument("--trials", type=int, default=CERT_DEFAULT_TRIALS)
    pc.add_argument("--n-max", type=int, default=CERT_REPLAY_N_MAX)
    pc.add_argument("--r-max", type=int, default=3)
    common(pc)

    ps = sub.add_parser("series", help="check limiting product identities")
    ps.add_argument("--id", action="append", default=None,
                    help="series id or 'all' (repeatable)")
    ps.add_argument("--trials", type=int, default=SERIES_DEFAULT_TRIALS)
    ps.add_argument("--order", type=int, default=SERIES_DEFAULT_ORDER)
    common(ps)

    pa = sub.add_parser("all", help="run every registered check")
    pa.add_argument("--trials", type=int, default=default_trials)
    pa.add_argument("--cert-trials", type=int, default=CERT_DEFAULT_TRIALS)
    pa.add_argument("--series-trials", type=int, default=SERIES_DEFAULT_TRIALS)
    pa.add_argument("--n-max", type=int, default=6)
    pa.add_argument("--m-max", type=int, default=4)
    pa.add_argument("--r-max", type=int, default=3)
    pa.add_argument("--order", type=int, default=SERIES_DEFAULT_ORDER)
    common(pa)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    command = args.command
    config = RunConfig(command=command, seed=args.seed, max_abs=args.max_abs,
                       jobs=args.jobs, fmt=args.fmt, out=args.out)
    if command == "verify":
        config.identity_ids = _resolve_selection(
            args.id or (), ident.identity_ids(), "identity")
        config.trials = args.trials
        config.n_max, config.m_max, config.r_max = args.n_max, args.m_max, args.r_max
    elif command == "certify":
        config.proof_ids = _resolve_selection(
            args.proof or (), certs.certificate_ids(), "proof")
        config.cert_trials = args.trials
        config.n_max = args.n_max
        config.r_max = args.r_max
    elif command == "series":
        config.series_ids = _resolve_selection(
            args.id or (), psers.SERIES_IDENTITIES, "series identity")
        config.series_trials = args.trials
        config.order = args.order
    else:
        config.identity_ids = tuple(ident.identity_ids())
        config.proof_ids = tuple(certs.certificate_ids())
        config.series_ids = tuple(psers.SERIES_IDENTITIES)
        config.trials = args.trials
        config.cert_trials = args.cert_trials
        config.series_trials = args.series_trials
        config.n_max, config.m_max, config.r_max = args.n_max, args.m_max, args.r_max
        config.order = args.order
    return config


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        default_seed = _int_env("QIDENT_SEED", DEFAULT_SEED)
        default_trials = _int_env("QIDENT_TRIALS", DEFAULT_TRIALS)
    except ConfigError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    parser = build_parser(default_seed, default_trials)
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except ConfigError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    status, report = run(config)
    _emit(report, config)
    return status


if __name__ == "__main__":
    sys.exit(main())
