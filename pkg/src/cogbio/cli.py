"""Operator command line: security tables, simulations, attacks, biometrics, serving.

Every command is deterministic under --seed. Exit codes: 0 ok, 2 usage
error (including bad scheme parameters), 3 data error, 4 work budget
exceeded. With --json, errors also go to stdout as {"error": ...} so
scripted callers never have to scrape stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import AnalysisRow, ball_search_estimate, security_table
from .attacks import (MODE_DEPENDENT, MODE_INDEPENDENT, attack_report,
                      brute_force_recover, frequency_analysis, ge_recover,
                      ge_slack_recover, mitm_recover)
from .biometric.features import FEATURE_NAMES, extract_features
from .biometric.selection import SelectionPair, get_z_list, select_features
from .biometric.template import (PURPOSE_SYM, PURPOSE_USER, TemplateBank,
                                 build_template, classify)
from .biometric.trace import parse_trace
from .errors import BudgetExceeded, DataError, ParamError
from .params import SchemeParams, new_params
from .scheme import Transcript
from .simulate import SimulationSpec, imposter_study, run_simulation

TABLE_ROWS = ((5, 5, 24, 60), (5, 10, 30, 130), (5, 14, 30, 180),
              (5, 18, 30, 225))

ATTACKS = ("bruteforce", "mitm", "ge", "ge-slack", "frequency", "ball")


def _parse_row(text: str) -> tuple[int, int, int, int]:
    parts = text.replace(",", ":").split(":")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(
            f"expected d:k:l:n, got {text!r}")
    try:
        d, k, l, n = (int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"non-integer field in {text!r}")
    return d, k, l, n


def _parse_features(text: str) -> tuple[str, ...]:
    names = tuple(s.strip() for s in text.split(",") if s.strip())
    if not names:
        raise argparse.ArgumentTypeError("empty feature list")
    return names


def _gather_trace_paths(paths: list[str]) -> list[Path]:
    out: list[Path] = []
    for p in paths:
        path = Path(p)
        if path.is_dir():
            out.extend(sorted(path.glob("*.jsonl")))
        else:
            out.append(path)
    if not out:
        raise DataError("no trace files found")
    return out


def _load_traces(paths: list[str]):
    traces = []
    for path in _gather_trace_paths(paths):
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise DataError(f"{path}: {exc}") from exc
        try:
            traces.append(parse_trace(text))
        except DataError as exc:
            raise DataError(f"{path}: {exc}") from exc
    return traces


def _load_features(paths: list[str]):
    return [extract_features(t) for t in _load_traces(paths)]


def _emit(args, payload: dict, text: str | None = None) -> None:
    if args.json or text is None:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _write_artifact(args, name: str, content: str) -> None:
    if args.out is None:
        return
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(content, encoding="utf-8")


# -- params ----------------------------------------------------------------

def _row_payload(row: AnalysisRow) -> dict:
    p = row.params
    return {
        "params": {"d": p.d, "k": p.k, "l": p.l, "n": p.n},
        "p_rg": row.p_rg,
        "m_it": row.m_it,
        "bruteforce_bits": row.bf_bits,
        "mitm_bits": row.mitm_bits,
        "ball": {"xi": row.ball_xi, "time_bits": row.ball_bits,
                 "samples": row.ball_samples},
        "ge_samples": row.ge_samples,
        "combined": {str(g): v for g, v in sorted(row.combined.items())},
    }


def _params_text(rows: list[AnalysisRow], gammas: tuple[int, ...]) -> str:
    head = (f"{'d':>3} {'k':>3} {'l':>3} {'n':>4} {'p_rg':>7} {'m_it':>5} "
            f"{'bf':>6} {'mitm':>6} {'ball':>11} {'ge':>6}")
    head += "".join(f" {'g=' + str(g):>9}" for g in gammas)
    lines = [head]
    for row in rows:
        p = row.params
        ball = f"{row.ball_bits:.0f}b/{row.ball_samples:.0f}"
        line = (f"{p.d:>3} {p.k:>3} {p.l:>3} {p.n:>4} {row.p_rg:>7.3f} "
                f"{row.m_it:>5} {row.bf_bits:>6.1f} {row.mitm_bits:>6.1f} "
                f"{ball:>11} {row.ge_samples:>6}")
        line += "".join(f" {row.combined[g]:>9.2e}" for g in gammas)
        lines.append(line)
    return "\n".join(lines)


def cmd_params(args) -> int:
    rows_in = args.row or [*TABLE_ROWS]
    params_list = [new_params(d=d, k=k, l=l, n=n) for d, k, l, n in rows_in]
    gammas = tuple(args.gamma or (1, 2, 3))
    rows = security_table(params_list, fpr_bar=args.fpr_bar,
                          gamma_list=gammas,
                          ball_budgets=args.ball_budget or None)
    payload = {"fpr_bar": args.fpr_bar,
               "rows": [_row_payload(r) for r in rows]}
    _emit(args, payload, _params_text(rows, gammas))
    _write_artifact(args, "security_table.json",
                    json.dumps(payload, indent=2, sort_keys=True))
    return 0


# -- simulate --------------------------------------------------------------

def cmd_simulate(args) -> int:
    d, k, l, n = args.params
    params = new_params(d=d, k=k, l=l, n=n, gamma=args.gamma, t=args.t)
    spec = SimulationSpec(params=params, n_users=args.users,
                          sessions_per_user=args.sessions, noise=args.noise,
                          seed=args.seed, n_points=args.n_points,
                          feature_subset=args.features,
                          z_sym=args.z_sym, z_user=args.z_user)
    if args.imposter_sessions:
        study = imposter_study(spec, args.imposter_sessions,
                               target_fpr=args.target_fpr)
        payload = {
            "sessions": study.sessions,
            "successes": study.successes,
            "observed_rate": study.observed_rate,
            "predicted_rate": study.predicted_rate,
            "sigma": study.sigma,
            "fpr_emp": study.fpr_emp,
            "p_rg": study.p_rg,
            "gamma": study.gamma,
            "z_sym": study.z_sym,
            "z_user": study.z_user,
        }
        text = (f"imposter sessions={study.sessions} "
                f"observed={study.observed_rate:.5f} "
                f"predicted={study.predicted_rate:.5f} "
                f"sigma={study.sigma:.5f} fpr={study.fpr_emp:.3f}")
        _emit(args, payload, text)
        _write_artifact(args, "imposter_study.json",
                        json.dumps(payload, indent=2, sort_keys=True))
        return 0

    result = run_simulation(spec, out_dir=args.out)
    payload = {
        "accept_rate": result.accept_rate,
        "verdicts": result.verdicts,
        "secrets": {u: sorted(s) for u, s in result.secrets.items()},
        "rounds_per_user": {u: len(t.rounds)
                            for u, t in result.transcripts.items()},
        "written": list(result.written),
    }
    text = (f"users={spec.n_users} sessions={spec.sessions_per_user} "
            f"accept_rate={result.accept_rate:.3f} "
            f"files={len(result.written)}")
    _emit(args, payload, text)
    return 0


# -- attack ----------------------------------------------------------------

def _load_transcript(path: str) -> Transcript:
    if path == "-":
        return Transcript.from_json(sys.stdin.read())
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"{path}: {exc}") from exc
    return Transcript.from_json(text)


def _candidate_report(name: str, cs, cap: int) -> str:
    recovered = len(cs) == 1
    secret = cs.candidates[0] if recovered else None
    return attack_report(
        name, recovered=recovered, secret=secret,
        work={"enumerated": cs.enumerated},
        stats={"candidates": len(cs),
               "candidate_list": [sorted(c) for c in cs.candidates[:cap]]})


def cmd_attack(args) -> int:
    transcript = _load_transcript(args.transcript)
    budget = args.budget
    name = args.name
    if name == "bruteforce":
        kwargs = {} if budget is None else {"max_candidates": int(2 ** budget)}
        report = _candidate_report(
            name, brute_force_recover(transcript, **kwargs), args.max_list)
    elif name == "mitm":
        kwargs = {} if budget is None else {"max_half": int(2 ** budget)}
        report = _candidate_report(
            name, mitm_recover(transcript, **kwargs), args.max_list)
    elif name in ("ge", "ge-slack"):
        run = ge_recover if name == "ge" else ge_slack_recover
        result = run(transcript)
        report = attack_report(
            name, recovered=result.recovered, secret=result.secret,
            work={"rows_used": result.rows_used,
                  "used_all_rounds": result.used_all_rounds},
            stats={"status": result.status,
                   "nullspace_dim": result.nullspace_dim,
                   "slack_rounds": len(result.slack)})
    elif name == "frequency":
        fr = frequency_analysis(transcript, delta=args.delta, mode=args.mode,
                                alpha=args.alpha)
        top = sorted(fr.stats.items(), key=lambda kv: -kv[1])[:args.max_list]
        report = attack_report(
            name, recovered=False, secret=None,
            work={"rounds": fr.rounds, "tuples": len(fr.counts)},
            stats={"mode": fr.mode, "delta": fr.delta, "alpha": fr.alpha,
                   "critical": fr.critical,
                   "flagged": [list(t) for t in fr.flagged],
                   "top": [{"tuple": list(t), "stat": s} for t, s in top]})
    elif name == "ball":
        # Estimator only: reports the cheapest radius fitting the budget,
        # never walks the candidate space.
        if budget is None:
            row = security_table([transcript.params])[0]
            budget = row.mitm_bits
        est = ball_search_estimate(transcript.params, budget)
        report = attack_report(
            name, recovered=False, secret=None,
            work={"budget_bits": budget, "time_bits": est.time_bits},
            stats={"xi": est.xi, "required_samples": est.required_samples,
                   "feasible": est.feasible})
    else:  # pragma: no cover - argparse choices guard this
        raise ParamError(f"unknown attack {name!r}")
    print(report)
    _write_artifact(args, f"attack_{name}.json", report)
    return 0


# -- biometric -------------------------------------------------------------

def _bank_from_traces(traces, features, z_sym: float,
                      z_user: float) -> TemplateBank:
    by_symbol: dict[str, list] = {}
    for trace in traces:
        if trace.symbol_label is None:
            raise DataError("trace without a symbol label; "
                            "add a header line to the file")
        by_symbol.setdefault(trace.symbol_label, []).append(
            extract_features(trace))
    sym_templates = {
        sym: build_template(samples, purpose=PURPOSE_SYM, z=z_sym)
        for sym, samples in by_symbol.items()
    }
    user_templates = {
        sym: build_template(samples, features, purpose=PURPOSE_USER, z=z_user)
        for sym, samples in by_symbol.items()
    }
    return TemplateBank(sym_templates=sym_templates,
                        user_templates=user_templates)


def cmd_biometric(args) -> int:
    if args.action == "train":
        bank = _bank_from_traces(_load_traces(args.traces), args.features,
                                 args.z_sym, args.z_user)
        text = bank.to_json()
        print(text)
        _write_artifact(args, "bank.json", text)
        return 0
    if args.action == "verify":
        try:
            bank_text = Path(args.bank).read_text(encoding="utf-8")
        except OSError as exc:
            raise DataError(f"{args.bank}: {exc}") from exc
        bank = TemplateBank.from_json(bank_text)
        (trace,) = _load_traces([args.trace])
        decision = classify(extract_features(trace), bank,
                            expected=args.expected)
        payload = {
            "accepted": decision.accepted,
            "symbol": decision.symbol,
            "stage": decision.stage,
            "sym_distance": decision.sym_distance,
            "user_distance": decision.user_distance,
        }
        _emit(args, payload,
              f"{'accept' if decision.accepted else 'reject'} "
              f"symbol={decision.symbol} stage={decision.stage}")
        _write_artifact(args, "decision.json",
                        json.dumps(payload, indent=2, sort_keys=True))
        return 0

    registration = _load_features(args.registration)
    user_tests = _load_features(args.user_tests)
    attacker_tests = _load_features(args.attacker_tests)
    if args.action == "zlist":
        entries = get_z_list(args.features, registration, user_tests,
                             attacker_tests)
        payload = {"features": list(args.features),
                   "entries": [{"z": e.z, "tpr": e.tpr, "fpr": e.fpr}
                               for e in entries]}
        _emit(args, payload,
              "\n".join(f"z={e.z:<6} tpr={e.tpr:.3f} fpr={e.fpr:.3f}"
                        for e in entries))
        _write_artifact(args, "zlist.json",
                        json.dumps(payload, indent=2, sort_keys=True))
        return 0
    if args.action == "select":
        pair = SelectionPair(registration=tuple(registration),
                             user_tests=tuple(user_tests),
                             attacker_tests=tuple(attacker_tests))
        pool = args.features if args.features else FEATURE_NAMES
        subset, z = select_features(pool, [pair])
        payload = {"features": list(subset), "z": z}
        _emit(args, payload, f"features={','.join(subset)} z={z}")
        _write_artifact(args, "selection.json",
                        json.dumps(payload, indent=2, sort_keys=True))
        return 0
    raise ParamError(f"unknown biometric action {args.action!r}")


# -- serve -----------------------------------------------------------------

def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app
    from .service.core import AuthService
    from .service.store import Store

    store = Store(args.store) if args.store else None
    service = AuthService(store=store, seed=args.seed)
    uvicorn.run(create_app(service), host=args.host, port=args.port,
                log_level="warning")
    return 0


# -- wiring ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cogbio",
        description="Cognitive challenge-response auth with a handwriting "
                    "verifier: tables, simulations, attacks, serving.")
    parser.add_argument("--seed", type=int, default=0,
                        help="master seed; fixed seed yields identical output")
    parser.add_argument("--out", type=str, default=None,
                        help="directory for artifact files")
    parser.add_argument("--json", action="store_true",
                        help="machine-readable stdout (errors included)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="security/usability table")
    p.add_argument("--row", type=_parse_row, action="append",
                   help="d:k:l:n, repeatable; default: four standard rows")
    p.add_argument("--fpr-bar", type=float, default=0.05)
    p.add_argument("--gamma", type=int, action="append",
                   help="session round count, repeatable; default 1 2 3")
    p.add_argument("--ball-budget", type=float, action="append",
                   help="search time budget in bits, one per row")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("simulate", help="synthetic users end to end")
    p.add_argument("--params", type=_parse_row, default=(5, 3, 6, 12),
                   help="d:k:l:n")
    p.add_argument("--gamma", type=int, default=2)
    p.add_argument("--t", type=int, default=3)
    p.add_argument("--users", type=int, default=2)
    p.add_argument("--sessions", type=int, default=2)
    p.add_argument("--noise", type=float, default=1.0)
    p.add_argument("--n-points", type=int, default=56)
    p.add_argument("--features", type=_parse_features,
                   default=("x", "y", "vx", "vy"))
    p.add_argument("--z-sym", type=float, default=6.0)
    p.add_argument("--z-user", type=float, default=6.0)
    p.add_argument("--imposter-sessions", type=int, default=0,
                   help="run a random-guess imposter study instead")
    p.add_argument("--target-fpr", type=float, default=0.3)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("attack", help="run an attack on a transcript export")
    p.add_argument("name", choices=ATTACKS)
    p.add_argument("transcript", help="transcript JSON path, or - for stdin")
    p.add_argument("--budget", type=float, default=None,
                   help="work budget in bits")
    p.add_argument("--max-list", type=int, default=50,
                   help="cap on listed candidates / top tuples")
    p.add_argument("--delta", type=int, default=1,
                   help="frequency: tuple width")
    p.add_argument("--mode", choices=(MODE_DEPENDENT, MODE_INDEPENDENT),
                   default=MODE_DEPENDENT, help="frequency: response model")
    p.add_argument("--alpha", type=float, default=0.01,
                   help="frequency: significance level")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("biometric", help="offline template workflows")
    act = p.add_subparsers(dest="action", required=True)

    a = act.add_parser("train", help="build a template bank from traces")
    a.add_argument("--traces", nargs="+", required=True,
                   help="trace files or directories of *.jsonl")
    a.add_argument("--features", type=_parse_features, default=None,
                   help="user-check feature subset; default: all available")
    a.add_argument("--z-sym", type=float, default=2.0)
    a.add_argument("--z-user", type=float, default=2.0)

    a = act.add_parser("verify", help="classify one trace against a bank")
    a.add_argument("--bank", required=True)
    a.add_argument("--trace", required=True)
    a.add_argument("--expected", default=None,
                   help="claimed symbol; default: nearest")

    for name, help_text in (("zlist", "threshold sweep for a feature subset"),
                            ("select", "greedy feature selection")):
        a = act.add_parser(name, help=help_text)
        a.add_argument("--features", type=_parse_features, default=None,
                       required=(name == "zlist"))
        a.add_argument("--registration", nargs="+", required=True)
        a.add_argument("--user-tests", nargs="+", required=True)
        a.add_argument("--attacker-tests", nargs="+", required=True)
    p.set_defaults(func=cmd_biometric)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--store", default=None,
                   help="append-only JSONL store path for durability")
    p.set_defaults(func=cmd_serve)
    return parser


def _fail(args, code: int, exc: Exception) -> int:
    payload = {"error": str(exc)}
    if isinstance(exc, BudgetExceeded) and exc.estimate_bits is not None:
        payload["estimate_bits"] = exc.estimate_bits
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True))
    else:
        detail = f" (estimated 2^{exc.estimate_bits:.1f} work)" \
            if payload.get("estimate_bits") is not None else ""
        print(f"error: {exc}{detail}", file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParamError as exc:
        return _fail(args, 2, exc)
    except DataError as exc:
        return _fail(args, 3, exc)
    except BudgetExceeded as exc:
        return _fail(args, 4, exc)


if __name__ == "__main__":
    sys.exit(main())
