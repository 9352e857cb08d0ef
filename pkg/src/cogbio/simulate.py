"""Synthetic end-to-end runs: enrollment, sessions, imposter studies.

Thresholds are generator-calibrated, not taken from human data: a probe
set of synthetic imposters fixes z_sym so a correctly drawn symbol passes
the shape check no matter who drew it (shape identity is the symbol
check's job), and fixes z_user at a chosen imposter-acceptance quantile so
the dynamics check has a measurable, tunable false-positive rate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .biometric.features import extract_features
from .biometric.symbols import SymbolSet, default_symbols
from .biometric.synth import UserStyle, render_trace, sample_user_style
from .biometric.template import (PURPOSE_SYM, build_template, multi_dtw)
from .biometric.trace import Trace, trace_to_jsonl
from .errors import ParamError
from .analysis import p_random_guess
from .params import SchemeParams
from .scheme import Transcript, response_sum
from .service.core import (AuthService, BIOMETRIC_PASS, COGNITIVE_CORRECT,
                           COGNITIVE_EMPTY_ANY, VERDICT_ACCEPT)

DEFAULT_SIM_FEATURES = ("x", "y", "vx", "vy")


@dataclass(frozen=True)
class SimulationSpec:
    params: SchemeParams
    n_users: int = 2
    sessions_per_user: int = 2
    noise: float = 1.0
    seed: int = 0
    style_spread: float = 0.06
    n_points: int = 56
    feature_subset: tuple[str, ...] = DEFAULT_SIM_FEATURES
    z_sym: float = 6.0
    z_user: float = 6.0
    include_motion: bool = True
    symbols: tuple[str, ...] | None = None

    def symbol_set(self) -> SymbolSet:
        if self.symbols is None:
            return default_symbols(self.params.d)
        return SymbolSet(names=self.symbols)


@dataclass(frozen=True)
class SimulationResult:
    spec: SimulationSpec
    accept_rate: float
    verdicts: dict[str, list[str]]          # user -> per-session verdicts
    transcripts: dict[str, Transcript]
    secrets: dict[str, frozenset[int]]
    service: AuthService
    written: tuple[str, ...] = ()


def _user_rng(seed: int, tag: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, 0xC0FFEE, tag)))


def _registration(spec: SimulationSpec, symbols: SymbolSet, style: UserStyle,
                  rng: np.random.Generator, user: str) -> dict[str, list[Trace]]:
    return {
        sym: [render_trace(sym, style, rng, noise=spec.noise,
                           n_points=spec.n_points,
                           include_motion=spec.include_motion,
                           user_label=user, session_label=f"reg{i}")
              for i in range(spec.params.t)]
        for sym in symbols.names
    }


def run_simulation(spec: SimulationSpec,
                   out_dir: str | Path | None = None) -> SimulationResult:
    params = spec.params
    symbols = spec.symbol_set()
    service = AuthService(seed=spec.seed)
    service.setup(params, symbols, z_sym=spec.z_sym, z_user=spec.z_user,
                  feature_subset=spec.feature_subset)

    verdicts: dict[str, list[str]] = {}
    transcripts: dict[str, Transcript] = {}
    secrets: dict[str, frozenset[int]] = {}
    written: list[str] = []
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)

    from .scheme import sample_secret
    for u in range(spec.n_users):
        user = f"user{u}"
        rng = _user_rng(spec.seed, u)
        style = sample_user_style(symbols.names, rng, spread=spec.style_spread)
        secret = sample_secret(params, rng)
        secrets[user] = secret
        renderings = _registration(spec, symbols, style, rng, user)
        service.register(user, secret, renderings)
        if out is not None:
            for sym, traces in renderings.items():
                for i, trace in enumerate(traces):
                    path = out / f"{user}_{sym}_reg{i}.jsonl"
                    path.write_text(trace_to_jsonl(trace), encoding="utf-8")
                    written.append(str(path))

        verdicts[user] = []
        for _ in range(spec.sessions_per_user):
            sid, challenge = service.start_session(user)
            for _round in range(params.gamma):
                r = response_sum(secret, challenge, params.d)
                if r is None:
                    r = int(rng.integers(params.d))
                trace = render_trace(symbols.symbol_for(r), style, rng,
                                     noise=spec.noise,
                                     n_points=spec.n_points,
                                     include_motion=spec.include_motion,
                                     user_label=user, session_label=sid)
                result = service.submit_response(sid, trace)
                challenge = result.next_challenge
            verdicts[user].append(result.verdict)
        transcripts[user] = service.export_transcript(user)
        if out is not None:
            path = out / f"{user}_transcript.json"
            path.write_text(transcripts[user].to_json(), encoding="utf-8")
            written.append(str(path))

    total = sum(len(v) for v in verdicts.values())
    accepted = sum(v.count(VERDICT_ACCEPT) for v in verdicts.values())
    result = SimulationResult(spec=spec,
                              accept_rate=accepted / total if total else 0.0,
                              verdicts=verdicts, transcripts=transcripts,
                              secrets=secrets, service=service,
                              written=tuple(written))
    if out is not None:
        summary = {
            "accept_rate": result.accept_rate,
            "verdicts": verdicts,
            "secrets": {u: sorted(s) for u, s in secrets.items()},
            "seed": spec.seed,
        }
        path = out / "summary.json"
        path.write_text(json.dumps(summary, indent=2), encoding="utf-8")
        result = replace(result, written=result.written + (str(path),))
    return result


@dataclass(frozen=True)
class ImposterResult:
    sessions: int
    successes: int
    fpr_emp: float
    p_rg: float
    gamma: int
    z_sym: float
    z_user: float

    @property
    def observed_rate(self) -> float:
        return self.successes / self.sessions

    @property
    def predicted_rate(self) -> float:
        return (self.p_rg * self.fpr_emp) ** self.gamma

    @property
    def sigma(self) -> float:
        q = self.predicted_rate
        return float(np.sqrt(max(q * (1 - q), 1e-300) / self.sessions))


def calibrate_thresholds(spec: SimulationSpec, symbols: SymbolSet,
                         registration: dict[str, list[Trace]],
                         rng: np.random.Generator,
                         target_fpr: float = 0.3,
                         n_probe: int = 40) -> tuple[float, float]:
    """Pick (z_sym, z_user) from probe imposters against one enrollment.

    z_sym clears every probe's same-symbol shape distance (with margin)
    so the shape stage only rejects wrong or garbled symbols; z_user is
    the target_fpr quantile of probe dynamics residuals.
    """
    if not 0.0 < target_fpr < 1.0:
        raise ParamError(f"target_fpr must be in (0, 1), got {target_fpr}")
    sym_templates, user_templates = {}, {}
    for sym, traces in registration.items():
        feats = [extract_features(t) for t in traces]
        sym_templates[sym] = build_template(feats, purpose=PURPOSE_SYM)
        user_templates[sym] = build_template(feats, spec.feature_subset)

    sym_residuals, user_residuals = [], []
    for _ in range(n_probe):
        style = sample_user_style(symbols.names, rng,
                                  spread=spec.style_spread)
        for sym in symbols.names:
            trace = render_trace(sym, style, rng, noise=spec.noise,
                                 n_points=spec.n_points,
                                 include_motion=spec.include_motion)
            feats = extract_features(trace)
            st = sym_templates[sym]
            if st.sigma > 0:
                sym_residuals.append((multi_dtw(st, feats) - st.mu) / st.sigma)
            ut = user_templates[sym]
            if ut.sigma > 0:
                user_residuals.append(
                    (multi_dtw(ut, feats) - ut.mu) / ut.sigma)
    if not sym_residuals or not user_residuals:
        # Zero-spread registration (sigma = 0): thresholds degenerate to mu.
        return 0.0, 0.0
    z_sym = max(0.0, float(np.max(sym_residuals)) * 1.1 + 0.5)
    z_user = max(0.0, float(np.quantile(user_residuals, target_fpr)))
    return z_sym, z_user


def imposter_study(spec: SimulationSpec, n_sessions: int,
                   target_fpr: float = 0.3) -> ImposterResult:
    """Random-guess imposters with their own handwriting, fresh per round."""
    params = spec.params
    symbols = spec.symbol_set()
    rng = _user_rng(spec.seed, 0)
    victim_style = sample_user_style(symbols.names, rng,
                                     spread=spec.style_spread)
    from .scheme import sample_secret
    secret = sample_secret(params, rng)
    registration = _registration(spec, symbols, victim_style, rng, "victim")

    cal_rng = _user_rng(spec.seed, 1)
    z_sym, z_user = calibrate_thresholds(spec, symbols, registration, cal_rng,
                                         target_fpr=target_fpr)
    service = AuthService(seed=spec.seed)
    service.setup(params, symbols, z_sym=z_sym, z_user=z_user,
                  feature_subset=spec.feature_subset)
    service.register("victim", secret, registration)

    imp_rng = _user_rng(spec.seed, 2)
    successes = 0
    cog_pass = 0
    both_pass = 0
    for _ in range(n_sessions):
        sid, challenge = service.start_session("victim")
        for _round in range(params.gamma):
            guess = int(imp_rng.integers(params.d))
            style = sample_user_style(symbols.names, imp_rng,
                                      spread=spec.style_spread)
            trace = render_trace(symbols.symbol_for(guess), style, imp_rng,
                                 noise=spec.noise, n_points=spec.n_points,
                                 include_motion=spec.include_motion)
            result = service.submit_response(sid, trace)
            outcome = result.outcome
            if outcome.cognitive in (COGNITIVE_CORRECT, COGNITIVE_EMPTY_ANY):
                cog_pass += 1
                if outcome.biometric == BIOMETRIC_PASS:
                    both_pass += 1
            challenge = result.next_challenge
        if result.verdict == VERDICT_ACCEPT:
            successes += 1
    fpr_emp = both_pass / cog_pass if cog_pass else 0.0
    return ImposterResult(sessions=n_sessions, successes=successes,
                          fpr_emp=fpr_emp, p_rg=p_random_guess(params),
                          gamma=params.gamma, z_sym=z_sym, z_user=z_user)
