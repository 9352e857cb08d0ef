"""Session state machine over the challenge scheme and the trace verifier.

Registration stores the secret plus, per symbol, a shape template and a
dynamics template built from the user's sample renderings. Authentication
runs gamma rounds; every failure only flips an internal error flag and the
verdict is withheld until the final round so an observer (including the
client) learns nothing mid-session.

All randomness is derived from a service seed plus a per-session counter,
and every state change is appended to an optional store, so reloading the
store rebuilds identical sessions, challenges, and verdicts.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np

from ..biometric.features import FeatureSet, extract_features
from ..biometric.symbols import SymbolSet
from ..biometric.template import (PURPOSE_SYM, PURPOSE_USER, TemplateBank,
                                  build_template, classify)
from ..biometric.trace import Trace, parse_trace, trace_to_jsonl
from ..biometric.dtw import DEFAULT_BAND_RADIUS
from ..errors import DataError, ParamError, ProtocolError
from ..params import SchemeParams, new_params
from ..scheme import (Challenge, Transcript, VerifyOutcome,
                      sample_challenge, verify_response)
from .store import Store

VERDICT_ACCEPT = "accept"
VERDICT_REJECT = "reject"

COGNITIVE_CORRECT = "correct"
COGNITIVE_WRONG = "wrong"
COGNITIVE_EMPTY_ANY = "empty-any"
COGNITIVE_INVALID = "invalid"

BIOMETRIC_PASS = "pass"
BIOMETRIC_FAIL_SYM = "fail-sym"
BIOMETRIC_FAIL_USER = "fail-user"
BIOMETRIC_INVALID = "invalid"

_COGNITIVE_BY_OUTCOME = {
    VerifyOutcome.CORRECT: COGNITIVE_CORRECT,
    VerifyOutcome.WRONG: COGNITIVE_WRONG,
    VerifyOutcome.EMPTY_ANY: COGNITIVE_EMPTY_ANY,
}


@dataclass(frozen=True)
class RoundOutcome:
    matched_symbol: str | None
    cognitive: str
    biometric: str

    @property
    def passed(self) -> bool:
        return (self.biometric == BIOMETRIC_PASS
                and self.cognitive in (COGNITIVE_CORRECT, COGNITIVE_EMPTY_ANY))


@dataclass(frozen=True)
class SubmitResult:
    outcome: RoundOutcome
    round_index: int
    done: bool
    verdict: str | None = None
    next_challenge: Challenge | None = None


@dataclass(frozen=True)
class Enrollment:
    user: str
    secret: frozenset[int]
    params: SchemeParams
    bank: TemplateBank


@dataclass
class _Session:
    sid: str
    user: str
    counter: int
    rng: np.random.Generator
    pending: Challenge | None
    round_index: int = 0
    err: int = 0
    log: list = field(default_factory=list)  # (Challenge, response|None, RoundOutcome)
    verdict: str | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)


def _challenge_obj(challenge: Challenge) -> dict:
    return {"a": list(challenge.a), "w": list(challenge.w)}


class AuthService:
    def __init__(self, store: Store | None = None, seed: int = 0):
        self._store = store
        self._seed = int(seed)
        self._lock = threading.RLock()
        self._config: dict | None = None
        self._enrollments: dict[str, Enrollment] = {}
        self._sessions: dict[str, _Session] = {}
        self._counter = 0
        if store is not None:
            self._replay(store.load())

    # -- configuration -----------------------------------------------------

    def setup(self, params: SchemeParams, symbols: SymbolSet,
              pool: tuple[int, ...] | None = None,
              z_sym: float = 2.0, z_user: float = 2.0,
              feature_subset: tuple[str, ...] | None = None,
              band_radius: float = DEFAULT_BAND_RADIUS) -> dict:
        pool = tuple(range(params.n)) if pool is None else tuple(pool)
        if len(pool) != params.n:
            raise ParamError(
                f"object pool has {len(pool)} entries, params say n={params.n}")
        if len(set(pool)) != len(pool):
            raise ParamError("object pool entries must be distinct")
        if symbols.d != params.d:
            raise ParamError(
                f"symbol set size {symbols.d} != d={params.d}")
        payload = {
            "params": {"d": params.d, "k": params.k, "l": params.l,
                       "n": params.n, "gamma": params.gamma, "t": params.t},
            "symbols": list(symbols.names),
            "pool": list(pool),
            "z_sym": float(z_sym), "z_user": float(z_user),
            "feature_subset": None if feature_subset is None
            else list(feature_subset),
            "band_radius": float(band_radius),
        }
        with self._lock:
            if self._config is not None:
                if self._config_payload() == payload:
                    return self.config()
                raise ParamError("service already configured differently")
            self._config = {
                "params": params, "symbols": symbols, "pool": pool,
                "z_sym": float(z_sym), "z_user": float(z_user),
                "feature_subset": None if feature_subset is None
                else tuple(feature_subset),
                "band_radius": float(band_radius),
            }
            self._append({"kind": "setup", **payload})
        return self.config()

    def _config_payload(self) -> dict:
        cfg = self._config
        p = cfg["params"]
        return {
            "params": {"d": p.d, "k": p.k, "l": p.l, "n": p.n,
                       "gamma": p.gamma, "t": p.t},
            "symbols": list(cfg["symbols"].names),
            "pool": list(cfg["pool"]),
            "z_sym": cfg["z_sym"], "z_user": cfg["z_user"],
            "feature_subset": None if cfg["feature_subset"] is None
            else list(cfg["feature_subset"]),
            "band_radius": cfg["band_radius"],
        }

    def config(self) -> dict:
        with self._lock:
            if self._config is None:
                raise ProtocolError("service is not configured")
            return self._config_payload()

    def _require_config(self) -> dict:
        if self._config is None:
            raise ProtocolError("service is not configured")
        return self._config

    # -- enrollment --------------------------------------------------------

    def register(self, user: str, secret, renderings) -> Enrollment:
        """Enroll a user from t labeled renderings per symbol.

        ``renderings`` is either a flat list of symbol-labeled traces or a
        mapping symbol -> list of traces.
        """
        cfg = self._require_config()
        params: SchemeParams = cfg["params"]
        symbols: SymbolSet = cfg["symbols"]
        secret = frozenset(int(v) for v in secret)
        if len(secret) != params.k:
            raise DataError(
                f"secret must hold {params.k} distinct objects, "
                f"got {len(secret)}")
        if any(not 0 <= v < params.n for v in secret):
            raise DataError("secret object outside the pool")

        if isinstance(renderings, dict):
            by_symbol = {sym: list(traces)
                         for sym, traces in renderings.items()}
        else:
            by_symbol = {}
            for trace in renderings:
                if trace.symbol_label is None:
                    raise DataError("unlabeled rendering in registration")
                by_symbol.setdefault(trace.symbol_label, []).append(trace)
        if set(by_symbol) != set(symbols.names):
            raise DataError(
                f"renderings cover {sorted(by_symbol)}, "
                f"need all of {sorted(symbols.names)}")
        for sym, traces in by_symbol.items():
            if len(traces) != params.t:
                raise DataError(
                    f"symbol {sym!r} has {len(traces)} renderings, "
                    f"need t={params.t}")

        enrollment = self._build_enrollment(user, secret, by_symbol)
        with self._lock:
            if user in self._enrollments:
                raise DataError(f"user {user!r} already enrolled")
            self._enrollments[user] = enrollment
            self._append({
                "kind": "register", "user": user,
                "secret": sorted(secret),
                "renderings": {sym: [trace_to_jsonl(t) for t in traces]
                               for sym, traces in by_symbol.items()},
            })
        return enrollment

    def _build_enrollment(self, user, secret, by_symbol) -> Enrollment:
        cfg = self._require_config()
        params = cfg["params"]
        sym_t, user_t = {}, {}
        for sym, traces in by_symbol.items():
            feats = [extract_features(t) for t in traces]
            sym_t[sym] = build_template(
                feats, purpose=PURPOSE_SYM, z=cfg["z_sym"],
                band_radius=cfg["band_radius"])
            user_t[sym] = build_template(
                feats, cfg["feature_subset"], purpose=PURPOSE_USER,
                z=cfg["z_user"], band_radius=cfg["band_radius"])
        bank = TemplateBank(sym_templates=sym_t, user_templates=user_t)
        return Enrollment(user=user, secret=secret, params=params, bank=bank)

    # -- authentication ----------------------------------------------------

    def _session_rng(self, counter: int) -> np.random.Generator:
        return np.random.default_rng(
            np.random.SeedSequence((self._seed, counter)))

    def start_session(self, user: str) -> tuple[str, Challenge]:
        cfg = self._require_config()
        with self._lock:
            if user not in self._enrollments:
                raise DataError("unknown user")
            self._counter += 1
            counter = self._counter
            sid = f"s{counter}"
            rng = self._session_rng(counter)
            challenge = sample_challenge(cfg["params"], rng)
            self._sessions[sid] = _Session(sid=sid, user=user, counter=counter,
                                           rng=rng, pending=challenge)
            self._append({"kind": "session", "sid": sid, "user": user,
                          "counter": counter})
        return sid, challenge

    def submit_response(self, sid: str, trace) -> SubmitResult:
        cfg = self._require_config()
        params: SchemeParams = cfg["params"]
        symbols: SymbolSet = cfg["symbols"]
        with self._lock:
            session = self._sessions.get(sid)
            if session is None:
                raise DataError("unknown session")
            enrollment = self._enrollments[session.user]
        with session.lock:
            if session.verdict is not None:
                raise ProtocolError("session already decided")
            if session.pending is None:
                raise ProtocolError("no pending challenge")
            challenge = session.pending
            session.pending = None

            response, outcome = self._judge_round(
                enrollment, challenge, trace, params, symbols)
            if not outcome.passed:
                session.err = 1
            session.log.append((challenge, response, outcome))
            session.round_index += 1
            self._append({
                "kind": "round", "sid": sid,
                "challenge": _challenge_obj(challenge),
                "response": response,
                "outcome": {"matched_symbol": outcome.matched_symbol,
                            "cognitive": outcome.cognitive,
                            "biometric": outcome.biometric},
            })

            if session.round_index < params.gamma:
                session.pending = sample_challenge(params, session.rng)
                return SubmitResult(outcome=outcome,
                                    round_index=session.round_index - 1,
                                    done=False,
                                    next_challenge=session.pending)
            session.verdict = VERDICT_REJECT if session.err else VERDICT_ACCEPT
            self._append({"kind": "verdict", "sid": sid,
                          "verdict": session.verdict})
            return SubmitResult(outcome=outcome,
                                round_index=session.round_index - 1,
                                done=True, verdict=session.verdict)

    def _judge_round(self, enrollment: Enrollment, challenge: Challenge,
                     trace, params: SchemeParams,
                     symbols: SymbolSet) -> tuple[int | None, RoundOutcome]:
        try:
            if isinstance(trace, str):
                trace = parse_trace(trace)
            if not isinstance(trace, Trace):
                raise DataError(f"expected a trace, got {type(trace).__name__}")
            rendering = extract_features(trace)
        except DataError:
            # A malformed rendering burns the round rather than erroring the
            # protocol, so probing with garbage is not free.
            return None, RoundOutcome(matched_symbol=None,
                                      cognitive=COGNITIVE_INVALID,
                                      biometric=BIOMETRIC_INVALID)
        # Decode blind: the drawn symbol is whatever template sits nearest.
        # Feeding the expected symbol in here would fold cognitive errors
        # into the shape check and let any rendering claim the right answer.
        decision = classify(rendering, enrollment.bank)
        response = symbols.response_for(decision.symbol)
        verify = verify_response(params, enrollment.secret, challenge, response)
        if decision.accepted:
            biometric = BIOMETRIC_PASS
        elif decision.stage == "user-check":
            biometric = BIOMETRIC_FAIL_USER
        else:
            biometric = BIOMETRIC_FAIL_SYM
        outcome = RoundOutcome(matched_symbol=decision.symbol,
                               cognitive=_COGNITIVE_BY_OUTCOME[verify],
                               biometric=biometric)
        return response, outcome

    # -- export ------------------------------------------------------------

    def export_transcript(self, user: str) -> Transcript:
        cfg = self._require_config()
        with self._lock:
            if user not in self._enrollments:
                raise DataError("unknown user")
            sessions = sorted((s for s in self._sessions.values()
                               if s.user == user), key=lambda s: s.counter)
            rounds = []
            for session in sessions:
                for challenge, response, _ in session.log:
                    if response is not None:
                        rounds.append((challenge, response))
        return Transcript(params=cfg["params"], rounds=tuple(rounds))

    def verdicts(self, user: str | None = None) -> dict[str, str | None]:
        with self._lock:
            return {s.sid: s.verdict for s in self._sessions.values()
                    if user is None or s.user == user}

    # -- persistence -------------------------------------------------------

    def _append(self, record: dict) -> None:
        if self._store is not None:
            self._store.append(record)

    def _replay(self, records: list[dict]) -> None:
        sessions_meta: dict[str, dict] = {}
        for rec in records:
            kind = rec.get("kind")
            if kind == "setup":
                p = rec["params"]
                self._config = {
                    "params": new_params(p["d"], p["k"], p["l"], p["n"],
                                         p["gamma"], p["t"]),
                    "symbols": SymbolSet(names=tuple(rec["symbols"])),
                    "pool": tuple(rec["pool"]),
                    "z_sym": rec["z_sym"], "z_user": rec["z_user"],
                    "feature_subset": None if rec["feature_subset"] is None
                    else tuple(rec["feature_subset"]),
                    "band_radius": rec["band_radius"],
                }
            elif kind == "register":
                by_symbol = {sym: [parse_trace(text) for text in texts]
                             for sym, texts in rec["renderings"].items()}
                secret = frozenset(rec["secret"])
                self._enrollments[rec["user"]] = self._build_enrollment(
                    rec["user"], secret, by_symbol)
            elif kind == "session":
                sessions_meta[rec["sid"]] = {
                    "user": rec["user"], "counter": rec["counter"],
                    "rounds": [], "verdict": None}
            elif kind == "round":
                meta = sessions_meta[rec["sid"]]
                meta["rounds"].append(rec)
            elif kind == "verdict":
                sessions_meta[rec["sid"]]["verdict"] = rec["verdict"]
            else:
                raise DataError(f"unknown store record kind {kind!r}")

        params = self._config["params"] if self._config else None
        for sid, meta in sessions_meta.items():
            self._counter = max(self._counter, meta["counter"])
            rng = self._session_rng(meta["counter"])
            log = []
            err = 0
            for rec in meta["rounds"]:
                challenge = sample_challenge(params, rng)
                stored = rec["challenge"]
                if (list(challenge.a) != stored["a"]
                        or list(challenge.w) != stored["w"]):
                    raise DataError(
                        "stored rounds do not match the service seed")
                outcome = RoundOutcome(
                    matched_symbol=rec["outcome"]["matched_symbol"],
                    cognitive=rec["outcome"]["cognitive"],
                    biometric=rec["outcome"]["biometric"])
                if not outcome.passed:
                    err = 1
                log.append((challenge, rec["response"], outcome))
            pending = None
            if meta["verdict"] is None and len(log) < params.gamma:
                pending = sample_challenge(params, rng)
            self._sessions[sid] = _Session(
                sid=sid, user=meta["user"], counter=meta["counter"], rng=rng,
                pending=pending, round_index=len(log), err=err, log=log,
                verdict=meta["verdict"])
