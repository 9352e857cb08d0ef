"""HTTP surface over the authentication service.

Round responses deliberately carry no per-round outcome: a client only
ever sees the next challenge and, after the final round, the verdict.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from ..biometric.trace import parse_trace
from ..errors import DataError, ParamError, ProtocolError
from .core import AuthService


class RegisterBody(BaseModel):
    user: str
    secret: list[int]
    renderings: list[str]  # rendering files (header + event lines) inline


class SessionBody(BaseModel):
    user: str


class ResponseBody(BaseModel):
    trace: str


def create_app(service: AuthService) -> FastAPI:
    app = FastAPI(title="hybrid-auth service")

    @app.exception_handler(DataError)
    async def _data_error(request: Request, exc: DataError):
        status = 404 if str(exc) in ("unknown user", "unknown session") else 400
        return JSONResponse(status_code=status, content={"error": str(exc)})

    @app.exception_handler(ParamError)
    async def _param_error(request: Request, exc: ParamError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(ProtocolError)
    async def _protocol_error(request: Request, exc: ProtocolError):
        return JSONResponse(status_code=409, content={"error": str(exc)})

    @app.get("/config")
    def get_config():
        return service.config()

    @app.post("/register")
    def register(body: RegisterBody):
        enrollment = service.register(body.user, body.secret, [
            parse_trace(text) for text in body.renderings])
        return {"user": enrollment.user,
                "symbols": list(enrollment.bank.symbols)}

    @app.post("/session")
    def start_session(body: SessionBody):
        sid, challenge = service.start_session(body.user)
        return {"session": sid,
                "challenge": {"a": list(challenge.a), "w": list(challenge.w)}}

    @app.post("/session/{sid}/response")
    def submit_response(sid: str, body: ResponseBody):
        result = service.submit_response(sid, body.trace)
        payload = {"round": result.round_index, "done": result.done}
        if result.done:
            payload["verdict"] = result.verdict
        else:
            nxt = result.next_challenge
            payload["challenge"] = {"a": list(nxt.a), "w": list(nxt.w)}
        return payload

    @app.get("/transcript")
    def transcript(user: str):
        return json.loads(service.export_transcript(user).to_json())

    return app
