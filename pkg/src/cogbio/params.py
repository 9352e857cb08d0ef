"""Parameter tuple shared by the cognitive scheme and the handwriting verifier."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParamError


@dataclass(frozen=True)
class SchemeParams:
    """Validated scheme parameters.

    d: response-space size (responses live in Z_d)
    k: number of pass-objects in a secret
    l: number of objects shown per challenge
    n: size of the global object pool
    gamma: challenge rounds per authentication session
    t: handwriting renderings collected per symbol at registration
    """

    d: int
    k: int
    l: int
    n: int
    gamma: int = 2
    t: int = 10

    def __post_init__(self) -> None:
        for name in ("d", "k", "l", "n", "gamma", "t"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise ParamError(f"{name} must be an integer, got {value!r}")
        if self.d < 2:
            raise ParamError(f"d must be >= 2, got {self.d}")
        if self.k < 1:
            raise ParamError(f"k must be >= 1, got {self.k}")
        if self.k >= self.n:
            raise ParamError(f"k must be < n, got k={self.k}, n={self.n}")
        if not 1 <= self.l <= self.n:
            raise ParamError(f"l must be in [1, n], got l={self.l}, n={self.n}")
        if self.gamma < 1:
            raise ParamError(f"gamma must be >= 1, got {self.gamma}")
        if self.t < 1:
            raise ParamError(f"t must be >= 1, got {self.t}")


def new_params(d: int, k: int, l: int, n: int, gamma: int = 2, t: int = 10) -> SchemeParams:
    """Build a validated SchemeParams, raising ParamError on any bad field."""
    return SchemeParams(d=d, k=k, l=l, n=n, gamma=gamma, t=t)
