"""Ambient settings (truncation order, sampling depth, tolerances).

Settings live in a :class:`contextvars.ContextVar`, so ``with settings(...)``
scopes changes to the current thread/task, in the spirit of
:func:`decimal.localcontext`.
"""
from __future__ import annotations

import contextlib
import contextvars
import dataclasses
from dataclasses import dataclass

# Coefficient-level tolerance for approximate (float) scalars. Fixed; it is part
# of the scalar policy rather than a user knob.
SCALAR_TOL = 1e-12


@dataclass(frozen=True)
class Settings:
    trunc: int = 16
    depth: int = 14
    tol: float = 1e-9
    seed: int = 0


_current: contextvars.ContextVar[Settings] = contextvars.ContextVar(
    "virtualcalc_settings", default=Settings()
)


def current() -> Settings:
    return _current.get()


@contextlib.contextmanager
def settings(**changes):
    """Temporarily override fields of the ambient :class:`Settings`."""
    token = _current.set(dataclasses.replace(_current.get(), **changes))
    try:
        yield _current.get()
    finally:
        _current.reset(token)
