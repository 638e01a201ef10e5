"""Selection of the sampling backend (numba-compiled vs pure numpy).

The numba kernels and their numpy twins draw from the same counter-based
random stream, so either backend is valid; numba is simply faster on large
sample counts.  The environment variable ``MOLSIG_BACKEND`` forces one
("numba" or "numpy"); the default is numba whenever it imports.
"""

from __future__ import annotations

import os

ENV_VAR = "MOLSIG_BACKEND"

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    HAVE_NUMBA = False

_VALID = ("numba", "numpy")


def default_backend() -> str:
    """Backend used when none is requested explicitly."""
    choice = os.environ.get(ENV_VAR, "").strip().lower()
    if choice:
        if choice not in _VALID:
            raise ValueError(f"{ENV_VAR} must be one of {_VALID}, got {choice!r}")
        if choice == "numba" and not HAVE_NUMBA:
            raise ValueError(f"{ENV_VAR}=numba but numba is not importable")
        return choice
    return "numba" if HAVE_NUMBA else "numpy"


def resolve_backend(name: str | None) -> str:
    """Validate an explicit backend name, or fall back to the default."""
    if name is None:
        return default_backend()
    name = name.lower()
    if name not in _VALID:
        raise ValueError(f"backend must be one of {_VALID}, got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise ValueError("numba backend requested but numba is not importable")
    return name
