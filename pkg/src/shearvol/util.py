"""Small shared helpers (thread resolution, FFT wrappers)."""

from __future__ import annotations

import os

import scipy.fft as _fft

THREADS_ENV = "SHEARVOL_THREADS"


def resolve_workers(requested: int | None) -> int:
    """Number of FFT worker threads to use.

    The SHEARVOL_THREADS environment variable caps whatever is requested;
    with no request the cap (or the CPU count) is the default.
    """
    cap = None
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            cap = max(1, int(raw))
        except ValueError:
            cap = None
    if requested is None:
        requested = cap if cap is not None else (os.cpu_count() or 1)
    requested = max(1, int(requested))
    if cap is not None:
        requested = min(requested, cap)
    return requested


def rfftn(x, workers=None):
    return _fft.rfftn(x, workers=resolve_workers(workers))


def irfftn(spec, shape, workers=None):
    return _fft.irfftn(spec, s=shape, workers=resolve_workers(workers))
