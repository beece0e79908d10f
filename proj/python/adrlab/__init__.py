"""Explicit advection-diffusion-reaction solvers (C++ core)."""

import json as _json

from ._core import (  # noqa: F401
    AdrError,
    ConfigError,
    DivergenceError,
    InputError,
    NumericError,
    SeriesSolution,
    StabilityError,
    UnsupportedError,
    __version__,
    build_series,
    max_error,
    ozone_rates,
    photolysis_k1,
    run,
    simulate2d,
    stability2d,
    stability3d,
)
from ._core import parse_config as _parse_config


def parse_config(path):
    """Validated configuration as a dict."""
    return _json.loads(_parse_config(str(path)))
