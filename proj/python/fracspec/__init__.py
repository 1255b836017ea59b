"""Spectral perturbation laboratory for the integral fractional Laplacian.

Thin Python veneer over the C++ core: assembly of the collocation operator,
eigenvalue clustering, first-order interaction matrices, and the full
experiment runner driven by the same JSON configs as the CLI.
"""

import json as _json

try:
    from fracspec._core import (  # type: ignore
        ConfigError,
        NumericalError,
        Operator,
        __version__,
        assemble_1d,
        assemble_2d_square,
        ball_constant,
        hadamard_constant,
        halfplane_constant,
        normalization_constant,
        run_config_json,
        validate_config_json,
    )
except ImportError:  # running against an in-tree build directory
    from _core import (  # type: ignore
        ConfigError,
        NumericalError,
        Operator,
        __version__,
        assemble_1d,
        assemble_2d_square,
        ball_constant,
        hadamard_constant,
        halfplane_constant,
        normalization_constant,
        run_config_json,
        validate_config_json,
    )

__all__ = [
    "ConfigError",
    "NumericalError",
    "Operator",
    "__version__",
    "assemble_1d",
    "assemble_2d_square",
    "ball_constant",
    "hadamard_constant",
    "halfplane_constant",
    "normalization_constant",
    "run",
    "run_config_json",
    "validate",
    "validate_config_json",
]


def run(config, base_dir=".", include_timings=True):
    """Run one experiment from a config dict; returns the report as a dict."""
    text = run_config_json(_json.dumps(config), base_dir, include_timings)
    return _json.loads(text)


def validate(config, base_dir="."):
    """Validate a config dict; returns its experiment kind or raises ConfigError."""
    return validate_config_json(_json.dumps(config), base_dir)
