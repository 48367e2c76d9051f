"""Desk-scale limits for closures and exhaustive searches.

``JORDANLAB_MAX_ORDER`` overrides the defaults. A single integer applies to
both limits; ``"closure,brute"`` (e.g. ``"256,10"``) sets them separately.
"""
import os

DEFAULT_CLOSURE_ORDER = 128
DEFAULT_BRUTE_ORDER = 8
DEFAULT_JAUT_RANK = 40
DEFAULT_GROUP_SIZE = 1024
DEFAULT_LOOP_ISO_ORDER = 32

ENV_VAR = "JORDANLAB_MAX_ORDER"


def _env_bounds():
    raw = os.environ.get(ENV_VAR, "").strip()
    if not raw:
        return None
    parts = [int(p) for p in raw.split(",")]
    if len(parts) == 1:
        return parts[0], parts[0]
    if len(parts) == 2:
        return parts[0], parts[1]
    raise ValueError(f"{ENV_VAR} must be 'N' or 'N,M', got {raw!r}")


def closure_order_bound():
    env = _env_bounds()
    return env[0] if env else DEFAULT_CLOSURE_ORDER


def brute_order_bound():
    env = _env_bounds()
    return env[1] if env else DEFAULT_BRUTE_ORDER
