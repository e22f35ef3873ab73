"""Variable-exponent Lebesgue/Hardy toolkit: python surface over the C++ core."""

import json as _json

from ._varharm import *  # noqa: F401,F403
from ._varharm import run_check_json as _run_check_json


def run_check(target, **overrides):
    """Run a registered verification target and return the report as a dict.

    Keyword overrides mirror the CLI flags: n, N, L, seed, alpha, p, trials,
    atoms, refine, out, csv.
    """
    cfg = {"target": target}
    cfg.update(overrides)
    return _json.loads(_run_check_json(_json.dumps(cfg)))
