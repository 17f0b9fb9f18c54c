"""Size caps for the enumerative operations.

Defaults are desk-scale.  The environment variable ``PERMUTREE_LAB_CAP``
(a single integer) overrides every default at once; an explicit ``cap=``
argument on a call site wins over both.
"""

import os

from .errors import ResourceCapError

DEFAULT_CAPS = {
    "reduced_words_n": 8,
    "rotation_lattice_n": 7,
    "s_hasse_total": 10,
    "max_cliques_routes": 4096,
    "generating_tree_n": 7,
}


def get_cap(name, override=None):
    if override is not None:
        return int(override)
    env = os.environ.get("PERMUTREE_LAB_CAP")
    if env is not None:
        return int(env)
    return DEFAULT_CAPS[name]


def require_cap(name, value, override=None):
    cap = get_cap(name, override)
    if value > cap:
        raise ResourceCapError(
            f"{name}: requested size {value} exceeds cap {cap} "
            f"(raise with cap= or PERMUTREE_LAB_CAP)"
        )
    return cap
