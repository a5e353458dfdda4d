"""Seeded fault injection for the falsifiability harness.

Production code consults :func:`active` at a handful of sites. Nothing is
active unless a caller enters :func:`inject`.
"""
from contextlib import contextmanager

KNOWN = (
    "hom_sign",  # flip the sign of the f∘d term in Hom differentials
    "telescope_index",  # d(δ_i) = δ_i - a·δ_{i-1} instead of δ_{i-1} - a·δ_i
    "koszul_sign",  # drop (-1)^{|x|} in x ⊗ dy
    "window_off_by_one",  # certified floors one degree too shallow
    "snf_divisibility",  # skip the divisibility normalisation in SNF
)

_active: frozenset = frozenset()
_caches: list = []


def register_cache(clear) -> None:
    """Have ``clear()`` called whenever the set of active mutants changes."""
    _caches.append(clear)


def _clear_caches():
    for clear in _caches:
        clear()


def active(name: str) -> bool:
    return name in _active


def any_active() -> bool:
    return bool(_active)


@contextmanager
def inject(*names: str):
    global _active
    unknown = set(names) - set(KNOWN)
    if unknown:
        raise ValueError(f"unknown mutants: {sorted(unknown)}")
    previous = _active
    _active = previous | frozenset(names)
    _clear_caches()
    try:
        yield
    finally:
        _active = previous
        _clear_caches()
