"""Global numerical tolerances, overridable per call or via ``config_context``."""

from contextlib import contextmanager
from dataclasses import dataclass, fields, replace

__all__ = ["Tolerances", "get_config", "set_config", "config_context"]


@dataclass(frozen=True)
class Tolerances:
    eps_lin: float = 1e-10
    rank_tol: float = 1e-10
    tol_fund: float = 1e-8
    tol_dil: float = 1e-8
    tol_w: float = 1e-8
    tol_commute: float = 1e-10
    tol_vn: float = 1e-8

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not value > 0:
                raise ValueError(f"tolerance {f.name} must be positive, got {value!r}")


_global = Tolerances()


def get_config() -> Tolerances:
    return _global


def set_config(**kwargs) -> Tolerances:
    """Replace global tolerances; unknown names raise ``TypeError``."""
    global _global
    _global = replace(_global, **kwargs)
    return _global


@contextmanager
def config_context(**kwargs):
    global _global
    old = _global
    _global = replace(old, **kwargs)
    try:
        yield _global
    finally:
        _global = old


def _resolve(name, value):
    return getattr(_global, name) if value is None else value
