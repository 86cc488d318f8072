"""Precision presets, selectable through the CNOIDAL_LAB_PRECISION env var."""

from __future__ import annotations

import os
from dataclasses import dataclass

_ENV_VAR = "CNOIDAL_LAB_PRECISION"


@dataclass(frozen=True)
class Precision:
    """Internal tolerances used by root finders and certificates."""

    name: str
    bisect_xtol: float
    invert_xtol: float
    certify_points: int

    @property
    def strict(self) -> bool:
        return self.name == "strict"


NORMAL = Precision(name="normal", bisect_xtol=1e-14, invert_xtol=1e-12,
                   certify_points=512)
STRICT = Precision(name="strict", bisect_xtol=1e-15, invert_xtol=1e-13,
                   certify_points=2048)

_active: Precision | None = None


def get_precision() -> Precision:
    """Active preset; resolved from the environment on first use."""
    global _active
    if _active is None:
        name = os.environ.get(_ENV_VAR, "normal").strip().lower()
        if name not in ("normal", "strict"):
            raise ValueError(
                f"{_ENV_VAR} must be 'normal' or 'strict', got {name!r}")
        _active = STRICT if name == "strict" else NORMAL
    return _active


def set_precision(name: str) -> Precision:
    """Override the active preset programmatically ('normal' or 'strict')."""
    global _active
    if name not in ("normal", "strict"):
        raise ValueError("precision must be 'normal' or 'strict'")
    _active = STRICT if name == "strict" else NORMAL
    return _active
