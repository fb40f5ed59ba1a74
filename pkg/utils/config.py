"""
utils/config.py
Numerical tolerances, worker counts and shared constants.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, fields, replace

from utils.exceptions import PreconditionError

ENV_PREFIX = "MORSELAB_"
DEFAULT_SEED = 1729
DEFAULT_WEIGHTS = (1 / math.sqrt(2), 1 / math.sqrt(2))

STATUS_COLOR = {"PASS": "#4caf50", "WARNING": "#ff9800", "FAIL": "#f44336"}


@dataclass(frozen=True)
class LabSettings:
    """
    Tolerances for the finite-difference critical point search.

    All lengths are in chart-coordinate units.
    """

    h_grad: float = 1e-5
    h_hess: float = 1e-4
    tol_grad: float = 1e-8
    tol_degenerate: float = 1e-5
    tol_dedupe: float = 1e-4
    tol_match: float = 1e-6
    block_tol: float = 1e-6
    n_seed: int = 32
    max_iter: int = 50
    max_dim: int = 4
    n_jobs: int = 1

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise PreconditionError(f"setting {f.name} must be positive")

    @property
    def margin(self) -> float:
        """Minimum distance from a chart boundary kept by the Newton search."""
        return max(self.h_grad, 2 * self.h_hess)

    @classmethod
    def from_env(cls, environ=None) -> "LabSettings":
        """
        Build settings, overriding defaults from MORSELAB_<FIELD> variables.

        Args:
            environ: Mapping to read instead of os.environ (used in tests).

        Returns:
            LabSettings instance.
        """
        environ = os.environ if environ is None else environ
        overrides = {}
        for f in fields(cls):
            raw = environ.get(ENV_PREFIX + f.name.upper())
            if raw is None:
                continue
            cast = int if f.type in ("int", int) else float
            try:
                overrides[f.name] = cast(raw)
            except ValueError as exc:
                raise PreconditionError(
                    f"{ENV_PREFIX}{f.name.upper()}={raw!r} is not a valid {cast.__name__}"
                ) from exc
        return replace(cls(), **overrides)


DEFAULT_SETTINGS = LabSettings()
