"""Unit-density point sequences produced by unfolding spectra or zero sets."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["UnfoldedSequence"]

_SOURCES = ("gue", "zeta", "synthetic")


@dataclass(frozen=True, eq=False)
class UnfoldedSequence:
    """Strictly ascending reals rescaled to (nominally) unit mean density.

    ``source`` tags the origin: gue, zeta or synthetic.  ``unit_density``
    reports whether the mean nearest-neighbor spacing is within 5% of 1;
    it is advisory rather than a construction error because the asymptotic
    zeta unfolding only approaches unit density as the heights grow.
    """

    values: np.ndarray
    source: str = "synthetic"
    flags: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).ravel()
        if v.size > 1 and not np.all(np.diff(v) > 0.0):
            raise ValueError("unfolded values must be strictly ascending")
        if self.source not in _SOURCES:
            raise ValueError(f"source must be one of {_SOURCES}")
        object.__setattr__(self, "values", v)
        v.setflags(write=False)

    def __len__(self) -> int:
        return self.values.size

    @property
    def mean_spacing(self) -> float:
        if len(self) < 2:
            return float("nan")
        return float(np.mean(np.diff(self.values)))

    @property
    def unit_density(self) -> bool:
        return len(self) >= 2 and abs(self.mean_spacing - 1.0) <= 0.05
