"""Correlation kernels of the ideal Fermi gas.

Two forms: the thermodynamic-limit kernel K(r; nu) = Gamma(nu+1) (2/(k_F r))^nu
J_nu(k_F r) with closed-form fast paths at nu = 1/2 and 3/2, and the finite-N
discrete-mode kernel K_ij = (1/N) sum_k exp(i k . (r_i - r_j)) on the unit
torus.  The volume is fixed to 1, so allowed wavevectors are 2 pi times
integer lattice vectors.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .specfun import DomainError, bessel_j, gamma_fn

__all__ = [
    "KernelParams",
    "FiniteSystem",
    "fermi_wavenumber",
    "kernel_value",
    "kernel_closed_form",
    "finite_kernel_value",
    "build_correlation_matrix",
]

_R_ZERO_CUTOFF = 1e-12  # below this in k_F*r the kernel is exactly 1


@dataclass(frozen=True)
class KernelParams:
    """Asymptotic kernel parameters: order nu >= 1/2 and Fermi wavenumber k_f > 0.

    nu = d/2 for physical dimension d, but any real order >= 1/2 is accepted;
    the kernel is a continuous function of nu through the Bessel series.
    """

    nu: float
    k_f: float

    def __post_init__(self):
        if self.nu < 0.5:
            raise ValueError(f"kernel order must be >= 1/2, got {self.nu}")
        if self.k_f <= 0.0:
            raise ValueError(f"Fermi wavenumber must be positive, got {self.k_f}")


def fermi_wavenumber(d: int, n_particles: float) -> float:
    """Fermi wavenumber of N particles in unit volume, dimension d.

    k_F = 2 sqrt(pi) [Gamma(d/2 + 1) N]^(1/d); equivalently the radius at
    which the d-ball in wavevector space holds N modes of density (2pi)^-d.
    """
    if d < 1:
        raise DomainError(f"dimension must be a positive integer, got {d}")
    if n_particles <= 0:
        raise DomainError("particle count must be positive")
    return 2.0 * math.sqrt(math.pi) * (gamma_fn(d / 2.0 + 1.0) * n_particles) ** (1.0 / d)


def kernel_value(params: KernelParams, r):
    """Normalized kernel Gamma(nu+1) (2/(k_F r))^nu J_nu(k_F r); K(0) = 1.

    ``r`` may be a scalar or ndarray of nonnegative separations.  |K| <= 1.
    """
    scalar = np.isscalar(r)
    rarr = np.atleast_1d(np.asarray(r, dtype=float))
    if rarr.size and rarr.min() < 0.0:
        raise ValueError("separations must be >= 0")
    z = params.k_f * rarr
    out = np.ones_like(z)
    big = z >= _R_ZERO_CUTOFF
    if big.any():
        zb = z[big]
        pref = gamma_fn(params.nu + 1.0) * (2.0 / zb) ** params.nu
        out[big] = pref * bessel_j(params.nu, zb)
    return float(out[0]) if scalar else out


def kernel_closed_form(params: KernelParams, r):
    """Elementary-function kernel, defined only for nu = 1/2 or 3/2.

    nu = 1/2: sin(z)/z.  nu = 3/2: 3 (sin z - z cos z)/z^3.  Small-z series
    avoid the 0/0 cancellation; the limit at r = 0 is 1.
    """
    scalar = np.isscalar(r)
    z = params.k_f * np.atleast_1d(np.asarray(r, dtype=float))
    if params.nu == 0.5:
        out = np.ones_like(z)
        nz = z >= _R_ZERO_CUTOFF
        out[nz] = np.sin(z[nz]) / z[nz]
    elif params.nu == 1.5:
        out = np.ones_like(z)
        z2 = z * z
        small = z < 0.01
        # 3(sin z - z cos z)/z^3 = 1 - z^2/10 + z^4/280 - z^6/15120 + ...
        out[small] = 1.0 - z2[small] / 10.0 + z2[small] ** 2 / 280.0
        big = ~small
        out[big] = 3.0 * (np.sin(z[big]) - z[big] * np.cos(z[big])) / z[big] ** 3
    else:
        raise DomainError(f"closed form exists only for nu in {{1/2, 3/2}}, got {params.nu}")
    return float(out[0]) if scalar else out


def _lattice_shells(d: int, max_index: int) -> np.ndarray:
    rng = range(-max_index, max_index + 1)
    return np.array(list(itertools.product(rng, repeat=d)), dtype=int)


@dataclass(frozen=True, eq=False)
class FiniteSystem:
    """N occupied plane-wave modes on the unit torus in dimension d.

    ``modes`` holds the wavevectors (rows, units of inverse length,
    components integer multiples of 2 pi).  The set must be a minimal-norm
    filling: every lattice vector strictly inside the largest occupied norm
    is occupied.  ``degenerate_sea`` reports whether the outermost norm
    shell is only partially filled, in which case the kernel is not
    rotation symmetric.
    """

    dimension: int
    modes: np.ndarray

    def __post_init__(self):
        modes = np.asarray(self.modes, dtype=float)
        if modes.ndim == 1:
            modes = modes.reshape(-1, 1)
        if modes.shape[1] != self.dimension:
            raise ValueError("mode components do not match dimension")
        ints = modes / (2.0 * math.pi)
        if not np.allclose(ints, np.round(ints), atol=1e-9):
            raise ValueError("mode components must be integer multiples of 2 pi")
        object.__setattr__(self, "modes", modes)
        key = {tuple(row) for row in np.round(ints).astype(int)}
        if len(key) != modes.shape[0]:
            raise ValueError("modes must be pairwise distinct")
        # minimal-norm filling check on the integer lattice
        norms = np.linalg.norm(np.round(ints), axis=1)
        rmax = norms.max()
        cand = _lattice_shells(self.dimension, int(math.ceil(rmax)))
        inner = cand[np.linalg.norm(cand, axis=1) < rmax - 1e-9]
        missing = [tuple(v) for v in inner if tuple(v) not in key]
        if missing:
            raise ValueError(f"not a minimal-norm filling; missing interior modes {missing[:3]}")
        on_shell = cand[np.abs(np.linalg.norm(cand, axis=1) - rmax) <= 1e-9]
        object.__setattr__(self, "degenerate_sea", len(on_shell) + len(inner) != modes.shape[0])
        self.modes.setflags(write=False)

    @property
    def n_particles(self) -> int:
        return self.modes.shape[0]

    @classmethod
    def fermi_sea(cls, dimension: int, n_particles: int) -> "FiniteSystem":
        """Canonical sea: the N smallest-norm lattice vectors, ties broken by
        lexicographic order on the integer components."""
        if dimension < 1 or n_particles < 1:
            raise ValueError("dimension and particle count must be positive")
        m = 1
        while True:
            cand = _lattice_shells(dimension, m)
            if len(cand) >= n_particles:
                norms = np.linalg.norm(cand, axis=1)
                if np.sort(norms)[n_particles - 1] <= m:
                    break
            m += 1
        order = sorted(range(len(cand)), key=lambda i: (norms[i], tuple(cand[i])))
        chosen = cand[order[:n_particles]]
        return cls(dimension=dimension, modes=2.0 * math.pi * chosen)


def finite_kernel_value(system: FiniteSystem, displacement) -> complex:
    """(1/N) sum over occupied modes of exp(i k . dr); K(0) = 1, |K| <= 1."""
    dr = np.asarray(displacement, dtype=float).reshape(system.dimension)
    phases = system.modes @ dr
    return complex(np.exp(1j * phases).mean())


def build_correlation_matrix(points, kernel):
    """n x n Hermitian kernel matrix over a point configuration.

    ``kernel`` is either KernelParams (isotropic entries K(|r_i - r_j|),
    real symmetric) or FiniteSystem (entries from the full vector
    displacement, complex Hermitian).  Returns a CorrelationMatrix.
    """
    from .correlations import CorrelationMatrix

    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    n = pts.shape[0]
    if isinstance(kernel, KernelParams):
        diff = pts[:, None, :] - pts[None, :, :]
        dist = np.linalg.norm(diff, axis=2)
        entries = kernel_value(kernel, dist.ravel()).reshape(n, n).astype(complex)
    elif isinstance(kernel, FiniteSystem):
        if pts.shape[1] != kernel.dimension:
            raise ValueError("point dimension does not match system dimension")
        diff = pts[:, None, :] - pts[None, :, :]
        phases = diff @ kernel.modes.T  # (n, n, N)
        entries = np.exp(1j * phases).mean(axis=2)
    else:
        raise TypeError("kernel must be KernelParams or FiniteSystem")
    return CorrelationMatrix(entries)
