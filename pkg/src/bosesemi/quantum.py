"""Exact N-particle side: Hamiltonian construction, diagonalization,
momentum-space eigenvectors and level-density histograms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams
from .tridiag import tridiag_eigh


@dataclass(frozen=True)
class TridiagonalHamiltonian:
    """Two-mode Hamiltonian in the number basis |n1, N - n1>, n1 = 0..N.

    Symmetrizing the occupation operators shifts the diagonal by the
    constant g*(N + 1/2); that symmetrized form is what corresponds to
    the classical energy function.
    """

    diag: np.ndarray
    offdiag: np.ndarray
    params: ModelParams
    symmetrized: bool

    def norm(self) -> float:
        return float(max(np.max(np.abs(self.diag)), np.max(np.abs(self.offdiag))))

    def dense(self) -> np.ndarray:
        return (
            np.diag(self.diag)
            + np.diag(self.offdiag, 1)
            + np.diag(self.offdiag, -1)
        )


def build_hamiltonian(params: ModelParams, symmetrized=True) -> TridiagonalHamiltonian:
    """Matrix elements in the number basis.

    diag[n1]    = eps*(2 n1 - N) + g*(n1^2 + n2^2) [+ g*(N + 1/2) if symmetrized]
    offdiag[n1] = v*sqrt((n1 + 1)(N - n1))   coupling n1 <-> n1 + 1
    """
    n1 = np.arange(params.N + 1, dtype=float)
    n2 = params.N - n1
    diag = params.eps * (2.0 * n1 - params.N) + params.g * (n1**2 + n2**2)
    if symmetrized:
        diag = diag + params.g * (params.N + 0.5)
    offdiag = params.v * np.sqrt((n1[:-1] + 1.0) * (params.N - n1[:-1]))
    return TridiagonalHamiltonian(diag=diag, offdiag=offdiag, params=params,
                                  symmetrized=symmetrized)


@dataclass(frozen=True)
class Spectrum:
    params: ModelParams
    energies: np.ndarray
    eigenvectors: np.ndarray | None = None
    symmetrized: bool = True


def diagonalize(ham: TridiagonalHamiltonian, want_vectors=False) -> Spectrum:
    """All N + 1 eigenvalues (ascending), optionally with orthonormal
    eigenvectors whose first nonzero component is positive."""
    res = tridiag_eigh(ham.diag, ham.offdiag, want_vectors=want_vectors)
    if want_vectors:
        w, vec = res
        return Spectrum(params=ham.params, energies=w, eigenvectors=vec,
                        symmetrized=ham.symmetrized)
    return Spectrum(params=ham.params, energies=res[0], eigenvectors=None,
                    symmetrized=ham.symmetrized)


def exact_spectrum(params: ModelParams, symmetrized=True, want_vectors=False) -> Spectrum:
    return diagonalize(build_hamiltonian(params, symmetrized), want_vectors)


@dataclass(frozen=True)
class MomentumWavefunction:
    """|Psi_n(p)|^2 on the discrete grid p = -N, -N + 2, ..., N.

    The grid carries the dimensionless momentum labels 2*n1 - N; the
    physical momentum is label * hbar.
    """

    grid: np.ndarray
    values: np.ndarray
    kind: str          # exact | primitive | uniform
    state_index: int
    energy: float


def momentum_grid(params: ModelParams) -> np.ndarray:
    return np.arange(-params.N, params.N + 1, 2, dtype=float)


def momentum_representation(spec: Spectrum, n: int) -> MomentumWavefunction:
    """Probability distribution of the population imbalance for state n."""
    if spec.eigenvectors is None:
        raise ValueError("spectrum was computed without eigenvectors")
    if not 0 <= n <= spec.params.N:
        raise ValueError(f"state index {n} outside 0..{spec.params.N}")
    vals = spec.eigenvectors[:, n] ** 2
    return MomentumWavefunction(
        grid=momentum_grid(spec.params),
        values=vals / np.sum(vals),
        kind="exact",
        state_index=n,
        energy=float(spec.energies[n]),
    )


@dataclass(frozen=True)
class LevelDensity:
    bin_edges: np.ndarray
    heights: np.ndarray
    normalization: float = 1.0


def level_density(spec: Spectrum, num_bins: int) -> LevelDensity:
    """Histogram of the spectrum over [E_min, E_max], normalized so the
    integral over energy is one."""
    if num_bins < 2:
        raise ValueError("need at least 2 bins")
    e = spec.energies
    if e.max() == e.min():
        raise ValueError("degenerate spectrum range; histogram undefined")
    heights, edges = np.histogram(e, bins=num_bins, range=(e.min(), e.max()),
                                  density=True)
    return LevelDensity(bin_edges=edges, heights=heights, normalization=1.0)
