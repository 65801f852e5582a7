"""Spectral statistics and reference random-matrix laws."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special, stats

from .errors import DomainError, EmptySample
from .linalg import EigenSystem


@dataclass(frozen=True)
class Histogram:
    bin_edges: np.ndarray
    densities: np.ndarray
    sample_count: int

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[1:] + self.bin_edges[:-1])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    def integral(self) -> float:
        return float(np.sum(self.densities * self.widths))


def histogram(sample, bins: int = 50, range: tuple[float, float] | None = None) -> Histogram:
    """Normalized histogram over the observed range (or ``range``)."""
    sample = np.asarray(sample, dtype=float)
    if sample.size == 0:
        raise EmptySample("cannot histogram an empty sample")
    lo, hi = range if range is not None else (sample.min(), sample.max())
    if hi <= lo:
        # point mass: a single bin of unit width around the value
        lo, hi = lo - 0.5, lo + 0.5
    counts, edges = np.histogram(sample, bins=bins, range=(lo, hi))
    densities = counts / (sample.size * np.diff(edges))
    return Histogram(edges, densities, int(sample.size))


def count_peaks(hist: Histogram, factor: float = 2.0) -> int:
    """Local maxima with density above ``factor`` times the median bin density.

    A bin is a local maximum when it exceeds its left neighbour and is not
    smaller than its right neighbour; plateaus count once.
    """
    d = hist.densities
    threshold = factor * np.median(d)
    peaks = 0
    for i in range(len(d)):
        left = d[i - 1] if i > 0 else -np.inf
        right = d[i + 1] if i + 1 < len(d) else -np.inf
        if d[i] > threshold and d[i] > left and d[i] >= right:
            peaks += 1
    return peaks


# --- spacings ---------------------------------------------------------------

def eigenphase_spacings(es: EigenSystem | np.ndarray) -> np.ndarray:
    """N circular nearest-neighbour spacings in units of the mean spacing.

    Includes the wrap-around gap phi_1 + 2 pi - phi_N, so the spacings sum
    to N and their mean is 1.
    """
    phases = np.sort(es.phases if isinstance(es, EigenSystem) else np.asarray(es, dtype=float))
    N = phases.size
    if N < 2:
        raise ValueError("need at least two eigenphases")
    gaps = np.diff(phases, append=phases[0] + 2 * np.pi)
    return gaps * N / (2 * np.pi)


def wigner_dyson_pdf(s):
    s = np.asarray(s, dtype=float)
    return np.pi * s / 2 * np.exp(-np.pi * s**2 / 4)


def wigner_dyson_cdf(s):
    s = np.asarray(s, dtype=float)
    return np.where(s > 0, -np.expm1(-np.pi * np.maximum(s, 0) ** 2 / 4), 0.0)


def poisson_pdf(s):
    s = np.asarray(s, dtype=float)
    return np.exp(-s)


def poisson_cdf(s):
    s = np.asarray(s, dtype=float)
    return np.where(s > 0, -np.expm1(-np.maximum(s, 0)), 0.0)


# --- eigenvector statistics ---------------------------------------------------

def eigenvector_component_sample(es: EigenSystem | np.ndarray) -> np.ndarray:
    """All N**2 rescaled intensities y = N |c_i|**2 (mean 1)."""
    V = es.vectors if isinstance(es, EigenSystem) else np.asarray(es)
    N = V.shape[0]
    return (N * np.abs(V) ** 2).ravel()


def porter_thomas_pdf(y):
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise DomainError("Porter-Thomas density is defined for y > 0 only")
    return np.exp(-y / 2) / np.sqrt(2 * np.pi * y)


def porter_thomas_cdf(y):
    y = np.asarray(y, dtype=float)
    return special.erf(np.sqrt(np.maximum(y, 0) / 2))


def root_of_unity_defect(es: EigenSystem | np.ndarray, m: int) -> float:
    """Largest distance (in the complex plane) from an eigenvalue to the
    nearest m-th root of unity."""
    if m < 1:
        raise ValueError("m must be >= 1")
    lam = es.eigenvalues if isinstance(es, EigenSystem) else np.asarray(es)
    angle = np.angle(lam)
    step = 2 * np.pi / m
    nearest = np.exp(1j * step * np.round(angle / step))
    return float(np.abs(lam - nearest).max())


def ks_distance(sample, cdf: Callable) -> float:
    """One-sample Kolmogorov-Smirnov sup distance."""
    sample = np.asarray(sample, dtype=float)
    if sample.size == 0:
        raise EmptySample("KS distance of an empty sample")
    return float(stats.kstest(sample, cdf).statistic)


def ks_two_sample(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise EmptySample("KS distance of an empty sample")
    return float(stats.ks_2samp(a, b).statistic)


# --- random matrix samplers (test oracles) -----------------------------------

def cue_matrix(N: int, rng) -> np.ndarray:
    return stats.unitary_group.rvs(N, random_state=np.random.default_rng(rng))


def coe_matrix(N: int, rng) -> np.ndarray:
    """Circular orthogonal ensemble sample W^T W with W Haar unitary."""
    W = cue_matrix(N, rng)
    return W.T @ W
