"""Entanglement measures for two-qubit density matrices.

Concurrence via the spin-flip spectrum, negativity via the partial
transpose, plus the derived entanglement of formation and logarithmic
negativity. All take validated density matrices (or anything coercible
to one) and return plain floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .states import DensityMatrix2Q, PureState2Q

__all__ = [
    "EntanglementReport",
    "concurrence",
    "negativity",
    "eof",
    "log_negativity",
    "pure_concurrence",
    "report",
]

_RANGE_SLACK = 1e-9

_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_SIGMA_YY = np.kron(_SIGMA_Y, _SIGMA_Y)


def _as_density(rho) -> DensityMatrix2Q:
    if isinstance(rho, DensityMatrix2Q):
        return rho
    return DensityMatrix2Q(np.asarray(rho))


@dataclass(frozen=True)
class EntanglementReport:
    """All four measures of one state.

    Negativity never exceeds concurrence for two qubits; the constructor
    enforces that ordering (within roundoff slack) along with the ranges.
    """

    concurrence: float
    negativity: float
    eof: float
    log_negativity: float

    def __post_init__(self):
        for name in ("concurrence", "negativity", "eof", "log_negativity"):
            v = getattr(self, name)
            if not (-1e-12 <= v <= 1.0 + 1e-12):
                raise ValueError(f"{name} = {v!r} outside [0, 1]")
        if self.negativity > self.concurrence + _RANGE_SLACK:
            raise ValueError(
                f"negativity {self.negativity!r} exceeds concurrence {self.concurrence!r}"
            )


def concurrence(rho) -> float:
    """Concurrence of a two-qubit density matrix.

    The four spin-flip eigenvalue roots lambda_i are sorted ascending; the
    result is max(2*max_i lambda_i - sum_i lambda_i, 0).
    """
    rho = _as_density(rho)
    m = rho.matrix
    flipped = _SIGMA_YY @ m.conj() @ _SIGMA_YY  # spin-flipped partner
    lam = np.sqrt(linalg.nonneg_spectrum_of_product(m @ flipped))
    return max(2.0 * float(lam[-1]) - float(lam.sum()), 0.0)


def negativity(rho) -> float:
    """Twice the magnitude of the negative partial-transpose eigenvalue mass."""
    rho = _as_density(rho)
    mu = linalg.hermitian_eigenvalues(linalg.partial_transpose_first(rho.matrix))
    neg = float(mu[mu < 0.0].sum())
    return 2.0 * max(0.0, -neg)


def _binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def eof(c: float) -> float:
    """Entanglement of formation as a function of the concurrence."""
    if not (-_RANGE_SLACK <= c <= 1.0 + _RANGE_SLACK):
        raise ValueError(f"concurrence {c!r} outside [0, 1]")
    c = min(max(c, 0.0), 1.0)
    x = (1.0 + math.sqrt(1.0 - c * c)) / 2.0
    return _binary_entropy(x)


def log_negativity(n: float) -> float:
    """Logarithmic negativity as a function of the negativity."""
    if not (-_RANGE_SLACK <= n <= 1.0 + _RANGE_SLACK):
        raise ValueError(f"negativity {n!r} outside [0, 1]")
    n = min(max(n, 0.0), 1.0)
    return math.log2(1.0 + n)


def pure_concurrence(psi: PureState2Q) -> float:
    """Concurrence of a pure state: 2 |c00 c11 - c01 c10|."""
    return 2.0 * abs(psi.c00 * psi.c11 - psi.c01 * psi.c10)


def report(rho) -> EntanglementReport:
    """Compute all four measures of one state."""
    c = concurrence(rho)
    n = negativity(rho)
    return EntanglementReport(c, n, eof(c), log_negativity(n))
