"""Mutually unbiased bases: the standard qutrit quadruple and the odd-prime construction.

A set of d+1 bases of C^d is mutually unbiased when every basis is orthonormal
and |<psi|phi>|^2 = 1/d for vectors from different bases.  Bases are stored as
(d, d) arrays with basis[k] = k-th vector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MUB_TOL = 1e-12


def _is_odd_prime(d: int) -> bool:
    if d < 3 or d % 2 == 0:
        return False
    return all(d % p for p in range(3, int(d**0.5) + 1, 2))


@dataclass(frozen=True)
class MubSet:
    d: int
    bases: tuple

    def __post_init__(self):
        if len(self.bases) != self.d + 1:
            raise ValueError(f"expected {self.d + 1} bases, got {len(self.bases)}")
        frozen = []
        for b in self.bases:
            m = np.ascontiguousarray(np.asarray(b, dtype=complex))
            if m.shape != (self.d, self.d):
                raise ValueError(f"each basis must be ({self.d},{self.d}), got {m.shape}")
            m.flags.writeable = False
            frozen.append(m)
        object.__setattr__(self, "bases", tuple(frozen))

    def vector(self, basis: int, k: int) -> np.ndarray:
        return self.bases[basis][k]


@dataclass(frozen=True)
class MubReport:
    orthonormality_violation: float
    unbiasedness_violation: float

    @property
    def passes(self) -> bool:
        return (self.orthonormality_violation <= MUB_TOL
                and self.unbiasedness_violation <= MUB_TOL)


def qutrit_mubs() -> MubSet:
    """The fixed qutrit MUB quadruple the witness catalog is built on.

    Basis 0 is computational; bases 1..3 are Fourier-type with
    third-root-of-unity phases.  The two-basis split labels of the witness
    catalog depend on this exact basis and vector ordering, so the catalog is
    never built from build_mubs(3), whose conventions differ.
    """
    w = np.exp(2j * np.pi / 3)
    wc = w.conjugate()
    s = 1 / np.sqrt(3.0)
    b1 = np.eye(3, dtype=complex)
    b2 = s * np.array([[1, 1, 1], [1, wc, w], [1, w, wc]], dtype=complex)
    b3 = s * np.array([[1, 1, wc], [1, w, w], [1, wc, 1]], dtype=complex)
    b4 = s * np.array([[1, 1, w], [1, wc, wc], [1, w, 1]], dtype=complex)
    return MubSet(3, (b1, b2, b3, b4))


def build_mubs(d: int) -> MubSet:
    """Full set of d+1 MUBs for an odd prime d.

    Basis 0 is computational; basis a in 1..d has components
    <j|psi_k^(a)> = w^(a*j^2 + j*k) / sqrt(d) with w = exp(2 pi i / d).
    Component j=0 is real positive, which fixes all global phases.
    """
    if not _is_odd_prime(d):
        raise ValueError(f"d = {d} is not an odd prime (prime powers are unsupported)")
    j = np.arange(d)
    bases = [np.eye(d, dtype=complex)]
    for a in range(1, d + 1):
        phases = np.empty((d, d), dtype=complex)
        for k in range(d):
            phases[k] = np.exp(2j * np.pi * ((a * j * j + j * k) % d) / d)
        bases.append(phases / np.sqrt(d))
    return MubSet(d, tuple(bases))


def verify_mub(ms: MubSet) -> MubReport:
    """Worst orthonormality and unbiasedness violations over the whole set."""
    d = ms.d
    ortho = 0.0
    for b in ms.bases:
        gram = b.conj() @ b.T
        ortho = max(ortho, float(np.max(np.abs(gram - np.eye(d)))))
    unb = 0.0
    for i in range(len(ms.bases)):
        for k in range(i + 1, len(ms.bases)):
            ov = np.abs(ms.bases[i].conj() @ ms.bases[k].T) ** 2
            unb = max(unb, float(np.max(np.abs(ov - 1.0 / d))))
    return MubReport(ortho, unb)
