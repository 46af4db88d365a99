"""Witness constructions: dephasing channels, the two-basis-split maps, Choi
matrices, circulant forms, mirrored partners, and the operator catalog.

For the qutrit family the split map is

    Phi_G(rho) = d * ( 2*Phi_0(rho) + sum_{a in G_c} Phi_a(rho)
                                    - sum_{b in G}   Phi_b(rho) )

with Phi_a the dephasing channel of basis a and Phi_0(rho) = (1/d) tr(rho) * 1.
The overall factor d is part of the definition here: it makes the Choi matrix
of Phi_G land exactly on the catalog normalization, for which the mirror
relation reads W_G + W_Gc = 4 * identity and tr(W_G rho_G) = -2/5.
"""

from __future__ import annotations

import re as _re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import certify
from .linops import BipartiteOperator, _as_matrix, eig_hermitian
from .mub import MubSet, qutrit_mubs
from .simplex import BellCoefficients, bell_encode, bell_projector


def dephase(basis, rho) -> np.ndarray:
    """Project rho onto a basis: sum_k P_k rho P_k, idempotent and trace-preserving."""
    b = np.asarray(basis, dtype=complex)
    m = _as_matrix(rho)
    if b.ndim != 2 or b.shape[1] != m.shape[0]:
        raise ValueError(f"basis shape {b.shape} does not match operator dim {m.shape[0]}")
    amps = b.conj() @ m @ b.T            # amps[k,k'] = <psi_k| rho |psi_k'>
    return np.einsum("k,ki,kj->ij", np.diagonal(amps), b, b.conj())


def depolarize(rho, d: int | None = None) -> np.ndarray:
    """Completely depolarizing channel: (tr rho / d) * identity."""
    m = _as_matrix(rho)
    d = d or m.shape[0]
    return np.eye(d, dtype=complex) * (np.trace(m) / d)


@dataclass(frozen=True)
class GammaSplit:
    """A nonempty proper subset of the d+1 basis labels {1, ..., d+1}."""

    d: int
    gamma: frozenset

    def __post_init__(self):
        g = frozenset(int(x) for x in self.gamma)
        full = frozenset(range(1, self.d + 2))
        if not g or not g < full:
            raise ValueError(f"gamma must be a nonempty proper subset of {sorted(full)}")
        object.__setattr__(self, "gamma", g)

    @property
    def complement(self) -> frozenset:
        return frozenset(range(1, self.d + 2)) - self.gamma


def phi_gamma_apply(split: GammaSplit, mubs: MubSet, rho) -> np.ndarray:
    """Apply the split map Phi_G (see module docstring) to a d x d operator.

    Only the qutrit case with a 2-element split is defined; there is no
    general-d formula for this map, and higher-dimensional witnesses enter
    through Bell coefficients instead.
    """
    if split.d != 3 or len(split.gamma) != 2 or mubs.d != 3:
        raise ValueError("the split map is defined for d = 3 with a 2-element subset")
    m = _as_matrix(rho)
    out = 2.0 * depolarize(m, 3)
    for a in split.complement:
        out = out + dephase(mubs.bases[a - 1], m)
    for b in split.gamma:
        out = out - dephase(mubs.bases[b - 1], m)
    return 3.0 * out


def choi(channel, d: int) -> BipartiteOperator:
    """Choi matrix sum_{k,l} |k><l| (x) channel(|k><l|); Hermitian for
    Hermiticity-preserving channels, and d * P+ for the identity map."""
    n = d * d
    m = np.zeros((n, n), dtype=complex)
    for k in range(d):
        for l in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[k, l] = 1.0
            m[k * d:(k + 1) * d, l * d:(l + 1) * d] = channel(unit)
    return BipartiteOperator(d, d, m)


@dataclass(frozen=True)
class CirculantParams:
    a: float
    b: float
    x: float
    z: complex


_SQRT3 = np.sqrt(3.0)

# Circulant parameters per 2-element split of the four qutrit bases.
TABLE1: dict[frozenset, CirculantParams] = {
    frozenset({1, 2}): CirculantParams(0, 3, 1, -2),
    frozenset({1, 3}): CirculantParams(0, 3, 1, 1 - 1j * _SQRT3),
    frozenset({1, 4}): CirculantParams(0, 3, 1, 1 + 1j * _SQRT3),
    frozenset({3, 4}): CirculantParams(4, 1, -1, 2),
    frozenset({2, 4}): CirculantParams(4, 1, -1, -1 + 1j * _SQRT3),
    frozenset({2, 3}): CirculantParams(4, 1, -1, -1 - 1j * _SQRT3),
}

# index pairs (row, col) carrying z; z* sits at (1,6),(2,3),(3,7) and the
# Hermitian mirrors follow automatically
_Z_POS = ((1, 5), (2, 7), (3, 2), (5, 6), (6, 1), (7, 3))
_ZC_POS = ((1, 6), (2, 3), (3, 7))


def circulant_witness(p: CirculantParams) -> BipartiteOperator:
    """Assemble the 9 x 9 circulant witness with parameters (a, b, x, z)."""
    m = np.zeros((9, 9), dtype=complex)
    for q in (0, 4, 8):
        m[q, q] = p.a
    for q in (1, 2, 3, 5, 6, 7):
        m[q, q] = p.b
    for q, r in ((0, 4), (0, 8), (4, 8)):
        m[q, r] = m[r, q] = p.x
    for q, r in _Z_POS:
        m[q, r] = p.z
        m[r, q] = np.conjugate(p.z)
    for q, r in _ZC_POS:
        m[q, r] = np.conjugate(p.z)
        m[r, q] = p.z
    return BipartiteOperator(3, 3, m)


def witness_for_split(gamma) -> BipartiteOperator:
    return circulant_witness(TABLE1[frozenset(gamma)])


def mirror_partner(w: BipartiteOperator, mu: float) -> BipartiteOperator:
    """The reflected operator mu * identity - W (an involution for fixed mu)."""
    return BipartiteOperator(w.dA, w.dB, mu * np.eye(w.dim) - w.mat)


@dataclass(frozen=True)
class MirrorResult:
    mu: float
    mu_bracket: tuple
    partner: BipartiteOperator
    partner_min_product_value: float
    partner_max_eigenvalue: float
    partner_is_witness: bool
    converged: bool


def find_mirror_mu(w: BipartiteOperator, restarts: int = 64, seed: int = 0) -> MirrorResult:
    """Smallest mu making mu*1 - W block-positive, by product-state maximization.

    The returned mu is the best product expectation found (a lower bound on the
    true threshold); the bracket's upper end is lambda_max(W), above which the
    partner would stop being block-positive trivially.  When lambda_max(W) > mu
    the partner has a negative eigenvalue and is itself a witness candidate.
    Evidence, not proof: the maximization is nonconvex.
    """
    mx = certify.max_product_expectation(w, restarts=restarts, seed=seed)
    vals, _ = eig_hermitian(w)
    lam_max = float(vals[0])
    mu = float(mx.value)
    partner = mirror_partner(w, mu)
    mn = certify.min_product_expectation(partner, restarts=restarts, seed=seed)
    pvals, _ = eig_hermitian(partner)
    return MirrorResult(
        mu=mu,
        mu_bracket=(mu, lam_max),
        partner=partner,
        partner_min_product_value=float(mn.value),
        partner_max_eigenvalue=float(pvals[0]),
        partner_is_witness=lam_max > mu + 1e-12,
        converged=mx.converged and mn.converged,
    )


# --- operator catalog ---------------------------------------------------------

_RHO_GAMMA_INT = np.array([
    [3, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 1, 1, 0, 0],
    [0, 0, 1, 1, 0, 0, 0, 1, 0],
    [0, 0, 1, 1, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 3, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 1, 1, 0, 0],
    [0, 1, 0, 0, 0, 1, 1, 0, 0],
    [0, 0, 1, 1, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 3],
])
_RHO_GAMMA_C_INT = np.array([
    [1, 0, 0, 0, 1, 0, 0, 0, 1],
    [0, 2, 0, 0, 0, -1, -1, 0, 0],
    [0, 0, 2, -1, 0, 0, 0, -1, 0],
    [0, 0, -1, 2, 0, 0, 0, -1, 0],
    [1, 0, 0, 0, 1, 0, 0, 0, 1],
    [0, -1, 0, 0, 0, 2, -1, 0, 0],
    [0, -1, 0, 0, 0, -1, 2, 0, 0],
    [0, 0, -1, -1, 0, 0, 0, 2, 0],
    [1, 0, 0, 0, 1, 0, 0, 0, 1],
])
_RHO_SCALE_D3 = Fraction(1, 15)

# Bell-coefficient views of the qutrit pair (witnesses carry no scale; the
# states carry 1/5).
W_GAMMA_12_BELL = BellCoefficients(3, np.array([[2, -1, -1], [-1, 5, 5], [-1, 5, 5]], dtype=float))
W_GAMMA_34_BELL = BellCoefficients(3, np.array([[2, 5, 5], [5, -1, -1], [5, -1, -1]], dtype=float))
RHO_GAMMA_BELL = BellCoefficients(3, np.array([[1, 1, 1], [1, 0, 0], [1, 0, 0]], dtype=float) / 5)
RHO_GAMMA_C_BELL = BellCoefficients(3, np.array([[1, 0, 0], [0, 1, 1], [0, 1, 1]], dtype=float) / 5)

_KAPPA_D5 = {
    "W1_d5": [
        [4, -1, -1, -1, -1],
        [-1, -1, 9, 9, 9],
        [-1, 9, -1, 9, 9],
        [-1, 9, 9, -1, 9],
        [-1, 9, 9, 9, -1]],
    "W2_d5": [
        [4, 9, 9, 9, 9],
        [9, 9, -1, -1, -1],
        [9, -1, 9, -1, -1],
        [9, -1, -1, 9, -1],
        [9, -1, -1, -1, 9]],
    "W3_d5": [
        [4, -1, -1, -1, -1],
        [9, 9, -1, 9, -1],
        [9, 9, 9, -1, -1],
        [9, -1, -1, 9, 9],
        [9, -1, 9, -1, 9]],
    "W4_d5": [
        [4, 9, 9, 9, 9],
        [-1, -1, 9, -1, 9],
        [-1, -1, -1, 9, 9],
        [-1, 9, 9, -1, -1],
        [-1, 9, -1, 9, -1]],
}

_C_D5 = {
    "rho1_d5": [
        [1, 1, 1, 1, 1],
        [1, 1, 0, 0, 0],
        [1, 0, 1, 0, 0],
        [1, 0, 0, 1, 0],
        [1, 0, 0, 0, 1]],
    "rho2_d5": [
        [1, 0, 0, 0, 0],
        [0, 0, 1, 1, 1],
        [0, 1, 0, 1, 1],
        [0, 1, 1, 0, 1],
        [0, 1, 1, 1, 0]],
    # source table as printed: the coefficients sum to 9/13, not 1
    "rho3_d5_printed": [
        [1, 0, 0, 0, 0],
        [0, 0, 1, 0, 1],
        [0, 0, 0, 1, 1],
        [0, 1, 1, 0, 0],
        [0, 1, 0, 1, 0]],
    # first row completed to all ones: normalizes and reproduces the -8/13
    # detection value of the other pairs
    "rho3_d5_corrected": [
        [1, 1, 1, 1, 1],
        [0, 0, 1, 0, 1],
        [0, 0, 0, 1, 1],
        [0, 1, 1, 0, 0],
        [0, 1, 0, 1, 0]],
    "rho4_d5": [
        [1, 0, 0, 0, 0],
        [1, 1, 0, 1, 0],
        [1, 1, 1, 0, 0],
        [1, 0, 0, 1, 1],
        [1, 0, 1, 0, 1]],
}

_GAMMA_NAMES = {
    "W_gamma_12": (1, 2), "W_gamma_13": (1, 3), "W_gamma_14": (1, 4),
    "W_gamma_34": (3, 4), "W_gamma_24": (2, 4), "W_gamma_23": (2, 3),
}

_FLIP_RE = _re.compile(r"^flip_d(\d+)$")
_REDUCTION_RE = _re.compile(r"^reduction_d(\d+)$")


def flip_operator(d: int) -> BipartiteOperator:
    """Swap operator sum |k><l| (x) |l><k|; an optimal decomposable witness."""
    m = np.zeros((d * d, d * d))
    for k in range(d):
        for l in range(d):
            m[k * d + l, l * d + k] = 1.0
    return BipartiteOperator(d, d, m)


def reduction_witness(d: int) -> BipartiteOperator:
    """identity - d * P+, the witness of the reduction map X -> 1 tr X - X."""
    m = np.eye(d * d, dtype=complex) - d * bell_projector(d, 0, 0).mat
    return BipartiteOperator(d, d, m)


class CatalogError(KeyError):
    pass


def catalog_names() -> list[str]:
    names = sorted(_GAMMA_NAMES)
    names += ["rho_gamma", "rho_gamma_c", "rho3_d3", "rho4_d3", "flip_d3", "reduction_d3"]
    names += sorted(_KAPPA_D5)
    names += ["rho1_d5", "rho2_d5", "rho3_d5_printed", "rho3_d5_corrected", "rho4_d5"]
    return names


def catalog(name: str):
    """Exact catalog entries by name.

    Qutrit entries come back as BipartiteOperator; the five-level family comes
    back as BellCoefficients (use `catalog_operator` for a dense matrix).
    `flip_dN` / `reduction_dN` accept any N >= 2.
    """
    if name in _GAMMA_NAMES:
        return witness_for_split(_GAMMA_NAMES[name])
    if name == "rho_gamma":
        return BipartiteOperator(3, 3, _RHO_GAMMA_INT * float(_RHO_SCALE_D3))
    if name == "rho_gamma_c":
        return BipartiteOperator(3, 3, _RHO_GAMMA_C_INT * float(_RHO_SCALE_D3))
    if name == "rho3_d3":
        m = sum(bell_projector(3, k, l).mat for k, l in ((0, 1), (0, 2), (1, 0), (2, 0)))
        return BipartiteOperator(3, 3, m / 4.0)
    if name == "rho4_d3":
        m = sum(bell_projector(3, k, l).mat for k, l in ((1, 1), (1, 2), (2, 1), (2, 2)))
        return BipartiteOperator(3, 3, m / 4.0)
    if name in _KAPPA_D5:
        return BellCoefficients(5, np.array(_KAPPA_D5[name], dtype=float))
    if name in _C_D5:
        return BellCoefficients(5, np.array(_C_D5[name], dtype=float) / 13.0)
    if name == "rho3_d5":
        raise CatalogError(
            "rho3_d5 is ambiguous: the table as printed does not normalize "
            "(coefficient sum 9/13); request 'rho3_d5_printed' or "
            "'rho3_d5_corrected' explicitly")
    m = _FLIP_RE.match(name)
    if m:
        return flip_operator(int(m.group(1)))
    m = _REDUCTION_RE.match(name)
    if m:
        return reduction_witness(int(m.group(1)))
    raise CatalogError(f"unknown catalog name {name!r}; see catalog_names()")


def catalog_operator(name: str) -> BipartiteOperator:
    """Catalog entry as a dense operator, encoding Bell coefficients if needed."""
    entry = catalog(name)
    if isinstance(entry, BellCoefficients):
        return bell_encode(entry)
    return entry
