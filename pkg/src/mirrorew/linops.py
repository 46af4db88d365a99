"""Dense complex linear algebra on bipartite spaces.

Operators live on C^dA (x) C^dB with the product basis |k>|l| mapped to the
row-major index k*dB + l.  All functions are pure; `BipartiteOperator` and
`Vector` are immutable after construction.

Tolerance tiers used throughout the package:
  exact-structure checks   1e-12
  eigen/optimization       1e-9
  value reproduction       1e-9 relative
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

HERMITICITY_TOL = 1e-12
EIG_INPUT_TOL = 1e-10


def _as_matrix(x) -> np.ndarray:
    """Accept a BipartiteOperator or anything array-like; return a complex square matrix."""
    if isinstance(x, BipartiteOperator):
        return x.mat
    m = np.asarray(x, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class BipartiteOperator:
    """Dense operator on C^dA (x) C^dB, entries indexed by (k*dB+l, m*dB+n)."""

    dA: int
    dB: int
    mat: np.ndarray

    def __post_init__(self):
        if self.dA < 1 or self.dB < 1:
            raise ValueError("subsystem dimensions must be positive")
        m = np.asarray(self.mat, dtype=complex)
        n = self.dA * self.dB
        if m.shape != (n, n):
            raise ValueError(f"matrix shape {m.shape} does not match dA*dB = {n}")
        if not np.isfinite(m).all():
            raise ValueError("operator entries must be finite")
        object.__setattr__(self, "mat", _frozen(m))

    @property
    def dim(self) -> int:
        return self.dA * self.dB

    def is_hermitian(self, tol: float = HERMITICITY_TOL) -> bool:
        return float(np.max(np.abs(self.mat - self.mat.conj().T))) <= tol

    def trace(self) -> complex:
        return complex(np.trace(self.mat))


@dataclass(frozen=True)
class Vector:
    """Complex column vector; `normalized` means | ||v|| - 1 | <= 1e-12."""

    entries: np.ndarray
    d: int = field(init=False)

    def __post_init__(self):
        v = np.asarray(self.entries, dtype=complex).reshape(-1)
        if v.size == 0 or not np.isfinite(v).all():
            raise ValueError("vector entries must be nonempty and finite")
        object.__setattr__(self, "entries", _frozen(v))
        object.__setattr__(self, "d", v.size)

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def unit(self) -> "Vector":
        return Vector(self.entries / self.norm())


def tensor(a, b, dA: int | None = None, dB: int | None = None) -> BipartiteOperator:
    """Kronecker product A (x) B as a BipartiteOperator.

    (A (x) B)[(i*dB+j),(k*dB+l)] = A[i,k] * B[j,l].
    """
    ma, mb = _as_matrix(a), _as_matrix(b)
    return BipartiteOperator(dA or ma.shape[0], dB or mb.shape[0], np.kron(ma, mb))


def partial_transpose(x: BipartiteOperator, subsystem: str = "B") -> BipartiteOperator:
    """Transpose one tensor factor; involutive, trace- and Hermiticity-preserving."""
    dA, dB = x.dA, x.dB
    t = x.mat.reshape(dA, dB, dA, dB)
    if subsystem == "B":
        t = t.transpose(0, 3, 2, 1)
    elif subsystem == "A":
        t = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError("subsystem must be 'A' or 'B'")
    return BipartiteOperator(dA, dB, t.reshape(dA * dB, dA * dB))


def eig_hermitian(x) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian operator.

    Returns (eigenvalues sorted descending, eigenvectors as matching orthonormal
    columns).  Input must be Hermitian within 1e-10; it is symmetrized as
    (X + X^dag)/2 before solving.
    """
    m = _as_matrix(x)
    dev = float(np.max(np.abs(m - m.conj().T)))
    if dev > EIG_INPUT_TOL:
        raise ValueError(f"matrix is not Hermitian: max |X - X^dag| = {dev:.3e}")
    h = (m + m.conj().T) / 2
    vals, vecs = np.linalg.eigh(h)
    order = np.argsort(vals)[::-1]
    return vals[order], vecs[:, order]


def mat(x) -> np.ndarray:
    """Public alias for coercion to a plain complex matrix."""
    return _as_matrix(x)


# --- operator JSON format (library-wide wire format) -------------------------
#
#   {"dA": int, "dB": int, "re": [[...]], "im": [[...]]}
#
# with row-major dA*dB x dA*dB real matrices.  Floats are written with 17
# significant digits so that write -> read is bit-identical.


def _fmt(x: float) -> str:
    if x == 0.0:
        return "0"
    return format(float(x), ".17g")


def operator_to_json(op: BipartiteOperator) -> str:
    re_rows = [",".join(_fmt(v) for v in row) for row in op.mat.real]
    im_rows = [",".join(_fmt(v) for v in row) for row in op.mat.imag]
    body = ",".join("[%s]" % r for r in re_rows)
    body_im = ",".join("[%s]" % r for r in im_rows)
    return '{"dA": %d, "dB": %d, "re": [%s], "im": [%s]}' % (op.dA, op.dB, body, body_im)


def operator_from_json(text: str) -> BipartiteOperator:
    obj = json.loads(text)
    try:
        dA, dB = int(obj["dA"]), int(obj["dB"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed operator JSON: {exc}") from exc
    n = dA * dB
    if re.shape != (n, n) or im.shape != (n, n):
        raise ValueError(
            f"operator JSON size mismatch: dA*dB = {n} but re {re.shape}, im {im.shape}"
        )
    return BipartiteOperator(dA, dB, re + 1j * im)


def save_operator(op: BipartiteOperator, path) -> None:
    with open(path, "w") as fh:
        fh.write(operator_to_json(op))
        fh.write("\n")


def load_operator(path) -> BipartiteOperator:
    with open(path) as fh:
        return operator_from_json(fh.read())
