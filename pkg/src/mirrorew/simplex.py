"""Weyl operators, generalized Bell states, and magic-simplex geometry.

The Bell basis is generated from the canonical maximally entangled vector by
unitaries acting on the second factor:

    W_{k,l} = sum_j w^(j k) |j><j+l|   (indices mod d, w = exp(2 pi i/d))
    |Omega_{k,l}> = (1 (x) W_{k,l}) |Omega_{0,0}>

Bell-diagonal operators X = sum x_{k,l} P_{k,l} are handled through their real
coefficient matrices; for states the coefficients are a probability vector.
The simplex geometry (phase-space lines, kernel, enclosure polytope) and the
two-parameter slice scans used for region classification live here as well.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .linops import BipartiteOperator, _as_matrix, _frozen, partial_transpose

STATE_EIG_TOL = 1e-10       # positivity / PPT threshold on minimum eigenvalue
ENCLOSURE_TOL = 1e-12


def worker_count() -> int:
    """Worker cap for data-parallel scans; honours the EW_THREADS env var."""
    n = os.cpu_count() or 1
    env = os.environ.get("EW_THREADS")
    if env:
        try:
            n = min(n, max(1, int(env)))
        except ValueError:
            pass
    return n


@dataclass(frozen=True)
class WeylOp:
    d: int
    k: int
    l: int
    mat: np.ndarray


def weyl(d: int, k: int, l: int) -> WeylOp:
    """Unitary displacement operator W_{k,l}; W_{0,0} is the identity."""
    if d < 2:
        raise ValueError("d must be at least 2")
    k, l = k % d, l % d
    m = np.zeros((d, d), dtype=complex)
    w = np.exp(2j * np.pi / d)
    for j in range(d):
        m[j, (j + l) % d] = w ** (j * k)
    return WeylOp(d, k, l, _frozen(m))


def max_entangled_vector(d: int) -> np.ndarray:
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1 / np.sqrt(d)
    return v


def bell_vector(d: int, k: int, l: int) -> np.ndarray:
    return np.kron(np.eye(d), weyl(d, k, l).mat) @ max_entangled_vector(d)


def bell_projector(d: int, k: int, l: int) -> BipartiteOperator:
    """Rank-1 projector onto |Omega_{k,l}>; the d^2 of them resolve the identity."""
    v = bell_vector(d, k, l)
    return BipartiteOperator(d, d, np.outer(v, v.conj()))


def _projector_stack(d: int) -> np.ndarray:
    """All d^2 Bell projectors as an array of shape (d, d, d^2, d^2)."""
    out = np.empty((d, d, d * d, d * d), dtype=complex)
    for k in range(d):
        for l in range(d):
            out[k, l] = bell_projector(d, k, l).mat
    return out


@dataclass(frozen=True)
class BellCoefficients:
    """Real coefficients x_{k,l} of a Bell-diagonal operator."""

    d: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape != (self.d, self.d):
            raise ValueError(f"coefficients must be ({self.d},{self.d}), got {c.shape}")
        object.__setattr__(self, "coeffs", _frozen(c))

    def is_state(self, tol: float = STATE_EIG_TOL) -> bool:
        return bool(np.all(self.coeffs >= -tol)) and abs(self.coeffs.sum() - 1.0) <= 1e-12


def bell_encode(bc: BellCoefficients) -> BipartiteOperator:
    """sum_{k,l} x_{k,l} P_{k,l} as a dense operator."""
    d = bc.d
    P = _projector_stack(d)
    m = np.einsum("kl,klij->ij", bc.coeffs, P)
    return BipartiteOperator(d, d, m)


def bell_decode(x, d: int | None = None, tol: float = 1e-12) -> tuple[BellCoefficients, float]:
    """Coefficients x_{k,l} = tr(X P_{k,l}) and the max-norm residual.

    A residual above `tol` flags non-Bell-diagonal input; no exception is raised.
    """
    m = _as_matrix(x)
    if d is None:
        if isinstance(x, BipartiteOperator):
            if x.dA != x.dB:
                raise ValueError("Bell decomposition needs equal subsystem dimensions")
            d = x.dA
        else:
            d = int(round(m.shape[0] ** 0.5))
    if d * d != m.shape[0]:
        raise ValueError(f"matrix of size {m.shape[0]} is not d^2 x d^2")
    P = _projector_stack(d)
    raw = np.einsum("klij,ji->kl", P, m)
    coeffs = raw.real
    recon = np.einsum("kl,klij->ij", coeffs, P)
    residual = float(np.max(np.abs(m - recon)))
    return BellCoefficients(d, coeffs), residual


def phase_space_lines(d: int) -> list[tuple[tuple[int, int], ...]]:
    """All affine lines of Z_d x Z_d: d+1 directions times d offsets.

    Each line has d points and every point lies on exactly d+1 lines.
    """
    from .mub import _is_odd_prime

    if not _is_odd_prime(d):
        raise ValueError(f"d = {d} is not an odd prime")
    lines = []
    for c in range(d):                      # vertical direction (0,1)
        lines.append(tuple((c, t) for t in range(d)))
    for slope in range(d):                  # directions (1, slope)
        for b in range(d):
            lines.append(tuple((t, (b + t * slope) % d) for t in range(d)))
    return lines


def line_coefficients(d: int, line) -> BellCoefficients:
    """Uniform mixture over one phase-space line (a separable edge of the simplex)."""
    c = np.zeros((d, d))
    for k, l in line:
        c[k % d, l % d] += 1.0 / d
    return BellCoefficients(d, c)


def in_enclosure(bc: BellCoefficients) -> bool:
    """True iff the state's coefficients all lie in [0, 1/d] (within tolerance)."""
    if not bc.is_state():
        raise ValueError("enclosure test is defined for states (nonnegative, sum 1)")
    return bool(np.all(bc.coeffs <= 1.0 / bc.d + ENCLOSURE_TOL))


def kernel_feasibility(bc: BellCoefficients) -> bool:
    """Membership test for the convex hull of the line-uniform mixtures.

    Feasibility LP over the d(d+1) line distributions; evidence of separability
    for points inside.  Not used by any pass/fail gate.
    """
    from scipy.optimize import linprog

    if not bc.is_state():
        raise ValueError("kernel test is defined for states")
    d = bc.d
    lines = phase_space_lines(d)
    A = np.stack([line_coefficients(d, ln).coeffs.ravel() for ln in lines], axis=1)
    A_eq = np.vstack([A, np.ones((1, len(lines)))])
    b_eq = np.concatenate([bc.coeffs.ravel(), [1.0]])
    res = linprog(np.zeros(len(lines)), A_eq=A_eq, b_eq=b_eq,
                  bounds=[(0, None)] * len(lines), method="highs")
    return bool(res.success)


def slice_state(alpha: float, beta: float, rho_a, rho_b, d: int) -> BipartiteOperator:
    """Affine family ((1-a-b)/d^2) * identity + a*rho_a + b*rho_b.

    Always unit trace; positivity is the classifier's job, not guaranteed here.
    """
    ma, mb = _as_matrix(rho_a), _as_matrix(rho_b)
    n = d * d
    m = ((1.0 - alpha - beta) / n) * np.eye(n) + alpha * ma + beta * mb
    return BipartiteOperator(d, d, m)


@dataclass(frozen=True)
class GridSpec:
    alpha_min: float
    alpha_max: float
    beta_min: float
    beta_max: float
    steps: int = 201

    def alphas(self) -> np.ndarray:
        return np.linspace(self.alpha_min, self.alpha_max, self.steps)

    def betas(self) -> np.ndarray:
        return np.linspace(self.beta_min, self.beta_max, self.steps)


@dataclass(frozen=True)
class SlicePoint:
    alpha: float
    beta: float
    is_state: bool
    min_eig: float
    is_ppt: bool
    min_ppt_eig: float
    in_enclosure: bool
    witness_values: tuple


@dataclass(frozen=True)
class SliceGrid:
    spec: GridSpec
    d: int
    witness_names: tuple
    points: tuple

    def point(self, i: int, j: int) -> SlicePoint:
        return self.points[i * self.spec.steps + j]

    def min_ppt_grid(self) -> np.ndarray:
        n = self.spec.steps
        return np.array([p.min_ppt_eig for p in self.points]).reshape(n, n)

    def is_ppt_grid(self) -> np.ndarray:
        n = self.spec.steps
        return np.array([p.is_ppt for p in self.points]).reshape(n, n)


def scan_slice(spec: GridSpec, rho_a, rho_b, witnesses: dict, d: int,
               chunk: int = 2048) -> SliceGrid:
    """Classify every grid node of the (alpha, beta) slice.

    Per node: minimum eigenvalue (state iff >= -1e-10), minimum eigenvalue of
    the partial transpose (PPT iff >= -1e-10 and a state), tr(W rho) for every
    named witness (computed pointwise, not by interpolation), and the
    enclosure-box flag from the Bell-diagonal part.  Output is in row-major
    (alpha-index, beta-index) order regardless of execution order.
    """
    n = d * d
    ma, mb = _as_matrix(rho_a), _as_matrix(rho_b)
    for nm, wop in witnesses.items():
        wm = _as_matrix(wop)
        if wm.shape != (n, n):
            raise ValueError(f"witness {nm!r} has shape {wm.shape}, expected ({n},{n})")
    wnames = tuple(witnesses)
    wmats = np.stack([_as_matrix(witnesses[nm]) for nm in wnames]) if wnames else \
        np.zeros((0, n, n), dtype=complex)

    eye = np.eye(n, dtype=complex) / n
    pt = lambda m: partial_transpose(BipartiteOperator(d, d, m), "B").mat
    ma_t, mb_t, eye_t = pt(ma), pt(mb), pt(eye)

    # Bell-diagonal part is affine in (alpha, beta); decode the three generators once.
    ca, _ = bell_decode(ma, d)
    cb, _ = bell_decode(mb, d)
    c_eye = np.full((d, d), 1.0 / n)

    A, B = np.meshgrid(spec.alphas(), spec.betas(), indexing="ij")
    al, be = A.ravel(), B.ravel()
    total = al.size
    min_eig = np.empty(total)
    min_pt = np.empty(total)
    wvals = np.empty((total, len(wnames)))

    def work(lo: int) -> None:
        hi = min(lo + chunk, total)
        a = al[lo:hi, None, None]
        b = be[lo:hi, None, None]
        rho = (1.0 - a - b) * eye + a * ma + b * mb
        rho_t = (1.0 - a - b) * eye_t + a * ma_t + b * mb_t
        min_eig[lo:hi] = np.linalg.eigvalsh(rho)[:, 0]
        min_pt[lo:hi] = np.linalg.eigvalsh(rho_t)[:, 0]
        if len(wnames):
            wvals[lo:hi] = np.einsum("wij,cji->cw", wmats, rho).real

    starts = range(0, total, chunk)
    workers = worker_count()
    if workers > 1 and total > chunk:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            list(ex.map(work, starts))
    else:
        for lo in starts:
            work(lo)

    points = []
    for idx in range(total):
        a, b = float(al[idx]), float(be[idx])
        c = (1.0 - a - b) * c_eye + a * ca.coeffs + b * cb.coeffs
        state = bool(min_eig[idx] >= -STATE_EIG_TOL)
        encl = state and bool(np.all(c >= -STATE_EIG_TOL)
                              and np.all(c <= 1.0 / d + ENCLOSURE_TOL))
        points.append(SlicePoint(
            alpha=a, beta=b,
            is_state=state,
            min_eig=float(min_eig[idx]),
            is_ppt=state and bool(min_pt[idx] >= -STATE_EIG_TOL),
            min_ppt_eig=float(min_pt[idx]),
            in_enclosure=encl,
            witness_values=tuple(float(v) for v in wvals[idx]),
        ))
    return SliceGrid(spec, d, wnames, tuple(points))


def _state_box_exact(ca: BellCoefficients, cb: BellCoefficients, d: int):
    """Exact bounding box of {(a, b): all Bell coefficients of the slice >= 0}.

    Four tiny LPs over the d^2 half-planes; valid because a Bell-diagonal
    operator's eigenvalues are its coefficients.  Returns None if unbounded.
    """
    from scipy.optimize import linprog

    n = d * d
    A_ub = -np.stack([ca.coeffs.ravel() - 1.0 / n,
                      cb.coeffs.ravel() - 1.0 / n], axis=1)
    b_ub = np.full(n, 1.0 / n)
    out = []
    for obj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        res = linprog(-np.asarray(obj, dtype=float), A_ub=A_ub, b_ub=b_ub,
                      bounds=[(None, None)] * 2, method="highs")
        if res.status != 0:
            return None
        out.append(-res.fun)
    amax, amin, bmax, bmin = out[0], -out[1], out[2], -out[3]
    return amin, amax, bmin, bmax


def _state_box_scan(rho_a, rho_b, d: int, coarse: int = 81) -> tuple:
    """Scan fallback: locate min-eigenvalue sign changes, widening the window
    whenever the state region touches its edge."""
    n = d * d
    ma, mb = _as_matrix(rho_a), _as_matrix(rho_b)
    eye = np.eye(n, dtype=complex) / n
    lo, hi = -2.0, 3.0
    for _ in range(8):
        vals = np.linspace(lo, hi, coarse)
        A, B = np.meshgrid(vals, vals, indexing="ij")
        a = A.ravel()[:, None, None]
        b = B.ravel()[:, None, None]
        rho = (1.0 - a - b) * eye + a * ma + b * mb
        me = np.linalg.eigvalsh(rho)[:, 0].reshape(coarse, coarse)
        ok = me >= -STATE_EIG_TOL
        if not ok.any():
            raise ValueError("no state found in the scanned box")
        ia, ib = np.where(ok)
        touches = (ia.min() == 0 or ib.min() == 0
                   or ia.max() == coarse - 1 or ib.max() == coarse - 1)
        if not touches:
            cell = (hi - lo) / (coarse - 1)
            return (float(vals[ia.min()] - cell), float(vals[ia.max()] + cell),
                    float(vals[ib.min()] - cell), float(vals[ib.max()] + cell))
        span = hi - lo
        lo, hi = lo - span, hi + span
    raise ValueError("state region keeps touching the scan window; "
                     "pass an explicit box")


def state_box(rho_a, rho_b, d: int) -> GridSpec:
    """Bounding box of the state region of the (alpha, beta) slice.

    Bell-diagonal inputs get the exact polytope box (plus 2% padding); other
    inputs fall back to a coarse min-eigenvalue scan.
    """
    ca, ra = bell_decode(rho_a, d)
    cb, rb = bell_decode(rho_b, d)
    box = _state_box_exact(ca, cb, d) if max(ra, rb) <= 1e-10 else None
    if box is None:
        box = _state_box_scan(rho_a, rho_b, d)
    amin, amax, bmin, bmax = box
    pad_a = 0.02 * (amax - amin) or 0.02
    pad_b = 0.02 * (bmax - bmin) or 0.02
    return GridSpec(amin - pad_a, amax + pad_a, bmin - pad_b, bmax + pad_b)


# --- slice CSV (consumed by slice-viz) ---------------------------------------
#
# header: alpha,beta,is_state,min_eig,is_ppt,min_ppt_eig,in_enclosure,<witness>...
# one row per node, booleans as 0/1, floats with 12 significant digits.


def _fmt12(x: float) -> str:
    return format(float(x), ".12g")


def write_slice_csv(grid: SliceGrid, path) -> None:
    header = ["alpha", "beta", "is_state", "min_eig", "is_ppt", "min_ppt_eig",
              "in_enclosure"] + list(grid.witness_names)
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for p in grid.points:
            row = [_fmt12(p.alpha), _fmt12(p.beta), str(int(p.is_state)),
                   _fmt12(p.min_eig), str(int(p.is_ppt)), _fmt12(p.min_ppt_eig),
                   str(int(p.in_enclosure))]
            row += [_fmt12(v) for v in p.witness_values]
            fh.write(",".join(row) + "\n")
