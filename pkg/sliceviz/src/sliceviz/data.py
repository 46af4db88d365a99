"""Slice CSV parsing.

Expected header:

    alpha,beta,is_state,min_eig,is_ppt,min_ppt_eig,in_enclosure,<witness>...

Rows are row-major over a rectangular (alpha, beta) grid: alpha varies
slowest.  Booleans are 0/1.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

REQUIRED = ("alpha", "beta", "is_state", "min_eig", "is_ppt", "min_ppt_eig",
            "in_enclosure")


@dataclass(frozen=True)
class SliceData:
    alphas: tuple            # strictly increasing grid values
    betas: tuple
    is_state: tuple          # na x nb nested tuples of bool
    is_ppt: tuple
    in_enclosure: tuple
    witness_names: tuple
    witness_values: dict     # name -> na x nb nested tuples of float

    @property
    def na(self) -> int:
        return len(self.alphas)

    @property
    def nb(self) -> int:
        return len(self.betas)


def load_slice_csv(path) -> SliceData:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty CSV (no header)") from None
        rows = list(reader)
    for col in REQUIRED:
        if col not in header:
            raise ValueError(f"{path}: missing required column {col!r}")
    if header[:7] != list(REQUIRED):
        raise ValueError(f"{path}: unexpected column order {header[:7]}")
    if not rows:
        raise ValueError(f"{path}: empty grid (no data rows)")
    wnames = tuple(header[7:])
    idx = {c: i for i, c in enumerate(header)}

    alphas, betas = [], []
    for r in rows:
        a, b = float(r[idx["alpha"]]), float(r[idx["beta"]])
        if not alphas or a != alphas[-1]:
            alphas.append(a)
        if len(alphas) == 1:
            betas.append(b)
    na, nb = len(alphas), len(betas)
    if na * nb != len(rows):
        raise ValueError(f"{path}: {len(rows)} rows do not form a "
                         f"{na} x {nb} row-major grid")

    def grid_of(col, cast):
        vals = [cast(r[idx[col]]) for r in rows]
        return tuple(tuple(vals[i * nb:(i + 1) * nb]) for i in range(na))

    return SliceData(
        alphas=tuple(alphas),
        betas=tuple(betas),
        is_state=grid_of("is_state", lambda s: bool(int(s))),
        is_ppt=grid_of("is_ppt", lambda s: bool(int(s))),
        in_enclosure=grid_of("in_enclosure", lambda s: bool(int(s))),
        witness_names=wnames,
        witness_values={w: grid_of(w, float) for w in wnames},
    )


def affine_fit(data: SliceData, witness: str) -> tuple[float, float, float]:
    """Least-squares affine model v = c0 + ca*alpha + cb*beta of a witness column.

    Solved via the 3x3 normal equations (witness values on a slice are affine,
    so the residual is numerical noise).
    """
    s = [[0.0] * 3 for _ in range(3)]
    t = [0.0] * 3
    grid = data.witness_values[witness]
    for i, a in enumerate(data.alphas):
        for j, b in enumerate(data.betas):
            row = (1.0, a, b)
            v = grid[i][j]
            for p in range(3):
                t[p] += row[p] * v
                for q in range(3):
                    s[p][q] += row[p] * row[q]
    # Gaussian elimination with partial pivoting on the 3x3 system
    m = [s[p] + [t[p]] for p in range(3)]
    for col in range(3):
        piv = max(range(col, 3), key=lambda r: abs(m[r][col]))
        m[col], m[piv] = m[piv], m[col]
        if abs(m[col][col]) < 1e-300:
            raise ValueError(f"degenerate grid for witness {witness!r}")
        for r in range(3):
            if r != col:
                f = m[r][col] / m[col][col]
                for q in range(col, 4):
                    m[r][q] -= f * m[col][q]
    c0, ca, cb = (m[p][3] / m[p][p] for p in range(3))
    return c0, ca, cb
