"""Secondary acceptance: render the standard 201x201 qutrit slice CSV and
verify the figure cell-for-cell against the CSV labels, the straightness of
the witness zero-lines, and byte-identical output across runs.

The CSV is produced by invoking the `ew` command line (the producer's public
interface); the renderer itself never imports the producer package.
"""

import math
import shutil
import subprocess
import xml.etree.ElementTree as ET

import pytest

from sliceviz import SliceFigureSpec, build_svg, cell_color, load_slice_csv, render

WITNESSES = ("W_gamma_12", "W_gamma_34")


@pytest.fixture(scope="module")
def slice_csv(tmp_path_factory):
    ew = shutil.which("ew")
    if ew is None:
        pytest.skip("`ew` command line not installed; cannot generate the slice CSV")
    path = tmp_path_factory.mktemp("accept") / "slice_d3.csv"
    cmd = [ew, "slice", "--d", "3", "--rho-a", "rho_gamma", "--rho-b",
           "rho_gamma_c", "--witness", WITNESSES[0], "--witness", WITNESSES[1],
           "--grid", "201", "--box", "-0.5", "1.2", "-0.5", "1.2",
           "--out", str(path)]
    subprocess.run(cmd, check=True, capture_output=True, text=True)
    return path


@pytest.fixture(scope="module")
def rendered(slice_csv, tmp_path_factory):
    out = tmp_path_factory.mktemp("accept-out") / "fig2a.svg"
    render(SliceFigureSpec(str(slice_csv), str(out), WITNESSES, title="qutrit slice"))
    return out


def test_figure_cells_match_csv_labels(slice_csv, rendered):
    data = load_slice_csv(slice_csv)
    assert data.na == data.nb == 201
    root = ET.fromstring(rendered.read_text())
    grid = [[None] * data.nb for _ in range(data.na)]
    for rect in root.iter("{http://www.w3.org/2000/svg}rect"):
        if rect.get("data-i") is None:
            continue
        i, j0 = int(rect.get("data-i")), int(rect.get("data-j"))
        for j in range(j0, j0 + int(rect.get("data-run"))):
            grid[i][j] = rect.get("fill")
    mismatches = 0
    for i in range(data.na):
        for j in range(data.nb):
            negs = tuple(data.witness_values[w][i][j] < 0 for w in WITNESSES)
            expected = cell_color(data.is_state[i][j], data.is_ppt[i][j], negs)
            got = grid[i][j]
            want = None if expected is None else "#%02x%02x%02x" % expected
            if got != want:
                mismatches += 1
    print(f"PASS secondary: 201x201 cells match CSV labels ({mismatches} mismatches)")
    assert mismatches == 0


def test_two_straight_zero_lines_near_sign_changes(slice_csv, rendered):
    data = load_slice_csv(slice_csv)
    root = ET.fromstring(rendered.read_text())
    lines = {el.get("data-witness"): el
             for el in root.iter("{http://www.w3.org/2000/svg}line")
             if el.get("data-witness")}
    assert set(lines) == set(WITNESSES)

    cell_a = data.alphas[1] - data.alphas[0]
    cell_b = data.betas[1] - data.betas[0]
    cell_diag = math.hypot(cell_a, cell_b)
    for w, el in lines.items():
        c0, ca, cb = (float(t) for t in el.get("data-line").split(","))
        norm = math.hypot(ca, cb)
        # every sign change between neighbouring nodes lies within one cell
        # of the drawn straight line
        grid = data.witness_values[w]
        checked = 0
        for i in range(data.na):
            for j in range(data.nb):
                here = grid[i][j]
                for i2, j2 in ((i + 1, j), (i, j + 1)):
                    if i2 >= data.na or j2 >= data.nb:
                        continue
                    there = grid[i2][j2]
                    if here == 0 or there == 0 or (here < 0) == (there < 0):
                        continue
                    mx = (data.alphas[i] + data.alphas[i2]) / 2
                    my = (data.betas[j] + data.betas[j2]) / 2
                    dist = abs(c0 + ca * mx + cb * my) / norm
                    assert dist <= cell_diag, (w, i, j, dist)
                    checked += 1
        assert checked > 0
        # drawn endpoints sit on the affine zero line within one grid cell
        for px, py in (("x1", "y1"), ("x2", "y2")):
            x_pix, y_pix = float(el.get(px)), float(el.get(py))
            cell = int(root.get("data-cell"))
            x0 = int(root.get("data-x0"))
            y0 = int(root.get("data-y0"))
            plot_h = int(root.get("data-plot-h"))
            alpha = data.alphas[0] + ((x_pix - x0) / cell - 0.5) * cell_a
            beta = data.betas[0] + ((y0 + plot_h - y_pix) / cell - 0.5) * cell_b
            dist = abs(c0 + ca * alpha + cb * beta) / norm
            assert dist <= cell_diag, (w, px, dist)
    print("PASS secondary: two straight zero-lines track the sign changes")


def test_byte_identical_across_runs(slice_csv, rendered, tmp_path):
    again = tmp_path / "again.svg"
    render(SliceFigureSpec(str(slice_csv), str(again), WITNESSES,
                           title="qutrit slice"))
    assert again.read_bytes() == rendered.read_bytes()
    print("PASS secondary: byte-identical SVG across two runs")


def test_figure_has_isotropic_diagonal(slice_csv, rendered):
    root = ET.fromstring(rendered.read_text())
    iso = [el for el in root.iter("{http://www.w3.org/2000/svg}line")
           if el.get("data-isotropic")]
    assert len(iso) == 1
