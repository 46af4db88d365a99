"""Acceptance suite: one test per registry criterion, each at its stated
tolerance, printing a pass/fail line (stream them with `pytest -s`).

Two d=5 sub-criteria fail against the shipped coefficient tables and are kept
as honest failures with explanatory messages: the tables make rho4_d5 PPT (and
rho3_d5_corrected not), and correspondingly the symmetric slice pairing is
(rho1, rho4), not (rho1, rho3_corrected).  `ew reproduce d5` reports the same
two failures with the same numbers.
"""

import numpy as np
import pytest

from mirrorew import (GammaSplit, GridSpec, bell_encode, bell_projector,
                      bell_vector, build_mubs, catalog, ces_evidence, choi,
                      detect, eig_hermitian, is_ppt, local_decomposition,
                      max_product_expectation, min_product_expectation,
                      mirror_partner, negative_eigenspace, phi_gamma_apply,
                      product_expectation, qutrit_mubs, scan_slice,
                      span_report, state_box, verify_mub, witness_for_split,
                      zero_family_d3)
from mirrorew.certify import (DET_ROW_ORDER, local_unitary_u3,
                              rotated_zero_family_d3, rotated_zero_family_d3_raw,
                              zero_family_d3_raw)
from mirrorew.linops import BipartiteOperator

from conftest import random_hermitian

SPLITS = ((1, 2), (1, 3), (1, 4), (3, 4), (2, 4), (2, 3))
SPECTRUM = np.array([5, 5, 5, 5, 2, -1, -1, -1, -1], dtype=float)

W12_REF = np.array([
    [0, 0, 0, 0, 1, 0, 0, 0, 1],
    [0, 3, 0, 0, 0, -2, -2, 0, 0],
    [0, 0, 3, -2, 0, 0, 0, -2, 0],
    [0, 0, -2, 3, 0, 0, 0, -2, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 1],
    [0, -2, 0, 0, 0, 3, -2, 0, 0],
    [0, -2, 0, 0, 0, -2, 3, 0, 0],
    [0, 0, -2, -2, 0, 0, 0, 3, 0],
    [1, 0, 0, 0, 1, 0, 0, 0, 0],
], dtype=complex)
W34_REF = 4 * np.eye(9) - W12_REF


def _line(ok: bool, label: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'} {label}")


@pytest.fixture(scope="module")
def ops(d5_ops):
    d = {g: witness_for_split(g) for g in SPLITS}
    d.update(d5_ops)
    d["rho_gamma"] = catalog("rho_gamma")
    d["rho_gamma_c"] = catalog("rho_gamma_c")
    d["rho3_d3"] = catalog("rho3_d3")
    d["rho4_d3"] = catalog("rho4_d3")
    return d


@pytest.fixture(scope="module")
def seesaw(ops):
    w12 = ops[(1, 2)]
    return (min_product_expectation(w12, restarts=64, seed=0),
            max_product_expectation(w12, restarts=64, seed=0))


def _sym_spec(rho_a, rho_b, d, steps):
    box = state_box(rho_a, rho_b, d)
    lo = min(box.alpha_min, box.beta_min)
    hi = max(box.alpha_max, box.beta_max)
    return GridSpec(lo, hi, lo, hi, steps)


def _ppt_sym(grid):
    mp = grid.min_ppt_grid()
    states = np.array([p.is_state for p in grid.points]).reshape(mp.shape)
    both = states & states.T
    dev = float(np.max(np.abs(mp - mp.T)[both])) if both.any() else 0.0
    flags = grid.is_ppt_grid()
    return dev, int(np.sum((flags != flags.T) & both))


@pytest.fixture(scope="module")
def grid_d3(ops):
    spec = _sym_spec(ops["rho_gamma"], ops["rho_gamma_c"], 3, 201)
    wits = {"W_gamma_12": ops[(1, 2)], "W_gamma_34": ops[(3, 4)]}
    return scan_slice(spec, ops["rho_gamma"], ops["rho_gamma_c"], wits, 3)


@pytest.fixture(scope="module")
def grids_d5(ops):
    out = {}
    for key, (na, nb) in {"12": ("rho1_d5", "rho2_d5"),
                          "13c": ("rho1_d5", "rho3_d5_corrected"),
                          "14": ("rho1_d5", "rho4_d5")}.items():
        spec = _sym_spec(ops[na], ops[nb], 5, 101)
        out[key] = scan_slice(spec, ops[na], ops[nb], {}, 5)
    return out


def test_c01_choi_equals_reference_and_circulant(ops):
    mubs = qutrit_mubs()
    g12 = GammaSplit(3, frozenset({1, 2}))
    g34 = GammaSplit(3, frozenset({3, 4}))
    e1 = np.max(np.abs(choi(lambda x: phi_gamma_apply(g12, mubs, x), 3).mat - W12_REF))
    e2 = np.max(np.abs(choi(lambda x: phi_gamma_apply(g34, mubs, x), 3).mat - W34_REF))
    e3 = 0.0
    for g in SPLITS:
        split = GammaSplit(3, frozenset(g))
        wc = choi(lambda x: phi_gamma_apply(split, mubs, x), 3)
        e3 = max(e3, float(np.max(np.abs(wc.mat - ops[g].mat))))
    ok = e1 <= 1e-12 and e2 <= 1e-12 and e3 <= 1e-12
    _line(ok, f"criterion 01 choi equality: refs {max(e1, e2):.2e}, "
              f"circulant {e3:.2e} (tol 1e-12)")
    assert ok


def test_c02_mirror_sums(ops):
    err = 0.0
    for g, gc in (((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3))):
        err = max(err, float(np.max(np.abs(ops[g].mat + ops[gc].mat - 4 * np.eye(9)))))
    err5 = max(
        float(np.max(np.abs(ops["W1_d5"].mat + ops["W2_d5"].mat - 8 * np.eye(25)))),
        float(np.max(np.abs(ops["W3_d5"].mat + ops["W4_d5"].mat - 8 * np.eye(25)))))
    ok = err <= 1e-12 and err5 <= 1e-12
    _line(ok, f"criterion 02 mirror sums: d3 {err:.2e}, d5 {err5:.2e} (tol 1e-12)")
    assert ok


def test_c03_spectra(ops):
    dev, counts_ok = 0.0, True
    for g in SPLITS:
        vals, _ = eig_hermitian(ops[g])
        dev = max(dev, float(np.max(np.abs(vals - SPECTRUM))))
        counts_ok &= int(np.sum(vals < -1e-10)) == 4
    ok = dev <= 1e-9 and counts_ok
    _line(ok, f"criterion 03 spectra: max dev {dev:.2e} (tol 1e-9), "
              f"negative count 4: {counts_ok}")
    assert ok


def test_c04_detection_values(ops):
    errs = [abs(detect(ops[(1, 2)], ops["rho_gamma"]) + 2 / 5),
            abs(detect(ops[(3, 4)], ops["rho_gamma_c"]) + 2 / 5),
            abs(detect(ops[(1, 2)], ops["rho3_d3"]) + 1.0),
            abs(detect(ops[(3, 4)], ops["rho4_d3"]) + 1.0)]
    for i in (1, 2, 4):
        errs.append(abs(detect(ops[f"W{i}_d5"], ops[f"rho{i}_d5"]) + 8 / 13))
    err = max(errs)
    err3 = abs(detect(ops["W3_d5"], ops["rho3_d5_corrected"]) + 8 / 13)
    ok = err <= 1e-12 and err3 <= 1e-12
    _line(ok, f"criterion 04 detections: hard {err:.2e}, erratum-conditional "
              f"i=3 corrected {err3:.2e} (tol 1e-12)")
    assert ok


def test_c05_ppt_claims_d3(ops):
    vals = {n: is_ppt(ops[n])[1]
            for n in ("rho_gamma", "rho_gamma_c", "rho3_d3", "rho4_d3")}
    ok = (vals["rho_gamma"] >= -1e-10 and vals["rho_gamma_c"] >= -1e-10
          and vals["rho3_d3"] < -1e-3 and vals["rho4_d3"] < -1e-3)
    _line(ok, "criterion 05 (d3) PPT claims: "
              + ", ".join(f"{k} {v:.3e}" for k, v in vals.items()))
    assert ok


def test_c05_ppt_claims_d5_rho1_rho2(ops):
    v1 = is_ppt(ops["rho1_d5"])[1]
    v2 = is_ppt(ops["rho2_d5"])[1]
    ok = v1 >= -1e-10 and v2 < -1e-6
    _line(ok, f"criterion 05 (d5) rho1 PPT ({v1:.3e}), rho2 not PPT ({v2:.3e})")
    assert ok


def test_c05_ppt_claims_d5_rho4_as_specified(ops):
    v4 = is_ppt(ops["rho4_d5"])[1]
    ok = v4 < -1e-6
    _line(ok, f"criterion 05 (d5) rho4 not PPT as specified: min PT eig {v4:.3e}")
    assert ok, (
        f"criterion expects rho4_d5 not PPT (min PT eigenvalue < -1e-6) but the "
        f"shipped coefficient tables give {v4:+.6e}: rho4_d5 has a positive "
        f"partial transpose, mirroring rho1_d5 exactly, while rho2_d5 and "
        f"rho3_d5_corrected are the non-PPT pair; W4 detecting the PPT state "
        f"rho4 (tr = -8/13) is what makes it non-decomposable")


def test_c05_ppt_rho3_status_reported(ops):
    printed_sum = float(catalog("rho3_d5_printed").coeffs.sum())
    v3c = is_ppt(ops["rho3_d5_corrected"])[1]
    _line(True, f"criterion 05 (d5) rho3 status: printed sums to {printed_sum:.6f} "
                f"(not a state); corrected min PT eig {v3c:.3e} (not PPT)")
    assert printed_sum == pytest.approx(9 / 13, abs=1e-12)
    assert v3c < -1e-6


def test_c06_zero_families(ops):
    z1 = max(abs(product_expectation(ops[(1, 2)], pv)) for pv in zero_family_d3())
    z2 = max(abs(product_expectation(ops[(3, 4)], pv))
             for pv in rotated_zero_family_d3())
    ok = z1 <= 1e-12 and z2 <= 1e-10
    _line(ok, f"criterion 06 zero families: direct {z1:.2e} (tol 1e-12), "
              f"rotated {z2:.2e} (tol 1e-10)")
    assert ok


def test_c07_determinant_certificates(ops):
    ordered = [zero_family_d3_raw()[i] for i in DET_ROW_ORDER]
    rep = span_report(ops[(1, 2)], ordered)
    t1 = 3 * np.sqrt(3) / 16 * (3 + 1.25j)
    t2 = -27 * np.sqrt(3) / 8
    e1 = abs(rep.det_direct - t1) / abs(t1)
    e2 = abs(rep.det_conjugate - t2) / abs(t2)
    rot = span_report(ops[(3, 4)], [rotated_zero_family_d3_raw()[i]
                                    for i in DET_ROW_ORDER])
    ok = (e1 <= 1e-9 and e2 <= 1e-9
          and rep.rank_direct == 9 and rep.rank_conjugate == 9
          and rot.rank_direct == 9 and rot.rank_conjugate == 9)
    _line(ok, f"criterion 07 determinants: rel errs {e1:.2e}/{e2:.2e} (tol 1e-9), "
              f"ranks {rep.rank_direct}/{rep.rank_conjugate}/"
              f"{rot.rank_direct}/{rot.rank_conjugate}")
    assert ok


def test_c08_closed_form_families(ops):
    w12 = ops[(1, 2)].mat
    e = np.eye(3, dtype=complex)
    dev1 = 0.0
    for r in np.linspace(0.05, 1.5, 50):
        for phi in np.linspace(0.0, 2 * np.pi, 50):
            xi = r * np.exp(1j * phi)
            a = e[0] + xi * (e[1] + e[2])
            v = np.kron(a, a)
            val = float((v.conj() @ w12 @ v).real)
            dev1 = max(dev1, abs(val - 8 * r * r * (r - np.cos(phi)) ** 2))
    dev2, at_zero = 0.0, 0.0
    xi = np.exp(1j * np.pi / 4) / np.sqrt(2)
    for mu in np.linspace(-3.0, 3.0, 100):
        a = e[0] + xi * (np.exp(1j * mu) * e[1] + np.exp(-1j * mu) * e[2])
        b = e[0] + xi * (np.exp(-1j * mu) * e[1] + np.exp(1j * mu) * e[2])
        v = np.kron(a, b)
        val = float((v.conj() @ w12 @ v).real)
        dev2 = max(dev2, abs(val - 4 * (1 - np.cos(3 * mu))))
    for n in (-1, 0, 1):
        mu = 2 * np.pi * n / 3
        a = e[0] + xi * (np.exp(1j * mu) * e[1] + np.exp(-1j * mu) * e[2])
        b = e[0] + xi * (np.exp(-1j * mu) * e[1] + np.exp(1j * mu) * e[2])
        v = np.kron(a, b)
        at_zero = max(at_zero, abs(float((v.conj() @ w12 @ v).real)))
    ok = dev1 <= 1e-10 and dev2 <= 1e-10 and at_zero <= 1e-10
    _line(ok, f"criterion 08 closed forms: grid devs {dev1:.2e}/{dev2:.2e}, "
              f"zeros {at_zero:.2e} (tol 1e-10)")
    assert ok


def test_c09_block_positivity_and_mirror(ops, seesaw):
    mn, mx = seesaw
    rng = np.random.default_rng(np.random.SeedSequence((0, 777)))
    mirr = 0.0
    for _ in range(10):
        op = BipartiteOperator(3, 3, random_hermitian(rng, 9))
        mu = 1.5
        lhs = min_product_expectation(mirror_partner(op, mu), restarts=12, seed=0).value
        rhs = mu - max_product_expectation(op, restarts=12, seed=0).value
        mirr = max(mirr, abs(lhs - rhs))
    ok = (-1e-8 <= mn.value <= 1e-8
          and 4 - 1e-6 <= mx.value <= 4 + 1e-9
          and mirr <= 1e-9)
    _line(ok, f"criterion 09 product range: min {mn.value:.2e}, "
              f"max {mx.value:.12f}, mirror identity dev {mirr:.2e} (tol 1e-9)")
    assert ok


def test_c10_ces_evidence(ops):
    neg = negative_eigenspace(ops[(1, 2)])
    target = sum(bell_projector(3, k, l).mat
                 for k, l in ((0, 1), (0, 2), (1, 0), (2, 0)))
    dist = float(np.max(np.abs(neg @ neg.conj().T - target)))
    ces = ces_evidence(neg, restarts=64, seed=0)
    single = ces_evidence(bell_vector(3, 0, 0).reshape(-1, 1), restarts=64, seed=0)
    ok = (neg.shape[1] == 4 and dist <= 1e-10
          and ces.max_product_overlap < 1 - 1e-3
          and abs(single.max_product_overlap - 1 / 3) <= 1e-6)
    _line(ok, f"criterion 10 CES: dim {neg.shape[1]}, projector dist {dist:.2e} "
              f"(tol 1e-10), overlap {ces.max_product_overlap:.6f} < 1-1e-3, "
              f"single-Bell {single.max_product_overlap:.9f}")
    assert ok


def test_c11_local_unitary(ops):
    u = local_unitary_u3()
    uni = float(np.max(np.abs(u @ u.conj().T - np.eye(3))))
    uu = np.kron(u, u.conj())
    conj = float(np.max(np.abs(uu @ ops[(1, 2)].mat @ uu.conj().T - ops[(3, 4)].mat)))
    ok = uni <= 1e-12 and conj <= 1e-10
    _line(ok, f"criterion 11 local unitary: unitarity {uni:.2e} (tol 1e-12), "
              f"conjugation {conj:.2e} (tol 1e-10)")
    assert ok


def test_c12_mub_validity():
    worst = 0.0
    for ms in [qutrit_mubs()] + [build_mubs(d) for d in (3, 5, 7, 11)]:
        rep = verify_mub(ms)
        worst = max(worst, rep.orthonormality_violation, rep.unbiasedness_violation)
    ok = worst <= 1e-12
    _line(ok, f"criterion 12 MUB validity: worst violation {worst:.2e} (tol 1e-12)")
    assert ok


def test_c13_slice_geometry_d3(grid_d3):
    dev, mismatches = _ppt_sym(grid_d3)
    spec = grid_d3.spec
    aff = 0.0
    for wi in range(2):
        vals = np.array([p.witness_values[wi]
                         for p in grid_d3.points]).reshape(201, 201)
        A, B = np.meshgrid(spec.alphas(), spec.betas(), indexing="ij")
        ta = (A - spec.alpha_min) / (spec.alpha_max - spec.alpha_min)
        tb = (B - spec.beta_min) / (spec.beta_max - spec.beta_min)
        pred = vals[0, 0] + ta * (vals[-1, 0] - vals[0, 0]) + tb * (vals[0, -1] - vals[0, 0])
        aff = max(aff, float(np.max(np.abs(vals - pred))))
    ok = dev <= 1e-8 and mismatches == 0 and aff <= 1e-12
    _line(ok, f"criterion 13 (d3) slice: 201x201 symmetry dev {dev:.2e} (tol 1e-8), "
              f"flag mismatches {mismatches}, witness affine dev {aff:.2e} (tol 1e-12)")
    assert ok


def test_c13_slice_d5_rho1_rho2_asymmetric(grids_d5):
    dev, mismatches = _ppt_sym(grids_d5["12"])
    ok = dev > 1e-8 and mismatches > 0
    _line(ok, f"criterion 13 (d5) rho1/rho2 asymmetry: dev {dev:.3e}, "
              f"flag mismatches {mismatches}")
    assert ok


def test_c13_slice_d5_rho1_rho3corrected_symmetric_as_specified(grids_d5):
    dev, mismatches = _ppt_sym(grids_d5["13c"])
    dev14, mis14 = _ppt_sym(grids_d5["14"])
    ok = dev <= 1e-8
    _line(ok, f"criterion 13 (d5) rho1/rho3corrected symmetric as specified: "
              f"dev {dev:.3e} (tol 1e-8)")
    assert ok, (
        f"criterion expects the (rho1, rho3_corrected) slice to be PPT-symmetric "
        f"but the shipped tables give max asymmetry {dev:.3e} with {mismatches} "
        f"flag mismatches; the symmetric pairing of the two PPT states is "
        f"(rho1, rho4): dev {dev14:.3e}, mismatches {mis14}")


def test_c14_local_decomposition(ops):
    dec = local_decomposition(ops[(1, 2)])
    err = float(np.max(np.abs(dec.reconstruct() - ops[(1, 2)].mat)))
    ok = err <= 1e-10 and dec.coeff_max_imag <= 1e-12
    _line(ok, f"criterion 14 local decomposition: reconstruction {err:.2e} "
              f"(tol 1e-10), coefficient imag {dec.coeff_max_imag:.2e} (tol 1e-12)")
    assert ok
