"""Acceptance suite: one test per release criterion, one summary line each.

Every criterion is asserted at its stated tolerance against closed-form
targets, property chains, or the independent brute-force oracle.  Criterion 1
pins the shifted-projector fixture to the published value k/6; the optimizer,
the oracle, and a direct frame construction all agree on a larger value for
k = 1 and 2 (see the README), so that part of the criterion fails and is
left failing on purpose.
"""

import time

import numpy as np

from schmidt_norms import fixtures
from schmidt_norms.cones import (
    k_block_positivity,
    random_schmidt_ensemble,
    reduction_witness,
    witness_check,
)
from schmidt_norms.linalg import BipartiteOperator, operator_norm
from schmidt_norms.maps import (
    MapRepr,
    detection_map,
    hermitian_trace_norm,
    idk_apply,
    idk_op_norm,
    reduction_map,
    sn_contraction_test,
    transpose_map,
)
from schmidt_norms.norms import (
    SeeSawConfig,
    block_positive_decomposition,
    dec_norm_value,
    max_order_norm_upper,
    min_order_norm,
    omin_norm,
    sk_norm,
)
from schmidt_norms.oracle import (
    OracleConfig,
    brute_block_min,
    brute_idk_norm,
    brute_min_order,
    brute_omin,
    brute_sk_norm,
)
from schmidt_norms.rand import (
    RandomConfig,
    complex_gaussian,
    random_cptp,
    random_hermitian,
    random_sr_k_vector,
)


def _cfg(seed, restarts=20, max_iters=200):
    return SeeSawConfig(restarts=restarts, max_iters=max_iters,
                        rng=RandomConfig(seed=seed))


def _ocfg(seed, samples=4000, polish=150):
    return OracleConfig(samples=samples, polish_steps=polish,
                        rng=RandomConfig(seed=seed))


def _entangled_projector(n):
    phi = fixtures.maximally_entangled(n)
    return BipartiteOperator(dims=(n, n),
                             mat=np.outer(phi.amplitudes, phi.amplitudes.conj()))


def test_criterion_01_shifted_projector_regression(criterion):
    n = 3
    op = fixtures.example51(n)
    t0 = time.monotonic()
    problems = []
    for k in (1, 2, 3):
        mo = min_order_norm(op, k, _cfg(101)).value
        if abs(mo - k / 6.0) > 1e-6:
            problems.append("min_order k=%d: got %.6f, pinned %.6f" %
                            (k, mo, k / 6.0))
        om = omin_norm(op, k, _cfg(102)).value
        if om < k / 3.0 - 1e-6:
            problems.append("omin k=%d: got %.6f < %.6f" % (k, om, k / 3.0))
    elapsed = time.monotonic() - t0
    if elapsed >= 30.0:
        problems.append("runtime %.1fs >= 30s" % elapsed)
    detail = ("min_order = k/6 and omin >= k/3 for k=1,2,3 in %.1fs" % elapsed
              if not problems else "; ".join(problems))
    criterion(1, not problems, detail)


def test_criterion_02_sk_closed_forms(criterion):
    n = 3
    proj = _entangled_projector(n)
    problems = []
    for k in (1, 2, 3):
        val = sk_norm(proj, k, _cfg(201)).value
        if abs(val - k / n) > 1e-6:
            problems.append("projector k=%d: %.8f != %.8f" % (k, val, k / n))
        brute = brute_sk_norm(proj, k, _ocfg(202))
        if abs(brute - val) > 1e-3:
            problems.append("oracle gap k=%d: %.2e" % (k, abs(brute - val)))
    rng = RandomConfig(seed=203).generator()
    for _ in range(50):
        x = BipartiteOperator(dims=(2, 3), mat=complex_gaussian(rng, (6, 6)))
        val = sk_norm(x, 2, _cfg(204, restarts=1)).value
        if abs(val - operator_norm(x.mat)) > 1e-8:
            problems.append("full-k mismatch %.2e" % abs(val - operator_norm(x.mat)))
    detail = ("entangled projector at k/n and 50 exact full-k instances"
              if not problems else "; ".join(problems[:4]))
    criterion(2, not problems, detail)


def test_criterion_03_swap_block_positivity(criterion):
    problems = []
    for n in (2, 3):
        swap = fixtures.swap_operator(n)
        v1 = k_block_positivity(swap, 1, _cfg(301))
        if v1.status != "heuristically-positive" or v1.min_value < -1e-8:
            problems.append("n=%d k=1: %s min %.2e" % (n, v1.status, v1.min_value))
        v2 = k_block_positivity(swap, 2, _cfg(302))
        if v2.status != "refuted" or abs(v2.min_value + 1.0) > 1e-6:
            problems.append("n=%d k=2: %s min %.8f" % (n, v2.status, v2.min_value))
    detail = ("positive at k=1, refuted at -1 for k=2, n=2 and 3"
              if not problems else "; ".join(problems))
    criterion(3, not problems, detail)


def test_criterion_04_reduction_family_threshold(criterion):
    problems = []
    for k in (1, 2):
        for sign, want_status in ((-1, "heuristically-positive"), (+1, "refuted")):
            p = 1.0 / k + sign * 0.05
            verdict = k_block_positivity(reduction_map(3, p).choi, k, _cfg(401))
            if verdict.status != want_status:
                problems.append("k=%d p=%.2f: %s" % (k, p, verdict.status))
            if abs(verdict.min_value - (1.0 - p * k)) > 1e-6:
                problems.append("k=%d p=%.2f: min %.8f != %.8f" %
                                (k, p, verdict.min_value, 1.0 - p * k))
    detail = ("positivity flips at p = 1/k with min = 1 - pk"
              if not problems else "; ".join(problems))
    criterion(4, not problems, detail)


def test_criterion_05_norm_hierarchy(criterion):
    rng = RandomConfig(seed=501).generator()
    cfg = _cfg(502, restarts=5, max_iters=100)
    problems = []
    for i in range(100):
        x = BipartiteOperator(dims=(2, 3), mat=complex_gaussian(rng, (6, 6)))
        k = 1 + i % 2
        mo = min_order_norm(x, k, cfg).value
        om = omin_norm(x, k, cfg).value
        parts = block_positive_decomposition(x, k, cfg)
        dec = dec_norm_value(x, parts, k, cfg).value
        upper = max_order_norm_upper(x, k, cfg).value
        chain = (mo <= om + 1e-6 and om <= dec + 1e-6 and dec <= upper + 1e-6)
        if not chain:
            problems.append("instance %d k=%d: %.6f %.6f %.6f %.6f" %
                            (i, k, mo, om, dec, upper))
        if om > 2 * mo + 1e-6:
            problems.append("instance %d k=%d: omin %.6f > 2*minorder %.6f" %
                            (i, k, om, mo))
    detail = ("min_order <= omin <= dec <= upper and factor 2 on 100 instances"
              if not problems else "; ".join(problems[:3]))
    criterion(5, not problems, detail)


def test_criterion_06_stabilization(criterion):
    rng = RandomConfig(seed=601).generator()
    cfg = _cfg(602, restarts=6, max_iters=120)
    problems = []
    worst = -np.inf
    for t in range(20):
        choi = BipartiteOperator(dims=(3, 3), mat=random_hermitian(9, rng))
        phi = MapRepr.from_choi(choi)
        for k in (1, 2):
            level = idk_op_norm(phi, k, cfg).value
            m = k + 2
            for _ in range(50):
                v = random_sr_k_vector((m, 3), k, rng).amplitudes
                w = random_sr_k_vector((m, 3), k, rng).amplitudes
                x = complex_gaussian(rng, (m * 3, m * 3))
                val = abs(v.conj() @ idk_apply(phi, x, m) @ w) / operator_norm(x)
                worst = max(worst, val - level)
                if val > level + 1e-6:
                    problems.append("map %d k=%d: %.8f > %.8f" %
                                    (t, k, val, level))
    detail = ("ancilla m=k+2 samples stay under k-level, worst gap %.2e"
              % worst if not problems else "; ".join(problems[:3]))
    criterion(6, not problems, detail)


def test_criterion_07_transpose_cb_values(criterion):
    t3 = transpose_map(3)
    problems = []
    for k in (1, 2, 3):
        val = idk_op_norm(t3, k, _cfg(701, restarts=8)).value
        if abs(val - k) > 1e-4:
            problems.append("k=%d: %.8f" % (k, val))
        brute = brute_idk_norm(t3, k, _ocfg(702, samples=3000, polish=120))
        if abs(brute - val) > 1e-3:
            problems.append("oracle gap k=%d: %.2e" % (k, abs(brute - val)))
    detail = ("transpose amplification equals k for k=1,2,3"
              if not problems else "; ".join(problems))
    criterion(7, not problems, detail)


def test_criterion_08_cptp_contraction(criterion):
    rng = RandomConfig(seed=801).generator()
    cfg = _cfg(802, restarts=3, max_iters=120)
    problems = []
    for t in range(30):
        phi = MapRepr.from_choi(random_cptp(3, 3, rng))
        for k in (1, 2):
            val = hermitian_trace_norm(phi, k, cfg).value
            if abs(val - 1.0) > 1e-9:
                problems.append("map %d k=%d: %.12f" % (t, k, val))
    detail = ("30 random CPTP maps at unit norm for k=1,2"
              if not problems else "; ".join(problems[:3]))
    criterion(8, not problems, detail)


def test_criterion_09_schmidt_number_pipeline(criterion):
    cfg = _cfg(901, restarts=8, max_iters=150)
    hot = fixtures.isotropic(0.9, 3)
    cold = fixtures.isotropic(0.6, 3)
    w = reduction_witness(3, 2)
    det = detection_map(reduction_map(3, 0.5), cfg)
    problems = []

    cert = witness_check(w, hot, 2, cfg)
    if abs(cert.pairing + 0.35) > 1e-9 or not cert.valid:
        problems.append("witness on F=0.9: pairing %.10f valid %s" %
                        (cert.pairing, cert.valid))
    if not sn_contraction_test(hot, det, 2, cfg).detected:
        problems.append("contraction test missed F=0.9")

    cert = witness_check(w, cold, 2, cfg)
    if cert.valid:
        problems.append("witness false-positive on F=0.6")
    if sn_contraction_test(cold, det, 2, cfg).detected:
        problems.append("contraction false-positive on F=0.6")
    detail = ("F=0.9 detected by witness (-0.35) and contraction; F=0.6 by neither"
              if not problems else "; ".join(problems))
    criterion(9, not problems, detail)


def test_criterion_10_cone_duality(criterion):
    rng = RandomConfig(seed=1001).generator()
    worst = np.inf
    for i in range(200):
        k = 1 + i % 3
        pick = i % 4
        if pick == 0:
            w = reduction_witness(3, k)
        elif pick == 1:
            a = complex_gaussian(rng, (9, 9))
            w = BipartiteOperator(dims=(3, 3), mat=a @ a.conj().T)
        elif pick == 2:
            a = complex_gaussian(rng, (9, 9))
            w = BipartiteOperator(dims=(3, 3),
                                  mat=0.3 * reduction_witness(3, k).mat
                                  + 0.7 * (a @ a.conj().T))
        else:
            w = fixtures.swap_operator(3) if k == 1 else \
                BipartiteOperator(dims=(3, 3),
                                  mat=float(rng.random() + 0.1)
                                  * reduction_witness(3, k).mat)
        ens = random_schmidt_ensemble((3, 3), k, 3 + i % 4, rng)
        pairing = float(np.trace(w.mat @ ens.density().mat).real)
        worst = min(worst, pairing)
    ok = worst >= -1e-8
    criterion(10, ok, "200 pairings, smallest value %.3e" % worst)


def test_criterion_11_oracle_equivalence(criterion):
    pairs = []
    op51 = fixtures.example51(3)
    for k in (1, 2, 3):
        pairs.append(("shifted-projector min_order k=%d" % k,
                      brute_min_order(op51, k, _ocfg(1101)),
                      min_order_norm(op51, k, _cfg(1102)).value))
        pairs.append(("shifted-projector omin k=%d" % k,
                      brute_omin(op51, k, _ocfg(1103)),
                      omin_norm(op51, k, _cfg(1104)).value))
    proj = _entangled_projector(3)
    for k in (1, 2, 3):
        pairs.append(("entangled projector sk k=%d" % k,
                      brute_sk_norm(proj, k, _ocfg(1105)),
                      sk_norm(proj, k, _cfg(1106)).value))
    rng = RandomConfig(seed=1107).generator()
    for i in range(50):
        x = BipartiteOperator(dims=(2, 3), mat=complex_gaussian(rng, (6, 6)))
        pairs.append(("random full-k sk %d" % i,
                      brute_sk_norm(x, 2, _ocfg(1108 + i, samples=1500, polish=80)),
                      sk_norm(x, 2, _cfg(1109, restarts=1)).value))
    for n in (2, 3):
        for k in (1, 2):
            swap = fixtures.swap_operator(n)
            pairs.append(("swap block min n=%d k=%d" % (n, k),
                          brute_block_min(swap, k, _ocfg(1160)),
                          k_block_positivity(swap, k, _cfg(1161)).min_value))
    t3 = transpose_map(3)
    for k in (1, 2, 3):
        pairs.append(("transpose amplification k=%d" % k,
                      brute_idk_norm(t3, k, _ocfg(1170, samples=3000, polish=120)),
                      idk_op_norm(t3, k, _cfg(1171, restarts=8)).value))
    bad = [(label, brute, val) for label, brute, val in pairs
           if abs(brute - val) > 1e-3]
    gap = max(abs(b - v) for _, b, v in pairs)
    detail = ("%d instance pairs agree, largest gap %.2e" % (len(pairs), gap)
              if not bad else "; ".join("%s: %.6f vs %.6f" % t for t in bad[:4]))
    criterion(11, not bad, detail)
