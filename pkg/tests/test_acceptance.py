"""Acceptance criteria, one test each, at the stated tolerances.

The terminal summary (see conftest.py) prints a PASS/FAIL/SKIP line per
criterion together with the measured quantities.
"""

import json
import time
from pathlib import Path

import numpy as np
import pytest

from tpmvc import cli, graph, metrics, oracle, solver, synthetic
from tpmvc import tensor_core as tc

criterion = pytest.mark.criterion
SEEDS = range(10)
MSRC_MANIFEST = Path(__file__).resolve().parents[1] / "data" / "msrc" / "manifest.json"


def blob_graphs(seed, bridge=0.0, m=30, k=5):
    views, y = synthetic.multiview_blobs(n=300, c=3, n_views=3, dim=10, separation=6.0, bridge=bridge, seed=seed)
    views = [graph.minmax_normalize(v) for v in views]
    anchors = graph.select_anchors(views, m, seed=seed)
    return graph.build_graphs(views, anchors, k=k), y


@criterion("AC1 oracle equivalence: prox stack")
def test_ac1_prox_stack(record_property):
    t0 = time.perf_counter()
    rng = np.random.default_rng(101)
    dev_gst = 0.0
    for _ in range(1000):
        s, tau = rng.uniform(0, 10), rng.uniform(0.01, 5)
        p = rng.choice([0.3, 0.5, 0.8, 1.0])
        dev_gst = max(dev_gst, abs(tc.gst_scalar(s, tau, p) - oracle.brute_gst(s, tau, p)))
    dev_prox = 0.0
    for _ in range(100):
        z = rng.standard_normal((4, 3, 5)) * rng.uniform(0.1, 3)
        tau = rng.uniform(0.01, 1)
        out = tc.schatten_prox(z, tau, 1.0)
        # the slice-wise threshold is tau * n3 under the unnormalized DFT
        dev_prox = max(dev_prox, np.max(np.abs(out - oracle.brute_svt_tensor(z, tau * 5))))
    elapsed = time.perf_counter() - t0
    record_property("gst_dev", f"{dev_gst:.2e}")
    record_property("prox_dev", f"{dev_prox:.2e}")
    record_property("seconds", f"{elapsed:.1f}")
    assert dev_gst <= 1e-5
    assert dev_prox <= 1e-8
    assert elapsed < 30


@criterion("AC2 oracle equivalence: simplex projection and assignment")
def test_ac2_projection_assignment(record_property):
    t0 = time.perf_counter()
    rng = np.random.default_rng(202)
    dev = 0.0
    for _ in range(500):
        v = rng.standard_normal(int(rng.integers(1, 9))) * rng.choice([0.1, 1.0, 10.0])
        dev = max(dev, np.max(np.abs(solver.project_simplex(v) - oracle.brute_simplex(v))))
    mismatches = 0
    for _ in range(200):
        r, c = rng.integers(1, 7, size=2)
        table = rng.integers(0, 30, size=(r, c))
        mismatches += metrics.hungarian_match(table)[1] != oracle.brute_assignment(table)
    elapsed = time.perf_counter() - t0
    record_property("simplex_dev", f"{dev:.2e}")
    record_property("assignment_mismatches", mismatches)
    record_property("seconds", f"{elapsed:.1f}")
    assert dev <= 1e-9
    assert mismatches == 0
    assert elapsed < 30


@criterion("AC3 update-rule optimality: G, alpha, H")
def test_ac3_update_optimality(record_property):
    rng = np.random.default_rng(303)
    worst_g = np.inf
    for _ in range(50):
        n, c = int(rng.integers(4, 20)), int(rng.integers(1, 5))
        b = rng.standard_normal((n, c))
        best = np.trace(solver.procrustes(b).T @ b)
        samples = np.linalg.qr(rng.standard_normal((1000, n, c)))[0]
        worst_g = min(worst_g, best - np.max(np.einsum("kij,ij->k", samples, b)))
    worst_a = np.inf
    for _ in range(50):
        t = rng.uniform(0, 10, size=int(rng.integers(2, 6))) ** 2
        a = solver.optimal_alpha(t)
        pts = rng.dirichlet(np.ones(t.size), size=500)
        worst_a = min(worst_a, np.min(np.sum(t / pts, axis=1)) - np.sum(t / a))
    worst_h = 0.0
    for seed in range(5):
        graphs, _ = blob_graphs(seed, m=15)
        cfg = solver.ProblemConfig(max_iter=0, seed=seed)
        st = solver.init_state(graphs, 3, cfg)
        for _ in range(3):
            solver.step(st, graphs, cfg)
        solver.update_h(st, graphs)
        for v in range(st.n_views):
            C, D = solver.h_system(st, graphs, v)
            worst_h = max(worst_h, np.linalg.norm(C @ st.H[:, v, :] - D) / np.linalg.norm(D))
    record_property("g_margin", f"{worst_g:.2e}")
    record_property("alpha_margin", f"{worst_a:.2e}")
    record_property("h_rel_residual", f"{worst_h:.2e}")
    assert worst_g >= -1e-9
    assert worst_a >= -1e-9
    assert worst_h <= 1e-8


@criterion("AC4 per-iteration invariants")
def test_ac4_invariants(record_property):
    views, _ = synthetic.multiview_blobs(n=120, c=3, n_views=2, dim=10, seed=4)
    views = [graph.minmax_normalize(v) for v in views]
    graphs = graph.build_graphs(views, graph.select_anchors(views, 15, seed=4), k=5)
    cfg = solver.ProblemConfig(max_iter=20, seed=4)
    worst = {"orth": 0.0, "simplex": 0.0, "f_min": 0.0, "alpha": 0.0}
    mus = []

    def check(st, rec):
        for v in range(st.n_views):
            g = st.G[:, v, :]
            worst["orth"] = max(worst["orth"], np.max(np.abs(g.T @ g - np.eye(3))))
        worst["simplex"] = max(worst["simplex"], np.max(np.abs(st.Q.sum(axis=2) - 1)), -st.Q.min())
        worst["f_min"] = min(worst["f_min"], st.F.min())
        worst["alpha"] = max(worst["alpha"], abs(st.alpha.sum() - 1), -st.alpha.min())
        mus.append(st.mu.copy())

    res = solver.run(graphs, 3, cfg, callback=check)
    mus = np.array(mus)
    mu_ok = bool(np.all(np.diff(mus, axis=0) >= 0) and np.all(mus <= cfg.mu_max))
    for k, v in worst.items():
        record_property(k, f"{v:.1e}")
    record_property("mu_ok", mu_ok)
    assert res.iterations == 20
    assert worst["orth"] <= 1e-8
    assert worst["simplex"] <= 1e-10
    assert worst["f_min"] >= 0
    assert worst["alpha"] <= 1e-12
    assert mu_ok


@criterion("AC5 end-to-end convergence and quality (blobs, lambda=100, p=0.8)")
def test_ac5_end_to_end(record_property):
    accs, nmis, conv, times = [], [], 0, []
    for seed in SEEDS:
        t0 = time.perf_counter()
        graphs, y = blob_graphs(seed)
        res = solver.run(graphs, 3, solver.ProblemConfig(lambda1=100, lambda2=100, p=0.8, seed=seed))
        times.append(time.perf_counter() - t0)
        accs.append(metrics.acc(res.labels, y))
        nmis.append(metrics.nmi(res.labels, y))
        conv += res.converged
    record_property("median_acc", f"{np.median(accs):.3f}")
    record_property("median_nmi", f"{np.median(nmis):.3f}")
    record_property("converged", f"{conv}/10")
    record_property("max_seconds", f"{max(times):.1f}")
    assert max(times) < 60
    assert np.median(accs) >= 0.95
    assert np.median(nmis) >= 0.90
    assert conv >= 8


@criterion("AC6 Schatten-p effect under 20% bridging noise")
def test_ac6_schatten_p_effect(record_property):
    med = {}
    for p in (0.5, 1.0):
        accs = []
        for seed in SEEDS:
            graphs, y = blob_graphs(seed, bridge=0.2)
            res = solver.run(graphs, 3, solver.ProblemConfig(p=p, seed=seed))
            accs.append(metrics.acc(res.labels, y))
        med[p] = float(np.median(accs))
    record_property("median_acc_p0.5", f"{med[0.5]:.3f}")
    record_property("median_acc_p1.0", f"{med[1.0]:.3f}")
    assert med[0.5] >= med[1.0] - 0.02


@criterion("AC7 determinism of CLI outputs")
def test_ac7_determinism(tmp_path, record_property):
    views, y = synthetic.multiview_blobs(seed=7)
    names = []
    for v, x in enumerate(views):
        np.savetxt(tmp_path / f"v{v}.csv", x, delimiter=",", fmt="%.17g")
        names.append(f"v{v}.csv")
    np.savetxt(tmp_path / "y.csv", y, fmt="%d")
    man = tmp_path / "blobs.json"
    man.write_text(json.dumps({"name": "blobs", "views": names, "labels": "y.csv", "clusters": 3}))
    outs = []
    for run in ("a", "b"):
        assert cli.main(["--data", str(man), "--seed", "7", "--out", str(tmp_path / run)]) == 0
        outs.append(tmp_path / run)
    same = all(
        (outs[0] / f).read_bytes() == (outs[1] / f).read_bytes() for f in ("labels.csv", "metrics.json")
    )
    record_property("identical", same)
    assert same


@criterion("AC8 optional MSRC run (not gating)")
def test_ac8_msrc_optional(tmp_path, record_property):
    if not MSRC_MANIFEST.is_file():
        pytest.skip(f"no MSRC data at {MSRC_MANIFEST}")
    assert cli.main(["--data", str(MSRC_MANIFEST), "--out", str(tmp_path)]) == 0
    scores = json.loads((tmp_path / "metrics.json").read_text())
    for k, v in scores.items():
        record_property(k, f"{v:.3f}")
    assert set(scores) == {"acc", "nmi", "purity"}
