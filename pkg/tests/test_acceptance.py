"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Criterion 4 asserts a fixed tightness ordering of the bound family, both
pointwise on an eta grid and integrated over the Gaussian fixtures.  Two of
the adjacent comparisons in that chain are inverted by the actual
mathematics of the reward functions (see the ordering tests in
test_rewards.py and test_engine.py for the characterization), so that
criterion fails honestly rather than being loosened to pass.
"""

import itertools
import math
import time
from fractions import Fraction

import numpy as np
from scipy.special import xlogy

from refinery import (ForecastRecordSet, GridDensity, bayes_error,
                      build_poly_reward, closed_form_bound,
                      conditional_refinement, decompose_forecasts, eval_poly,
                      eval_reward, greedy_rank, joint_from_samples,
                      joint_from_table, k2_given_k1, refinement_data,
                      refinement_elicitation, refinement_feature_score,
                      score_loss_identity_check)
from refinery.engine import CHAIN_ORDER
from refinery.links import COMPOSITE_PAIRS, composite_by_name, get_link

from conftest import GAUSSIAN_SEPARATIONS, gaussian_pair


def _report(num: int, ok: bool, detail: str):
    print(f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {num:02d}: {detail}"


def bayes_error_oracle(mu: float) -> float:
    return 0.5 * math.erfc(mu / math.sqrt(2.0))


def test_acceptance_01_polynomial_constants():
    start = time.perf_counter()
    p2, p4 = build_poly_reward(2), build_poly_reward(4)
    elapsed = time.perf_counter() - start
    k2_rounded = k2_given_k1(p2, -0.0167)
    ok = (p2.k1 == Fraction(-1, 60)
          and p2.k2 == Fraction(960, 11)
          and abs(k2_rounded - 87.018) <= 0.01
          and abs(k2_rounded - 87.0196) <= 0.01
          and p4.k1 == Fraction(-1, 1260)
          and abs(float(p4.k1) + 1.0 / 1260.0) <= 1e-12 * (1.0 / 1260.0)
          and abs(float(p4.k2) - 1671.3) <= 0.1
          and elapsed < 1.0)
    _report(1, ok,
            f"k1(2)={p2.k1}, k2(2)={p2.k2}, k2(rounded k1)={k2_rounded:.6g}, "
            f"k1(4)={p4.k1}, k2(4)={float(p4.k2):.6g}, built in {elapsed:.3f}s")


def test_acceptance_02_poly0_equals_least_squares():
    grid = np.linspace(0.0, 1.0, 1001)
    dev = np.max(np.abs(eval_poly(build_poly_reward(0), grid)
                        - eval_reward("ls", grid)))
    _report(2, dev <= 1e-12, f"max |poly-0 - ls| = {dev:.3e}")


def test_acceptance_03_gaussian_bayes_error_and_exp_bound():
    worst_eps, worst_exp = 0.0, 0.0
    for mu in GAUSSIAN_SEPARATIONS:
        report = bayes_error(gaussian_pair(mu))
        worst_eps = max(worst_eps,
                        abs(report.bayes_error - bayes_error_oracle(mu)))
        exp_oracle = 0.5 * math.exp(-(2.0 * mu) ** 2 / 8.0)
        worst_exp = max(worst_exp, abs(report.bounds["exp"] - exp_oracle))
    fixed = bayes_error(gaussian_pair(1.5)).bounds["exp"]
    ok = worst_eps <= 1e-6 and worst_exp <= 1e-6 \
        and abs(fixed - 0.162326) <= 1e-6
    _report(3, ok,
            f"max eps error {worst_eps:.2e}, max exp-bound error "
            f"{worst_exp:.2e}, exp bound at mu 1.5 = {fixed:.6f}")


def test_acceptance_04_bound_chain_and_pointwise_ordering():
    failures = []
    grid = np.arange(1, 100) / 100.0
    chain = ("zero-one", "poly-4", "poly-2", "ls", "cosh", "sec", "log",
             "log-cos", "exp")
    for upper, lower in zip(chain[:-1], chain[1:]):
        gap = float(np.min(eval_reward(upper, grid) - eval_reward(lower, grid)))
        if gap < -1e-9:
            failures.append(f"pointwise {upper}>={lower} violated by {-gap:.2e}")
    for mu in GAUSSIAN_SEPARATIONS:
        report = bayes_error(gaussian_pair(mu))
        values = [("bayes-error", report.bayes_error)]
        values += [(name, report.bounds[name]) for name in CHAIN_ORDER]
        for (na, va), (nb, vb) in zip(values[:-1], values[1:]):
            if va > vb + 1e-6:
                failures.append(
                    f"mu={mu}: -S_{na} = {va:.6f} > -S_{nb} = {vb:.6f}")
    _report(4, not failures,
            "; ".join(failures) if failures else "full chain holds")


def test_acceptance_05_closed_form_matches_quadrature():
    names = ("ls", "exp", "log", "log-cos", "cosh", "sec", "poly-2", "poly-4")
    worst = 0.0
    for mu in GAUSSIAN_SEPARATIONS:
        model = gaussian_pair(mu)
        for name in names:
            diff = abs(closed_form_bound(model, name)
                       - refinement_data(model, name))
            worst = max(worst, diff)
    _report(5, worst <= 1e-6, f"max |closed form - quadrature| = {worst:.2e}")


def _entropy_given_cells(table: np.ndarray) -> float:
    cells = table.sum(axis=-1)
    cond = table / np.where(cells > 0, cells, 1.0)[..., None]
    return -float(np.sum(cells[..., None] * xlogy(cond, cond)))


def test_acceptance_06_entropy_identities():
    rng = np.random.default_rng(7)
    worst_single = worst_pair = worst_residual = 0.0
    for _ in range(120):
        nx, nz = int(rng.integers(2, 6)), int(rng.integers(2, 5))
        joint = joint_from_table(
            rng.dirichlet(np.ones(nx * 2)).reshape(nx, 2))
        report = refinement_feature_score(joint, "log-natural")
        worst_single = max(worst_single, abs(
            report.refinement + _entropy_given_cells(joint.table)))
        worst_residual = max(worst_residual,
                             abs(report.entropy_identity_residual))
        joint3 = joint_from_table(
            rng.dirichlet(np.ones(nx * nz * 2)).reshape(nx, nz, 2))
        worst_pair = max(worst_pair, abs(
            conditional_refinement(joint3, "log-natural")
            + _entropy_given_cells(joint3.table)))
    ok = worst_single <= 1e-12 and worst_pair <= 1e-12 \
        and worst_residual <= 1e-10
    _report(6, ok,
            f"|S + H(y|x)| <= {worst_single:.2e}, "
            f"|S + H(y|x,z)| <= {worst_pair:.2e}, "
            f"diversity residual <= {worst_residual:.2e} over 120 joints")


def test_acceptance_07_decomposition():
    a = decompose_forecasts(
        ForecastRecordSet(np.full(100, 0.5), np.array([1, -1] * 50)), "ls")
    b = decompose_forecasts(
        ForecastRecordSet(np.array([1.0] * 50 + [0.0] * 50),
                          np.array([1] * 50 + [-1] * 50)), "ls")
    exact = (a.calibration == 0.0 and a.refinement == -0.5
             and b.calibration == 0.0 and b.refinement == 0.0)
    rng = np.random.default_rng(11)
    identity = sign = True
    saw_strictly_negative = False
    for _ in range(50):
        n = int(rng.integers(3, 300))
        d = decompose_forecasts(
            ForecastRecordSet(rng.random(n), rng.choice([-1, 1], size=n)),
            "ls", bins=int(rng.integers(1, 40)))
        identity &= d.total == d.calibration + d.refinement
        sign &= d.calibration <= 0.0
        saw_strictly_negative |= d.calibration < 0.0
    calibrated = decompose_forecasts(
        ForecastRecordSet(np.array([0.25] * 4 + [0.75] * 4),
                          np.array([1, -1, -1, -1, 1, 1, 1, -1])), "ls", bins=2)
    iff = calibrated.calibration == 0.0 and saw_strictly_negative
    ok = exact and identity and sign and iff
    _report(7, ok,
            f"weatherman A = ({a.calibration}, {a.refinement}), "
            f"B = ({b.calibration}, {b.refinement}); identity exact on 50 "
            f"random sets; calibration <= 0 with equality iff binned-calibrated")


def test_acceptance_08_hilbert_extremes():
    matched = refinement_elicitation(
        GridDensity.from_function(lambda e: 6.0 * e * (1.0 - e), 0.0, 1.0,
                                  10_000),
        lambda e: e, "ls")
    endpoint = refinement_elicitation(
        GridDensity.from_point_masses(0.0, 1.0, 2_000_000,
                                      [(0.0, 0.3), (1.0, 0.7)]),
        lambda e: e, "ls")
    uniform = refinement_elicitation(
        GridDensity(0.0, 1.0, np.full(10_000, 1.0)), lambda e: e, "ls")
    ok = (abs(matched - (-0.4)) <= 1e-6 and abs(endpoint) <= 1e-6
          and abs(uniform - (-1.0 / 3.0)) <= 1e-6)
    _report(8, ok,
            f"s = -3 J_ls gives {matched:.8f} (want -0.4); endpoint masses "
            f"give {endpoint:.2e} (want 0); uniform gives {uniform:.8f} "
            f"(want -1/3)")


def test_acceptance_09_loss_identities_and_quasi_convexity():
    grid = np.arange(1, 100) / 100.0
    worst = 0.0
    for name in ("ls", "exp", "log", "savage", "tangent"):
        i1, neg_phi_pos, i_neg, neg_phi_neg = score_loss_identity_check(
            name, name, grid)
        worst = max(worst, float(np.max(np.abs(i1 - neg_phi_pos))),
                    float(np.max(np.abs(i_neg - neg_phi_neg))))
        risk_lhs = grid * -np.asarray(neg_phi_pos) \
            + (1 - grid) * -np.asarray(neg_phi_neg)
        reward = eval_reward(name, grid, family="loss")
        worst = max(worst, float(np.max(np.abs(risk_lhs + reward))))
    quasi_ok = True
    for name, (_, link_name) in COMPOSITE_PAIRS.items():
        link = get_link(link_name)
        lo = link.v_lo if np.isfinite(link.v_lo) else -20.0
        hi = link.v_hi if np.isfinite(link.v_hi) else 20.0
        vals = composite_by_name(name, np.linspace(lo, hi, 10_003)[1:-1])
        diffs = np.diff(vals)
        signs = np.sign(diffs[np.abs(diffs) > 1e-13])
        quasi_ok &= signs.size == 0 or bool(np.all(signs[:-1] <= signs[1:]))
    ok = worst <= 1e-9 and quasi_ok
    _report(9, ok,
            f"max identity residual {worst:.2e}; single-sign-change check "
            f"{'passed' if quasi_ok else 'failed'} on 10001-point grids")


def test_acceptance_10_greedy_ranking_oracle():
    rng = np.random.default_rng(13)
    y01 = rng.integers(0, 2, size=400)
    x1 = np.bitwise_xor(y01, (rng.random(400) < 0.1).astype(int))
    x2 = x1.copy()
    x3 = np.bitwise_xor(x1, y01)
    X = np.column_stack([x1, x2, x3])
    y = 2 * y01 - 1
    ranked = greedy_rank(X, y, "log-natural")

    def chain_scores(perm):
        scores = [refinement_feature_score(
            joint_from_samples(np.column_stack([X[:, perm[0]], y])),
            "log-natural").refinement]
        for prev, cur in zip(perm[:-1], perm[1:]):
            scores.append(conditional_refinement(joint_from_samples(
                np.column_stack([X[:, prev], X[:, cur], y])), "log-natural"))
        return tuple(scores)

    best = min(itertools.permutations(range(3)),
               key=lambda p: (tuple(-s for s in chain_scores(p)), p))
    got = [name for name, _ in ranked]
    want = [f"x{i}" for i in best]
    _report(10, got == want and np.allclose(
        [s for _, s in ranked], chain_scores(best), atol=1e-12),
        f"greedy order {got} matches oracle {want}")
