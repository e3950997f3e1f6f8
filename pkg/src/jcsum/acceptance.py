"""Cross-validation acceptance suite.

Twelve numbered criteria check the three inversion routes against each
other and against closed-form anchors, each with a fixed tolerance and a
runtime budget.  ``run_all`` returns structured results; the CLI
``selftest`` subcommand prints them and exits nonzero on any failure.

``tolerance_scale`` multiplies every tolerance; it exists so a negative
control (scale << 1) can verify that the gate actually trips.
"""

from __future__ import annotations

import filecmp
import math
import os
import tempfile
import time
from dataclasses import dataclass

import numpy as np

from .contour import inversion_contour_detuned, inversion_contour_resonant
from .envelopes import collapse_resonant, revival_detuned, revival_resonant
from .exact import (
    ModelParams,
    inversion_exact,
    inversion_exact_grid,
    inversion_exact_resonant_grid,
    make_poisson,
    static_part,
)
from .lambert import (
    NU_CRITICAL,
    branch_point_w0,
    generalized_residual,
    lambert_series,
    lambert_w,
)
from .saddle import inversion_saddle, inversion_saddle_grid, trace_trajectory

__all__ = ["CriterionResult", "run_all", "run_criteria", "CRITERIA", "window_envelope"]


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    measured: str
    tolerance: str
    seconds: float


def window_envelope(t, y, width):
    """Sliding-window max of |y| over windows of the given width in t."""
    t = np.asarray(t, dtype=float)
    y = np.abs(np.asarray(y, dtype=float))
    out = np.empty_like(y)
    for i, ti in enumerate(t):
        lo, hi = np.searchsorted(t, [ti - width / 2.0, ti + width / 2.0])
        out[i] = y[lo : max(hi, lo + 1)].max()
    return out


def _tau_grid(lo=1e-4, hi=250.0, n=400):
    return np.geomspace(math.sqrt(lo), math.sqrt(hi), n) ** 2


def _c01_initial_condition(scale):
    tol = 1e-8 * scale
    worst = 0.0
    for alpha in (1.0, 5.0, 10.0):
        for nu in (0.0, 0.2):
            params = ModelParams(alpha=alpha, nu=nu)
            dist = make_poisson(alpha)
            vals = [
                inversion_exact(dist, params, 0.0),
                inversion_contour_resonant(alpha, 0.0),
                inversion_contour_detuned(params, 0.0),
                inversion_saddle(params, 0.0, [0])[0],
            ]
            worst = max(worst, max(abs(v + 1.0) for v in vals))
    return worst < tol, f"max |value + 1| = {worst:.3e}", f"< {tol:.1e}"


def _c02_oracle_equivalence(scale):
    tol = 1e-6 * scale
    alpha = 5.0
    dist = make_poisson(alpha, 1e-16)
    t = np.linspace(0.01, 45.0, 500)
    exact = inversion_exact_resonant_grid(dist, t)
    contour = np.array([inversion_contour_resonant(alpha, x) for x in t])
    worst = float(np.max(np.abs(contour - exact)))
    return worst < tol, f"max |exact - contour| = {worst:.3e} over 500 pts", f"< {tol:.1e}"


def _c03_lambert_conformance(scale):
    tol_res = 1e-12 * scale
    tol_bp = 1e-6 * scale
    rng = np.random.default_rng(20260826)
    worst = 0.0
    for k in range(-5, 6):
        r = np.exp(rng.uniform(math.log(0.05), math.log(50.0), 100))
        th = rng.uniform(-math.pi + 1e-6, math.pi - 1e-6, 100)
        for u in r * np.exp(1j * th):
            w = lambert_w(k, u)
            worst = max(worst, abs(w * np.exp(w) - u) / max(1.0, abs(u)))
    bp = max(abs(lambert_w(0, -1.0 / math.e) + 1.0), abs(lambert_w(-1, -1.0 / math.e) + 1.0))
    ok = worst <= tol_res and bp < tol_bp
    return ok, f"max residual = {worst:.3e}; branch-point dev = {bp:.3e}", (
        f"<= {tol_res:.1e}; < {tol_bp:.1e}"
    )


def _c04_series_agreement(scale):
    tol = 1e-10 * scale
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(50):
        u = rng.uniform(0.0, 0.3) * np.exp(1j * rng.uniform(-math.pi, math.pi))
        worst = max(worst, abs(lambert_series(u, 40) - lambert_w(0, u)))
    return worst < tol, f"max |series - W0| = {worst:.3e}", f"< {tol:.1e}"


def _c05_saddle_residuals(scale):
    tol_res = 1e-10 * scale
    tol_re = 1e-12 * scale
    tau = _tau_grid()
    worst_res = 0.0
    worst_re = -np.inf
    for nu in (0.0, 0.2):
        for k in range(-3, 4):
            traj = trace_trajectory(k, nu, tau)
            res = np.abs(tau / 4.0 + traj.F**2 * (nu + np.exp(2.0 * traj.F)))
            worst_res = max(worst_res, float(np.max(res / np.maximum(1.0, tau / 4.0))))
            worst_re = max(worst_re, float(np.max(traj.phi.real)))
    ok = worst_res < tol_res and worst_re <= tol_re
    return ok, f"max residual = {worst_res:.3e}; max Re phi = {worst_re:.3e}", (
        f"< {tol_res:.1e}; <= {tol_re:.1e}"
    )


def _c06_collapse(scale):
    tol = 0.02 * scale
    alpha = 5.0
    dist = make_poisson(alpha, 1e-16)
    t = np.linspace(0.0, 1.5, 1501)
    exact = inversion_exact_resonant_grid(dist, t)
    approx = np.array([collapse_resonant(alpha, x) for x in t])
    worst = float(np.max(np.abs(approx - exact)))
    return worst < tol, f"max |collapse - exact| = {worst:.5f}", f"< {tol:.3g}"


def _c07_revival_centering(scale):
    tol_t = 2.0 * scale
    tol_mag = 0.15 * scale
    alpha = 5.0
    dist = make_poisson(alpha, 1e-16)
    t = np.linspace(25.0, 40.0, 3001)
    env = window_envelope(t, inversion_exact_resonant_grid(dist, t), math.pi / alpha)
    ipk = int(np.argmax(env))
    dt = abs(t[ipk] - 2.0 * math.pi * alpha)
    ref = (1.0 + math.pi**2) ** -0.25
    rel = abs(env[ipk] - ref) / ref
    ok = dt < tol_t and rel < tol_mag
    return ok, f"peak offset = {dt:.3f} (lambda-t); magnitude rel dev = {rel:.4f}", (
        f"< {tol_t:.3g}; < {tol_mag:.3g}"
    )


def _c08_figure4(scale):
    tol_env = 0.05 * scale
    tol_cross = 0.5 * scale
    alpha = 5.0
    dist = make_poisson(alpha, 1e-16)
    t = np.linspace(60.0, 110.0, 4001)
    width = math.pi / alpha
    env_ex = window_envelope(t, inversion_exact_resonant_grid(dist, t), width)
    series = inversion_saddle_grid(ModelParams(alpha=alpha, nu=0.0), t, [2, 3])
    env_sd = window_envelope(t, series.values["saddle"], width)
    diff = float(np.max(np.abs(env_ex - env_sd)))
    mid = (t / alpha > 14.0) & (t / alpha < 16.5)
    t_min = float(t[mid][np.argmin(env_ex[mid])] / alpha)
    d_cross = abs(t_min - 15.08)
    ok = diff < tol_env and d_cross < tol_cross
    return ok, f"max envelope diff = {diff:.4f}; crossing min at t/alpha = {t_min:.3f}", (
        f"< {tol_env:.3g}; within {tol_cross:.3g} of 15.08"
    )


def _c09_detuned_reduction(scale):
    tol_int = 1e-10 * scale
    tol_alg = 1e-14 * scale
    alpha = 5.0
    params0 = ModelParams(alpha=alpha, nu=0.0)
    t = np.linspace(0.0, 40.0, 100)
    worst_int = max(
        abs(inversion_contour_detuned(params0, x) - inversion_contour_resonant(alpha, x))
        for x in t
    )
    from .envelopes import collapse_detuned

    worst_alg = 0.0
    for x in (0.0, 0.7, 1.3, 31.0, 63.0):
        worst_alg = max(worst_alg, abs(collapse_detuned(alpha, 0.0, x) - collapse_resonant(alpha, x)))
        for n in (1, 2):
            worst_alg = max(
                worst_alg,
                abs(revival_detuned(alpha, 0.0, n, x) - revival_resonant(alpha, n, x, simplified=True)),
            )
    ok = worst_int < tol_int and worst_alg <= tol_alg
    return ok, f"contour nu=0 dev = {worst_int:.3e}; envelope reduction dev = {worst_alg:.3e}", (
        f"< {tol_int:.1e}; <= {tol_alg:.1e}"
    )


def _c10_figure5(scale):
    tol_env = 0.07 * scale
    tol_peak = 0.02 * scale
    tol_static = 0.15 * scale
    alpha, nu = 5.0, 0.2
    params = ModelParams(alpha=alpha, nu=nu)
    dist = make_poisson(alpha, 1e-16)
    T = 2.0 * math.pi * alpha * math.sqrt(1.0 + nu)
    t = np.linspace(0.6 * T, 1.4 * T, 4001)
    width = math.pi / alpha
    sp = static_part(alpha, params.mu)
    env_ex = window_envelope(t, inversion_exact_grid(dist, params, t), width)
    approx = np.array([revival_detuned(alpha, nu, 1, x) for x in t]) + sp
    env_ap = window_envelope(t, approx, width)
    diff = float(np.max(np.abs(env_ex - env_ap)))
    d_peak = abs(t[int(np.argmax(env_ap))] / T - 1.0)
    rel_static = abs(sp + 0.2) / 0.2
    ok = diff < tol_env and d_peak < tol_peak and rel_static < tol_static
    return ok, (
        f"max envelope diff = {diff:.4f}; peak offset t/T = {d_peak:.4f}; "
        f"static rel dev = {rel_static:.4f}"
    ), f"< {tol_env:.3g}; < {tol_peak:.3g}; < {tol_static:.3g}"


def _c11_generalized_lambert(scale):
    tol_res = 1e-12 * scale
    tau = _tau_grid(0.5, 250.0, 25)
    worst = 0.0
    for nu in (0.05, 0.2):  # 2 x 7 x 25 = 350 queries
        for k in range(-3, 4):
            traj = trace_trajectory(k, nu, tau)
            for t_val, w in zip(traj.tau, traj.F):
                u = 1j * math.sqrt(t_val) / 2.0
                worst = max(worst, generalized_residual(w, u, nu) / max(1.0, abs(u)))
    worst_bp = 0.0
    for nu in (0.001, 0.01, 0.02):
        w0 = branch_point_w0(nu).value
        worst_bp = max(worst_bp, abs(nu + np.exp(2.0 * w0) * (1.0 + w0)))
    nu0 = round(NU_CRITICAL, 6)
    ok = worst < tol_res and worst_bp < tol_res and nu0 == 0.024894
    return ok, (
        f"max defining-equation residual = {worst:.3e}; branch-point residual = {worst_bp:.3e}; "
        f"nu0 = {nu0:.6f}"
    ), f"< {tol_res:.1e}; < {tol_res:.1e}; = 0.024894"


def _c12_determinism(scale):
    from .cli import main

    with tempfile.TemporaryDirectory() as tmp:
        paths = [os.path.join(tmp, f"run{i}.csv") for i in (1, 2)]
        argv = [
            "inversion", "--alpha", "5", "--methods", "exact,saddle",
            "--branches", "0,1", "--t-start", "0", "--t-stop", "40",
            "--t-count", "50", "--out",
        ]
        for p in paths:
            status = main(argv + [p])
            if status != 0:
                return False, f"cmd_inversion exited {status}", "byte-identical files"
        same = filecmp.cmp(*paths, shallow=False)
    return same, "files identical" if same else "files differ", "byte-identical files"


CRITERIA = (
    (1, "initial condition -1 at t=0 (exact/contour/saddle)", _c01_initial_condition),
    (2, "contour vs exact sum, resonant, 500-point grid", _c02_oracle_equivalence),
    (3, "Lambert W residuals, branches -5..5, and W(-1/e)", _c03_lambert_conformance),
    (4, "Lambert series vs iterative on |u| < 0.3", _c04_series_agreement),
    (5, "saddle-equation residuals and Re phi <= 0", _c05_saddle_residuals),
    (6, "Gaussian collapse law vs exact sum", _c06_collapse),
    (7, "first-revival centering and magnitude", _c07_revival_centering),
    (8, "branches {2,3} superposition vs exact (2nd/3rd revivals)", _c08_figure4),
    (9, "detuned operations reduce to resonant at nu = 0", _c09_detuned_reduction),
    (10, "detuned first revival vs exact (envelope)", _c10_figure5),
    (11, "generalized Lambert residuals and branch points", _c11_generalized_lambert),
    (12, "CLI output determinism", _c12_determinism),
)


def run_criteria(numbers=None, tolerance_scale: float = 1.0):
    """Run selected criteria (all by default); returns CriterionResult list."""
    results = []
    for number, name, fn in CRITERIA:
        if numbers is not None and number not in numbers:
            continue
        start = time.perf_counter()
        passed, measured, tolerance = fn(tolerance_scale)
        results.append(
            CriterionResult(
                number=number,
                name=name,
                passed=bool(passed),
                measured=measured,
                tolerance=tolerance,
                seconds=time.perf_counter() - start,
            )
        )
    return results


def run_all(tolerance_scale: float = 1.0):
    return run_criteria(None, tolerance_scale)
