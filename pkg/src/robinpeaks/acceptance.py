"""The ten acceptance checks, runnable from pytest or the CLI.

Each criterion function returns a CriterionResult with the measured numbers
in ``detail``; expensive artifacts (alpha sweeps, effective-operator
eigenvalues) are cached and shared between criteria.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import eigsolve, experiments, femrobin, mesh2d, sturm1d, xsection
from .geometry import CrossSection, PeakGeometry


@dataclass
class CriterionResult:
    index: int
    name: str
    passed: bool
    detail: str
    elapsed: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} criterion {self.index} ({self.name}): {self.detail}"


@lru_cache(maxsize=None)
def _lambda_L1(j: int, q: float, d: int, tol: float) -> float:
    n0 = 8192 if tol < 1e-5 else 2048
    res = sturm1d.lambda_L1(j, q, d, tol, n0=n0)
    if not res.converged:
        raise RuntimeError(f"effective-operator ladder did not converge at {q=}")
    return res.value


@lru_cache(maxsize=None)
def _sweep(q: float) -> experiments.SweepResult:
    geom = PeakGeometry(q=q, d=2, cross_section=CrossSection.interval(1.0), a=1.0)
    return experiments.sweep_alpha(geom, experiments.default_alpha_ladder(),
                                   j_count=1, retain_vectors=True, seed=0)


def _timed(index, name, fn):
    t0 = time.perf_counter()
    passed, detail = fn()
    return CriterionResult(index=index, name=name, passed=bool(passed),
                           detail=detail, elapsed=time.perf_counter() - t0)


def criterion_1() -> CriterionResult:
    """Scaling identity on matched mapped grids."""
    def run():
        spreads = []
        for j in (1, 2, 3):
            spreads.append(sturm1d.scaling_check(j, 1.5, 2, [1.0, 2.0, 4.0],
                                                 a=40.0, n=4096))
        worst = max(spreads)
        return worst <= 1e-10, f"max relative spread {worst:.3e} (tol 1e-10)"
    return _timed(1, "scaling identity", run)


def criterion_2() -> CriterionResult:
    """Hardy nonnegativity of the mu = 0 assembly."""
    def run():
        worst = np.inf
        for (q, d) in ((1.2, 2), (1.5, 2), (1.5, 3)):
            for n in (100, 1000):
                spec = sturm1d.EffectiveOperatorSpec(q=q, d=d, mu=0.0, a=1.0)
                pencil = sturm1d.assemble_effective(spec, sturm1d.build_grid(1.0, n, 2.0))
                lam1 = float(sturm1d.eigs_tridiagonal(pencil, 1).eigenvalues[0])
                worst = min(worst, lam1)
        return worst >= -1e-10, f"min lambda_1 over cases {worst:.3e} (tol -1e-10)"
    return _timed(2, "Hardy positivity", run)


def criterion_3() -> CriterionResult:
    """Truncation squeeze: lambda_1(L_mu,1) >= mu^4 lambda_1(L_1) within 1e-6."""
    def run():
        lam_l1 = _lambda_L1(1, 1.5, 2, 1e-7)
        worst_rel = np.inf
        diffs = []
        for mu in (4.0, 16.0, 64.0):
            spec = sturm1d.EffectiveOperatorSpec(q=1.5, d=2, mu=mu, a=1.0)
            grid = sturm1d.build_grid(1.0, 65536, 4.0)
            lam_mu = float(sturm1d.eigs_tridiagonal(
                sturm1d.assemble_effective(spec, grid), 1).eigenvalues[0])
            scale = mu**4 * abs(lam_l1)
            diff = lam_mu - mu**4 * lam_l1
            diffs.append(diff)
            worst_rel = min(worst_rel, diff / scale)
        return (worst_rel >= -1e-6,
                f"min normalized difference {worst_rel:.3e} (tol -1e-6), "
                f"max difference {max(diffs):.3e} (bounded)")
    return _timed(3, "truncation squeeze", run)


def criterion_4() -> CriterionResult:
    """Negative-eigenvalue counts grow with the truncation length."""
    def run():
        q, d, gamma = 1.2, 2, sturm1d.tip_grading(1.2, 2)
        counts = []
        for a, n in ((10.0, 4096), (40.0, 8192), (160.0, 16384)):
            spec = sturm1d.EffectiveOperatorSpec(q=q, d=d, mu=1.0, a=a)
            pencil = sturm1d.assemble_effective(spec, sturm1d.build_grid(a, n, gamma))
            counts.append(sturm1d.negative_count(pencil, 0.0))
        increasing = counts[0] < counts[1] < counts[2]
        spec = sturm1d.EffectiveOperatorSpec(q=q, d=d, mu=1.0, a=160.0)
        pencil = sturm1d.assemble_effective(spec, sturm1d.build_grid(160.0, 16384, gamma))
        lams = sturm1d.eigs_tridiagonal(pencil, counts[-1]).eigenvalues
        gaps = np.diff(lams) / abs(lams[0])
        simple = bool(np.all(gaps > 1e-8))
        return (increasing and simple,
                f"counts {counts} strictly increasing={increasing}, "
                f"min relative gap {gaps.min():.3e} (tol 1e-8)")
    return _timed(4, "negative-count growth and simplicity", run)


def criterion_5() -> CriterionResult:
    """Interval oracle bounds and the rectangle cross-check of the FEM chain."""
    def run():
        ok = True
        notes = []
        for alpha in (0.5, 1.0, 2.0, 5.0, 10.0):
            lam1 = xsection.robin_interval_eigs(1.0, alpha, 1).eigenvalues[0]
            ok &= lam1 <= -alpha**2
        notes.append("lam1 <= -alpha^2 on the alpha list")
        for alpha in (0.1, 0.05, 0.01):
            lam1 = xsection.robin_interval_eigs(1.0, alpha, 1).eigenvalues[0]
            ok &= abs(lam1 + 2.0 * alpha) <= 3.0 * alpha**2
        notes.append("|lam1 + 2 alpha| <= 3 alpha^2 for alpha <= 0.1")
        mesh = mesh2d.build_rectangle_mesh(1.0, 1.0, 64, 64)
        pencil = femrobin.assemble(mesh, 0.01)
        spec = eigsolve.smallest_eigs(pencil, 1, tol=1e-9, seed=0)
        _CERTIFICATES.append(spec.meta["certificate"])
        fem1 = float(spec.eigenvalues[0])
        oracle = xsection.robin_rectangle_eig1(1.0, 1.0, 0.01)
        rel = abs(fem1 - oracle) / abs(oracle)
        ok &= rel <= 0.01
        notes.append(f"square FEM vs oracle rel err {rel:.2e} (tol 1e-2)")
        return ok, "; ".join(notes)
    return _timed(5, "interval and rectangle oracles", run)


def criterion_6() -> CriterionResult:
    """Leading-order law: slope and coefficient against the 1-D constants."""
    def run():
        ok = True
        notes = []
        for q in (1.2, 1.5):
            sweep = _sweep(q)
            _CERTIFICATES.extend(p.certificate for p in sweep.points)
            lam_l1 = _lambda_L1(1, q, 2, 1e-4)
            fit = experiments.fit_power_law(sweep, 1, lambda_L1_value=lam_l1)
            rel_slope = abs(fit.slope_extrapolated - fit.theory_slope) / fit.theory_slope
            rel_coeff = abs(fit.coeff_extrapolated - fit.theory_coeff) / fit.theory_coeff
            ok &= rel_slope <= 0.05 and rel_coeff <= 0.15
            notes.append(
                f"q={q}: slope {fit.slope_extrapolated:.4f} vs {fit.theory_slope} "
                f"({100 * rel_slope:.2f}%, tol 5%), coeff "
                f"{fit.coeff_extrapolated:.4f} vs {fit.theory_coeff:.4f} "
                f"({100 * rel_coeff:.2f}%, tol 15%)")
        return ok, "; ".join(notes)
    return _timed(6, "leading-order eigenvalue law", run)


def criterion_7() -> CriterionResult:
    """Exponential localization ratios stay bounded along the ladder."""
    def run():
        sweep = _sweep(1.5)
        flat = experiments.agmon_ratio(sweep, 0.0)
        exact_one = all(r == 1.0 for r in flat.ratios)
        rep = experiments.agmon_ratio(sweep, 0.1)
        top = rep.ratios[-4:]
        spread = max(top) / min(top)
        ok = exact_one and spread <= 2.0
        return ok, (f"ratio(b=0) exactly 1: {exact_one}; top-four spread at "
                    f"b=0.1: {spread:.4f} (tol 2)")
    return _timed(7, "localization ratio boundedness", run)


def criterion_8() -> CriterionResult:
    """Change-of-variables sandwiches for random polynomial trials."""
    def run():
        n_pass = 0
        total = 0
        min_margin = np.inf
        for seed in range(5):
            for q in (1.2, 1.5):
                for eps in (0.1, 0.5):
                    res = experiments.pullback_check(q, eps, seed=seed)
                    total += 1
                    n_pass += res.boundary_ok and res.gradient_ok
                    min_margin = min(min_margin, min(res.margins.values()))
        return (n_pass == total,
                f"{n_pass}/{total} trials hold; min margin {min_margin:.3e} "
                f"(budget 1e-8)")
    return _timed(8, "change-of-variables sandwiches", run)


def criterion_9() -> CriterionResult:
    """Window lower bound: -eps * lambda_1 stays bounded as eps shrinks."""
    def run():
        res = experiments.neumann_window(1.5, [0.2, 0.1, 0.05, 0.025])
        _CERTIFICATES.extend(res.certificates)
        return (res.spread <= 3.0,
                f"empirical constants {[round(c, 4) for c in res.c_values]}, "
                f"spread {res.spread:.3f} (tol 3)")
    return _timed(9, "window lower bound", run)


def criterion_10() -> CriterionResult:
    """Solver certificates: inertia counts and dense-vs-Lanczos agreement."""
    def run():
        mesh = mesh2d.build_peak_mesh(1.5, 1.0, 1.0, 1e-3, 26, 7)
        pencil = femrobin.assemble(mesh, 1.0)
        dense = eigsolve.dense_eigs(pencil, 5, tol=1e-10)
        lanczos = eigsolve.smallest_eigs(pencil, 5, tol=1e-11, seed=0)
        rel = float(np.max(np.abs(dense.eigenvalues - lanczos.eigenvalues)
                           / np.abs(dense.eigenvalues)))
        certs = [c for c in _CERTIFICATES if c]
        verified = all(c.get("verified", False) for c in certs)
        fixture_ok = (rel <= 1e-8
                      and lanczos.meta["certificate"]["verified"]
                      and dense.meta["certificate"]["verified"])
        return (verified and fixture_ok,
                f"{len(certs)} inertia certificates from criteria 5-9 all "
                f"verified: {verified}; dense-vs-Lanczos rel diff {rel:.3e} "
                f"(tol 1e-8) on n={pencil.n}")
    return _timed(10, "solver certificates", run)


# inertia certificates accumulated by the eigensolves of criteria 5-9
_CERTIFICATES: list = []

_CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
    5: criterion_5, 6: criterion_6, 7: criterion_7, 8: criterion_8,
    9: criterion_9, 10: criterion_10,
}


def run_all(indices=None) -> list:
    """Run the selected criteria (all by default) in order."""
    if indices is None:
        indices = sorted(_CRITERIA)
    results = []
    for i in indices:
        if i not in _CRITERIA:
            raise ValueError(f"unknown criterion index {i}")
        results.append(_CRITERIA[i]())
    return results


def clear_caches() -> None:
    _lambda_L1.cache_clear()
    _sweep.cache_clear()
    _CERTIFICATES.clear()
