"""Invariant suites for every module, runnable from the CLI.

Each check returns (name, passed, detail).  The suites mirror the library's
documented invariants: special-function identities, kernel equivalences,
determinantal structure, ensemble statistics, zero-finding consistency and
estimator behavior.  `run_suites` aggregates and reports.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from . import correlations, ensembles, kernel, specfun, stats, zeta
from .sequences import UnfoldedSequence

__all__ = ["SUITES", "run_suites", "slater_density_permutation_sum"]


def slater_density_permutation_sum(system: kernel.FiniteSystem, pts: np.ndarray) -> float:
    """Brute-force N-body density via the double permutation sum.

    rho = (1/N!) |sum_P sgn(P) exp(i sum_j k_{p_j} . r_j)|^2, evaluated
    literally with itertools.permutations; independent oracle for the
    determinant route (N <= 3 is plenty: N! blowup).
    """
    modes = system.modes
    n = system.n_particles
    pts = np.asarray(pts, dtype=float).reshape(n, system.dimension)
    total = 0.0 + 0.0j
    for perm in itertools.permutations(range(n)):
        sgn = 1.0
        seen = list(perm)
        # permutation sign by counting transpositions
        visited = [False] * n
        for i in range(n):
            if visited[i]:
                continue
            cycle = 0
            j = i
            while not visited[j]:
                visited[j] = True
                j = seen[j]
                cycle += 1
            if cycle % 2 == 0:
                sgn = -sgn
        phase = sum(float(modes[perm[j]] @ pts[j]) for j in range(n))
        total += sgn * complex(math.cos(phase), math.sin(phase))
    return abs(total) ** 2 / math.factorial(n)


def _check(name, cond, detail=""):
    return (name, bool(cond), detail)


# ---------------------------------------------------------------- specfun


def _suite_specfun():
    rng = np.random.default_rng(2024)
    out = []

    worst = 0.0
    for _ in range(200):
        nu = rng.uniform(0.5, 4.0)
        z = rng.uniform(0.5, 50.0)
        lhs = specfun.bessel_j(nu - 1.0, z) + specfun.bessel_j(nu + 1.0, z)
        rhs = 2.0 * nu / z * specfun.bessel_j(nu, z)
        worst = max(worst, abs(lhs - rhs))
    out.append(_check("bessel.three_term_recurrence", worst <= 1e-8, f"worst {worst:.2e}"))

    rule = specfun.QuadratureRule.gauss_legendre(512)
    worst = 0.0
    for _ in range(100):
        nu = rng.uniform(0.5, 3.0)
        z = rng.uniform(1e-3, 50.0)
        lhs = specfun.poisson_integral(nu, z, rule)
        rhs = math.sqrt(math.pi) * specfun.gamma_fn(nu + 0.5) / (0.5 * z) ** nu \
            * specfun.bessel_j(nu, z)
        worst = max(worst, abs(lhs - rhs))
    out.append(_check("bessel.poisson_oracle_equivalence", worst <= 1e-8, f"worst {worst:.2e}"))

    xs = rng.uniform(0.05, 59.0, size=300)
    pos = all(specfun.gamma_fn(x) > 0.0 for x in xs)
    worst = max(abs(specfun.gamma_fn(x + 1.0) / specfun.gamma_fn(x) - x) for x in xs)
    out.append(_check("gamma.positive_and_recurrence", pos and worst <= 1e-10, f"worst {worst:.2e}"))

    worst = 0.0
    r128 = specfun.QuadratureRule.gauss_legendre(128)
    r256 = specfun.QuadratureRule.gauss_legendre(256)
    for nu in (0.5, 1.5, 2.5):  # smooth-integrand orders; half-integer exponents converge slowly
        for z in (1.0, 10.0, 50.0):
            delta = abs(specfun.poisson_integral(nu, z, r128) - specfun.poisson_integral(nu, z, r256))
            worst = max(worst, delta)
    out.append(_check("quadrature.doubling_converged", worst <= 1e-10, f"worst {worst:.2e}"))
    return out


# ----------------------------------------------------------------- kernel


def _suite_kernel():
    rng = np.random.default_rng(7)
    out = []

    worst = 0.0
    for nu in (0.5, 1.5):
        p = kernel.KernelParams(nu=nu, k_f=math.pi)
        r = rng.uniform(0.0, 50.0 / p.k_f, size=1000)
        worst = max(worst, float(np.max(np.abs(
            kernel.kernel_value(p, r) - kernel.kernel_closed_form(p, r)))))
    out.append(_check("closed_form_equivalence", worst <= 1e-10, f"worst {worst:.2e}"))

    rule = specfun.QuadratureRule.gauss_legendre(768)
    worst = 0.0
    for d in (1, 2, 3, 4):
        nu = d / 2.0
        k_f = kernel.fermi_wavenumber(d, 1.0)
        p = kernel.KernelParams(nu=nu, k_f=k_f)
        r = rng.uniform(1e-3, 50.0 / k_f, size=50)
        c_prev = math.pi ** ((d - 1) / 2.0) / specfun.gamma_fn((d - 1) / 2.0 + 1.0)
        c_d = math.pi ** (d / 2.0) / specfun.gamma_fn(d / 2.0 + 1.0)
        oracle = (c_prev / c_d) * specfun.poisson_integral(nu, k_f * r, rule)
        worst = max(worst, float(np.max(np.abs(kernel.kernel_value(p, r) - oracle))))
    out.append(_check("poisson_route_equivalence", worst <= 1e-8, f"worst {worst:.2e}"))

    ok = True
    for _ in range(200):
        p = kernel.KernelParams(nu=rng.uniform(0.5, 5.0), k_f=rng.uniform(0.5, 10.0))
        r = rng.uniform(0.0, 100.0 / p.k_f)
        ok &= abs(kernel.kernel_value(p, r)) <= 1.0 + 1e-12
    sea = kernel.FiniteSystem.fermi_sea(1, 5)
    for _ in range(200):
        ok &= abs(kernel.finite_kernel_value(sea, rng.uniform(-2, 2, size=1))) <= 1.0 + 1e-12
    out.append(_check("boundedness", ok))

    sym = kernel.FiniteSystem.fermi_sea(1, 5)  # symmetric sea: 0, +-2pi, +-4pi
    worst = 0.0
    for _ in range(100):
        dr = rng.uniform(-1.5, 1.5)
        kp = kernel.finite_kernel_value(sym, [dr])
        km = kernel.finite_kernel_value(sym, [-dr])
        worst = max(worst, abs(kp.imag), abs(kp - km))
    out.append(_check("symmetric_sea_real_even", worst <= 1e-12, f"worst {worst:.2e}"))

    p = kernel.KernelParams(nu=0.5, k_f=2.0)
    r = rng.uniform(0.5, 200.0, size=500)  # k_f r >= 1
    ok = bool(np.all(np.abs(kernel.kernel_value(p, r)) <= 1.0 / (p.k_f * r) + 1e-15))
    out.append(_check("sine_kernel_decay", ok))

    ok = True
    detail = ""
    for d, n in ((1, 3), (1, 5), (2, 5)):
        sea = kernel.FiniteSystem.fermi_sea(d, n)
        for _ in range(30):
            pts = rng.uniform(0.0, 1.0, size=(rng.integers(1, n + 1), d))
            mat = kernel.build_correlation_matrix(pts, sea)
            ev = mat.eigenvalues()
            det = mat.determinant()
            if ev.min() < -1e-10 or not -1e-10 <= det <= 1.0 + 1e-10:
                ok = False
                detail = f"d={d} n={n} min_ev={ev.min():.2e} det={det:.2e}"
    out.append(_check("gram_psd", ok, detail))
    return out


# ----------------------------------------------------------- correlations


def _suite_correlations():
    rng = np.random.default_rng(11)
    out = []

    sea = kernel.FiniteSystem.fermi_sea(1, 3)
    ok = True
    for _ in range(10_000):
        pts = rng.uniform(0.0, 1.0, size=rng.integers(1, 4))
        if correlations.n_body_density_finite(sea, pts) < 0.0:
            ok = False
    out.append(_check("determinant_nonnegative", ok))

    worst = 0.0
    p = kernel.KernelParams(nu=0.5, k_f=math.pi)
    for _ in range(100):
        pts = rng.uniform(0.0, 1.0, size=3)
        perm = rng.permutation(3)
        worst = max(worst,
                    abs(correlations.n_body_density_finite(sea, pts)
                        - correlations.n_body_density_finite(sea, pts[perm])),
                    abs(correlations.n_body_density_asymptotic(p, pts)
                        - correlations.n_body_density_asymptotic(p, pts[perm])))
    out.append(_check("exchange_symmetry", worst <= 1e-12, f"worst {worst:.2e}"))

    x = 1e-3  # k_F r
    rho = correlations.n_body_density_asymptotic(
        kernel.KernelParams(nu=0.5, k_f=math.pi), [[0.0], [x / math.pi]])
    rel = abs(rho - x * x / 3.0) / (x * x / 3.0)
    out.append(_check("coincidence_quadratic", rel <= 0.01, f"rel {rel:.2e}"))

    diffs = []
    for m in (2, 5, 10, 25):
        n = 2 * m + 1
        sea_n = kernel.FiniteSystem.fermi_sea(1, n)
        fin = correlations.n_body_density_finite(sea_n, [[0.0], [0.2]])
        asym = correlations.n_body_density_asymptotic(
            kernel.KernelParams(nu=0.5, k_f=kernel.fermi_wavenumber(1, n)), [[0.0], [0.2]])
        diffs.append(abs(fin - asym))
    monotone = all(a > b for a, b in zip(diffs, diffs[1:]))
    out.append(_check("finite_size_convergence", monotone,
                      "diffs " + " ".join(f"{d:.4f}" for d in diffs)))

    worst = 0.0
    for n in (1, 2, 3):
        sea_n = kernel.FiniteSystem.fermi_sea(1, n)
        for _ in range(max(1, 100 // (4 - n))):
            pts = rng.uniform(0.0, 1.0, size=(n, 1))
            brute = slater_density_permutation_sum(sea_n, pts)
            det = correlations.n_body_density_finite(sea_n, pts)
            worst = max(worst, abs(brute - det))
    out.append(_check("permutation_sum_oracle", worst <= 1e-10, f"worst {worst:.2e}"))
    return out


# -------------------------------------------------------------- ensembles


def _suite_ensembles():
    out = []
    cfg = ensembles.GueConfig(matrix_size=200, sample_count=200, seed=1)

    a = ensembles.sample_gue_spectrum(ensembles.GueConfig(50, 3, 42))
    b = ensembles.sample_gue_spectrum(ensembles.GueConfig(50, 3, 42))
    same = all(np.array_equal(x, y) for x, y in zip(a, b))
    out.append(_check("seed_determinism", same))

    spectra = ensembles.sample_gue_spectrum(cfg)
    scaled = np.sort(np.concatenate(spectra)) / math.sqrt(cfg.matrix_size)
    grid = np.linspace(-2.0, 2.0, 2001)
    semi_cdf = (grid * np.sqrt(4.0 - grid ** 2) / 2.0 + 2.0 * np.arcsin(grid / 2.0)
                + math.pi) / (2.0 * math.pi)
    emp = np.searchsorted(scaled, grid, side="right") / scaled.size
    ks = float(np.max(np.abs(emp - semi_cdf)))
    out.append(_check("semicircle_ks", ks <= 0.03, f"KS {ks:.4f}"))

    seqs = [ensembles.unfold_semicircle(s, 0.5) for s in spectra]
    est = stats.estimate_pair_correlation_pooled(seqs, w_max=2.0, bin_width=0.05)
    theory = correlations.pair_correlation_theory(0.5, est.bin_centers)
    dist = stats.curve_distance(est, theory, w_low=0.25)
    out.append(_check("sine_kernel_pair_correlation",
                      dist["l_inf"] <= 0.08 and dist["l2"] <= 0.03,
                      f"l_inf {dist['l_inf']:.4f} l2 {dist['l2']:.4f}"))

    mono = all(bool(np.all(np.diff(s.values) > 0)) for s in seqs)
    spacing = np.mean([s.mean_spacing for s in seqs])
    out.append(_check("unfold_monotone_unit_density",
                      mono and abs(spacing - 1.0) <= 0.05, f"mean spacing {spacing:.4f}"))
    return out


# ------------------------------------------------------------------- zeta


def _suite_zeta(threads: int = 1):
    out = []

    seq = zeta.find_zeros(1.0, 500.0, grid_step=0.05, threads=threads)
    ok = True
    details = []
    for t_cap in (100.0, 200.0, 500.0):
        count = int(np.count_nonzero(seq.heights <= t_cap))
        est = zeta.counting_estimate(t_cap)
        details.append(f"T={t_cap:.0f}: {count} vs {est:.2f}")
        ok &= abs(count - est) <= 2.0
    out.append(_check("counting_consistency", ok, "; ".join(details)))

    coarse = seq.heights[(seq.heights > 10.0) & (seq.heights < 500.0)]
    fine = zeta.find_zeros(10.0, 500.0, grid_step=0.025, threads=threads).heights
    stable = len(coarse) == len(fine) and float(np.max(np.abs(coarse - fine))) <= 1e-6
    out.append(_check("zero_stability_under_refinement", stable,
                      f"counts {len(coarse)}/{len(fine)}"))

    mid = zeta.ZeroSequence(seq.heights[(seq.heights >= 50.0) & (seq.heights <= 500.0)])
    spacing = zeta.unfold_by_counting(mid).mean_spacing
    out.append(_check("unfolding_density", abs(spacing - 1.0) <= 0.10,
                      f"mean spacing {spacing:.4f}"))

    rng = np.random.default_rng(3)
    worst = 0.0
    for t in rng.uniform(2.0, 500.0, size=50):
        m = zeta._em_terms(t)
        a = zeta.zeta_critical_line(t, terms=m)
        b = zeta.zeta_critical_line(t, terms=2 * m)
        worst = max(worst, abs(a - b))
    out.append(_check("euler_maclaurin_cross_check", worst <= 1e-8, f"worst {worst:.2e}"))
    return out


# ------------------------------------------------------------------ stats


def _suite_stats():
    rng = np.random.default_rng(5)
    out = []

    l2 = {}
    for npts in (10_000, 20_000):
        u = np.sort(rng.uniform(0.0, float(npts), size=npts))
        u = u[np.concatenate(([True], np.diff(u) > 0))]
        est = stats.estimate_pair_correlation(UnfoldedSequence(u), w_max=3.0, bin_width=0.05)
        flat = np.ones_like(est.bin_centers)
        l2[npts] = stats.curve_distance(est, flat, w_low=0.1)["l2"]
    ratio = l2[10_000] / l2[20_000]
    out.append(_check("estimator_consistency", 1.2 <= ratio <= 1.8, f"ratio {ratio:.2f}"))

    u = np.sort(rng.uniform(0.0, 2000.0, size=2000))
    seq = UnfoldedSequence(u)
    fine = stats.estimate_pair_correlation(seq, w_max=3.0, bin_width=0.05)
    coarse = stats.estimate_pair_correlation(seq, w_max=3.0, bin_width=0.10)
    merged = fine.pair_counts.reshape(-1, 2).sum(axis=1)
    out.append(_check("binning_invariance", bool(np.array_equal(merged, coarse.pair_counts))))

    w = np.sort(rng.uniform(0.0, 100.0, size=200))
    est = stats.estimate_pair_correlation(UnfoldedSequence(w), w_max=2.0, bin_width=0.25)
    brute = sum(1 for i in range(len(w)) for j in range(i + 1, len(w))
                if w[j] - w[i] <= 2.0 and w[i] + 2.0 <= w[-1])
    out.append(_check("window_correctness", int(est.pair_counts.sum()) == brute,
                      f"{int(est.pair_counts.sum())} vs {brute}"))
    return out


SUITES = {
    "specfun": _suite_specfun,
    "kernel": _suite_kernel,
    "correlations": _suite_correlations,
    "ensembles": _suite_ensembles,
    "zeta": _suite_zeta,
    "stats": _suite_stats,
}


def run_suites(names, threads: int = 1):
    """Run the named suites; returns (all_passed, list of result dicts)."""
    results = []
    ok = True
    for name in names:
        fn = SUITES[name]
        checks = fn(threads) if name == "zeta" else fn()
        for check_name, passed, detail in checks:
            ok &= passed
            results.append({"suite": name, "check": check_name,
                            "passed": passed, "detail": detail})
    return ok, results
