import numpy as np
import pytest
from scipy.linalg import eigh_tridiagonal

from robinpeaks import sturm1d


def _pencil(q, d, mu, a, n, gamma, hardy=None):
    if hardy is None:
        spec = sturm1d.EffectiveOperatorSpec(q=q, d=d, mu=mu, a=a)
    else:
        spec = sturm1d.EffectiveOperatorSpec(q=q, d=d, mu=mu, a=a, hardy=hardy)
    return sturm1d.assemble_effective(spec, sturm1d.build_grid(a, n, gamma))


def test_build_grid_examples():
    g = sturm1d.build_grid(1.0, 2, 1.0)
    assert np.allclose(g.nodes, [0.0, 0.5, 1.0])
    g = sturm1d.build_grid(1.0, 2, 2.0)
    assert np.allclose(g.nodes, [0.0, 0.25, 1.0])
    g = sturm1d.build_grid(4.0, 4, 1.0)
    assert np.allclose(np.diff(g.nodes), 1.0)


def test_build_grid_rejects_bad_arguments():
    with pytest.raises(ValueError):
        sturm1d.build_grid(1.0, 1, 1.0)
    with pytest.raises(ValueError):
        sturm1d.build_grid(1.0, 4, 0.5)
    with pytest.raises(ValueError):
        sturm1d.build_grid(-1.0, 4, 1.0)


def test_assemble_minimal_pencil():
    p = _pencil(1.5, 2, 0.0, 1.0, 2, 1.0, hardy=0.0)
    assert p.diag == pytest.approx([4.0])
    assert p.mass == pytest.approx([0.5])
    assert p.off.size == 0


def test_assemble_potential_signs():
    base = _pencil(1.5, 2, 0.0, 1.0, 64, 1.0, hardy=0.0)
    positive = _pencil(1.5, 2, 0.0, 1.0, 64, 1.0, hardy=0.75)
    attract = _pencil(1.5, 2, 1.0, 1.0, 64, 1.0, hardy=0.0)
    assert np.all(positive.diag > base.diag)
    assert np.all(attract.diag < base.diag)


def test_assemble_rejects_mismatched_grid():
    spec = sturm1d.EffectiveOperatorSpec(q=1.5, d=2, mu=1.0, a=2.0)
    with pytest.raises(ValueError):
        sturm1d.assemble_effective(spec, sturm1d.build_grid(1.0, 16, 1.0))


def test_spec_validation():
    with pytest.raises(ValueError):
        sturm1d.EffectiveOperatorSpec(q=1.0, d=2, mu=1.0, a=1.0)
    with pytest.raises(ValueError):
        sturm1d.EffectiveOperatorSpec(q=1.5, d=2, mu=-1.0, a=1.0)
    with pytest.raises(ValueError):
        sturm1d.EffectiveOperatorSpec(q=1.5, d=2, mu=1.0, a=0.0)


def test_dirichlet_laplacian_discrete_eigenvalues():
    # closed-form discrete eigenvalues of the lumped-mass P1 Laplacian
    n, h = 100, 0.01
    p = _pencil(1.5, 2, 0.0, 1.0, n, 1.0, hardy=0.0)
    spec = sturm1d.eigs_tridiagonal(p, 3)
    for k in (1, 2, 3):
        exact = 4.0 * np.sin(k * np.pi * h / 2.0) ** 2 / h**2
        assert spec.eigenvalues[k - 1] == pytest.approx(exact, rel=1e-11)
    assert spec.eigenvalues[0] == pytest.approx(9.8688, abs=2e-4)
    assert sturm1d.negative_count(p, 0.0) == 0


def test_bisection_matches_lapack_on_benign_matrix():
    p = _pencil(1.5, 2, 1.0, 10.0, 400, 1.0)
    d, e = p.scaled_standard()
    ref = eigh_tridiagonal(d, e, eigvals_only=True, select="i",
                           select_range=(0, 4))
    mine = sturm1d.eigs_tridiagonal(p, 5).eigenvalues
    assert np.max(np.abs(mine - ref) / np.abs(ref)) < 1e-10


def test_eigs_sorted_and_k_validation():
    p = _pencil(1.5, 2, 1.0, 5.0, 64, 2.0)
    spec = sturm1d.eigs_tridiagonal(p, 8)
    assert np.all(np.diff(spec.eigenvalues) >= 0.0)
    with pytest.raises(ValueError):
        sturm1d.eigs_tridiagonal(p, p.dim + 1)
    with pytest.raises(ValueError):
        sturm1d.eigs_tridiagonal(p, 0)


def test_negative_count_consistent_with_eigenvalues():
    p = _pencil(1.5, 2, 1.0, 40.0, 2048, 4.0)
    spec = sturm1d.eigs_tridiagonal(p, 6)
    lams = spec.eigenvalues
    for k in (1, 3, 5):
        threshold = 0.5 * (lams[k - 1] + lams[k])
        assert sturm1d.negative_count(p, threshold) == k


def test_negative_count_grows_with_truncation():
    # q = 1.5 has 2 bound states by a = 10 and 4 by a = 160
    c10 = sturm1d.negative_count(_pencil(1.5, 2, 1.0, 10.0, 2048, 4.0), 0.0)
    c160 = sturm1d.negative_count(_pencil(1.5, 2, 1.0, 160.0, 8192, 4.0), 0.0)
    assert c10 < c160


def test_counts_near_zero_stabilize():
    # counts below a fixed negative threshold stabilize while counts below 0 grow
    delta = -0.01
    counts0, countsd = [], []
    for a, n in ((10.0, 2048), (40.0, 4096), (160.0, 8192)):
        p = _pencil(1.2, 2, 1.0, a, n, sturm1d.tip_grading(1.2, 2))
        counts0.append(sturm1d.negative_count(p, 0.0))
        countsd.append(sturm1d.negative_count(p, delta))
    assert counts0[0] < counts0[1] < counts0[2]
    assert countsd[1] == countsd[2]


def test_hardy_positivity():
    for (q, d) in ((1.2, 2), (1.5, 2), (1.5, 3)):
        for n in (100, 1000):
            p = _pencil(q, d, 0.0, 1.0, n, 2.0)
            lam1 = sturm1d.eigs_tridiagonal(p, 1).eigenvalues[0]
            assert lam1 >= -1e-10


def test_hardy_positivity_extreme_sharpness():
    # exponent edges stress the closed-form antiderivatives (m + 1 - q near 0)
    for q in (1.05, 1.9, 1.99):
        for d in (2, 3):
            p = _pencil(q, d, 0.0, 2.0, 300, 3.0)
            lam1 = sturm1d.eigs_tridiagonal(p, 1).eigenvalues[0]
            assert lam1 >= -1e-10


def test_lambda_L1_ladder():
    res = sturm1d.lambda_L1(1, 1.5, 2, tol=1e-4)
    assert res.converged
    assert res.value < 0.0
    assert res.bracket_width < 1e-4
    # stability to three significant digits across the last two levels
    assert abs(res.ladder[-1]["lambda"] - res.ladder[-2]["lambda"]) \
        < 5e-3 * abs(res.value)
    # Dirichlet truncation: lambda_1(a) nonincreasing in a along the ladder
    by_a = {}
    for entry in res.ladder:
        by_a.setdefault(entry["a"], entry["lambda"])
    a_sorted = sorted(by_a)
    for lo, hi in zip(a_sorted, a_sorted[1:]):
        assert by_a[hi] <= by_a[lo] + 1e-3 * abs(by_a[lo])


def test_lambda_L1_ordering_first_two():
    l1 = sturm1d.lambda_L1(1, 1.5, 2, tol=1e-4).value
    l2 = sturm1d.lambda_L1(2, 1.5, 2, tol=1e-4, a0=20.0).value
    assert l1 < l2 < 0.0


def test_lambda_L1_not_converged_result():
    res = sturm1d.lambda_L1(1, 1.5, 2, tol=1e-12, n0=256, max_levels=1)
    assert not res.converged
    assert len(res.ladder) == 3


def test_scaling_check():
    assert sturm1d.scaling_check(1, 1.5, 2, [1.0]) == 0.0
    spread = sturm1d.scaling_check(1, 1.5, 2, [1.0, 2.0, 4.0], a=40.0, n=2048)
    assert spread <= 1e-10
    # raw eigenvalues differ by the exact similarity factor mu^(2/(2-q)) = 16
    lam = {}
    for mu in (1.0, 2.0):
        c = mu ** (-1.0 / 0.5)
        spec = sturm1d.EffectiveOperatorSpec(q=1.5, d=2, mu=mu, a=40.0 * c)
        p = sturm1d.assemble_effective(spec, sturm1d.build_grid(40.0 * c, 1024, 4.0))
        lam[mu] = sturm1d.eigs_tridiagonal(p, 1).eigenvalues[0]
    assert lam[2.0] / lam[1.0] == pytest.approx(16.0, rel=1e-11)
    with pytest.raises(ValueError):
        sturm1d.scaling_check(1, 1.5, 2, [0.0, 1.0])


def test_squeeze_lower_bound_quick():
    lam_l1 = sturm1d.lambda_L1(1, 1.5, 2, tol=1e-6, n0=4096).value
    for mu in (4.0, 16.0):
        p = _pencil(1.5, 2, mu, 1.0, 16384, 4.0)
        lam_mu = sturm1d.eigs_tridiagonal(p, 1).eigenvalues[0]
        assert lam_mu - mu**4 * lam_l1 >= -1e-5 * mu**4 * abs(lam_l1)


def test_simplicity_of_negative_eigenvalues():
    p = _pencil(1.5, 2, 1.0, 160.0, 8192, 4.0)
    n_neg = sturm1d.negative_count(p, 0.0)
    lams = sturm1d.eigs_tridiagonal(p, n_neg).eigenvalues
    gaps = np.diff(lams)
    assert np.all(gaps > 1e-8 * abs(lams[0]))
