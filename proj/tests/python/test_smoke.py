import math

import pytest
from scipy import special

import bppnet


def test_hypergeometric_against_scipy():
    for a, b, c, z in [(1, 0.5, 1.5, -4.0), (2, 2.5, 3.5, -0.3), (3, 3.8, 4.8, -12.0), (1, 0.4, 1.4, -1e4)]:
        assert bppnet.gauss_2f1(a, b, c, z) == pytest.approx(special.hyp2f1(a, b, c, z), rel=1e-11)


def test_kernel_closed_form():
    assert bppnet.c_kernel(4.0, 1.0, 1.0) == pytest.approx(1 - math.pi / 4, rel=1e-14)
    assert bppnet.d_kernel(3.0, 0.5, 0.8, 1) == pytest.approx(bppnet.c_kernel(3.0, 0.5, 0.8), rel=1e-12)


def test_distance_laws():
    assert bppnet.central_pdf(0.5) == pytest.approx(1.0)
    assert bppnet.cond_cdf_w(0.5, 0.3) == pytest.approx(0.25)
    assert bppnet.cond_pdf_w(0.4, 0.3) == pytest.approx(0.8)
    assert bppnet.serving_pdf_kclosest(0.5, 1, 5) == pytest.approx(1.58203125)
    with pytest.raises(bppnet.DomainError):
        bppnet.cond_pdf_w(1.5, 0.3)


def test_split_weights():
    w = bppnet.split_weights(2, 5, 5)
    assert w == pytest.approx([3 / 7, 4 / 7])
    assert bppnet.split_weights(3, 5, 5, "hypergeometric") == pytest.approx([0, 0, 1], abs=1e-15)


def test_coverage_and_errors():
    p, err = bppnet.coverage(policy="kclosest", k=1, n_tx=5, n_active=5, beta=1.0)
    assert 0 < p < 1
    assert err >= 0
    assert bppnet.coverage(n_active=1, beta=100.0)[0] == 1.0
    with pytest.raises(bppnet.ValidationError):
        bppnet.coverage(n_tx=5, n_active=6)
    with pytest.raises(ValueError):
        bppnet.coverage(policy="nearest")


def test_coverage_against_simulation():
    p, _ = bppnet.coverage(receiver="at", nu0=0.5)
    mean, hw, trials = bppnet.simulate_coverage(200000, 5, receiver="at", nu0=0.5)
    assert trials == 200000
    assert abs(mean - p) < 3 * hw / 1.96
    assert bppnet.simulate_coverage(1000, 5, lanes=4, receiver="at", nu0=0.5) == bppnet.simulate_coverage(
        1000, 5, receiver="at", nu0=0.5
    )


def test_selection_combining():
    single = bppnet.sc_coverage(1, receiver="at", nu0=0.4, beta=10**-0.5)
    corr = bppnet.sc_coverage(2, receiver="at", nu0=0.4, beta=10**-0.5)
    ind = bppnet.sc_coverage(2, False, receiver="at", nu0=0.4, beta=10**-0.5)
    assert single < corr <= ind
    assert ind == pytest.approx(1 - (1 - single) ** 2, rel=1e-12)


def test_rate_and_caching():
    assert bppnet.nse(n_active=1, beta=3.0) == 2.0
    n, best, curve = bppnet.optimal_active_count(n_tx=2, beta=1.0)
    assert n == 1 and best == 1.0 and len(curve) == 2
    assert bppnet.zipf_pmf(1, 2, 1.2) == pytest.approx(1 / (1 + 2**-1.2))
    sol = bppnet.optimize_caching(library_size=3, cache_size=3, gamma=1.0, n_tx=4, n_active=2)
    assert sol["b"] == [1.0, 1.0, 1.0]
    assert sol["throughput"] == pytest.approx(2 * sol["hit"])
    assert sol["hit"] == pytest.approx(sol["coverage_by_k"][0])


def test_cli_entry():
    code, out, err = bppnet.run_cli(["simulate", "--na", "1", "--trials", "1000", "--seed", "7"])
    assert code == 0 and out == "1.000000 0.000000 1000 7\n" and err == ""
    code, out, err = bppnet.run_cli(["coverage", "--na", "6", "--nt", "5"])
    assert code == 2 and out == "" and "error" in err
