import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from butterflyshift.model import ModelParams, REFERENCE, wing_pressure
from butterflyshift.series import (
    dsigma_dZ,
    riemann_zeta,
    sigma1,
    sigma2,
    sigma3,
    single_block_correction,
    tail_sum,
)

from conftest import assert_close


def brute_wing_block_series(params, beta, Z, n_terms=400_000):
    """Independent oracle for sigma3: the exact block weights, term by term.

    A_1 = e^(gamma*beta); A_n = e^(n*gamma*beta) (1+e^(delta*beta))^(n-2).
    Accumulated in log space so large n cannot overflow.
    """
    eb = params.epsilon * beta
    log_g = params.gamma * beta
    log_q = math.log(1.0 + math.exp(params.delta * beta))
    rate = log_g + log_q - Z  # per-symbol log growth of A_n e^(-nZ), n >= 2
    total = math.exp(log_g - Z - eb * math.log(2.0))
    for n in range(2, n_terms + 1):
        total += math.exp(n * rate - 2.0 * log_q - eb * math.log(n + 1.0))
    return total


class TestSigma1:
    def test_geometric_value(self):
        # L=1 and alpha*beta + Z = log 2: sum 2^-n = 1
        p = ModelParams(1.0, 0.5, 1.0, 1.0, L=1)
        beta = 0.25
        Z = math.log(2.0) - p.alpha * beta
        ev = sigma1(p, beta, Z)
        assert not ev.divergent
        assert_close(ev.value, 1.0, 1e-14)
        assert ev.tail_bound == 0.0 and ev.terms_used == 0

    def test_divergence_boundary(self):
        p = ModelParams(1.0, 0.5, 1.0, 1.0, L=3)
        beta = 0.7
        z_bad = math.log(p.L) - p.alpha * beta
        assert sigma1(p, beta, z_bad).divergent
        assert sigma1(p, beta, z_bad - 0.5).divergent
        assert not sigma1(p, beta, z_bad + 1e-9).divergent

    def test_closed_vs_summation(self):
        p = ModelParams(1.0, 0.5, 1.0, 1.0, L=3)
        beta, Z = 2.0, 0.5
        closed = sigma1(p, beta, Z, mode="closed")
        summed = sigma1(p, beta, Z, mode="sum")
        assert summed.terms_used > 0
        assert abs(closed.value - summed.value) <= max(summed.tail_bound, 1e-15)

    def test_decreasing_in_Z(self):
        p = ModelParams(1.0, 0.5, 1.0, 1.0, L=2)
        vals = [sigma1(p, 0.8, z).value for z in (0.2, 0.5, 1.0, 2.0)]
        assert all(a > b for a, b in zip(vals, vals[1:]))


class TestSigma2:
    def test_geometric_at_beta_zero(self):
        ev = sigma2(REFERENCE, 0.0, math.log(2.0))
        assert_close(ev.value, 1.0, 1e-12)

    def test_zeta_path_at_Z_zero(self):
        beta = 1.7
        ev = sigma2(REFERENCE, beta, 0.0)
        assert not ev.divergent
        assert_close(ev.value, riemann_zeta(beta) - 1.0, 1e-11)

    def test_divergence(self):
        assert sigma2(REFERENCE, 2.0, -0.1).divergent
        assert sigma2(REFERENCE, 1.0, 0.0).divergent
        assert sigma2(REFERENCE, 0.5, 0.0).divergent
        assert not sigma2(REFERENCE, 1.0 + 1e-9, 0.0).divergent

    def test_refinement_stability(self):
        a = sigma2(REFERENCE, 1.5, 0.1, tol=1e-10)
        b = sigma2(REFERENCE, 1.5, 0.1, tol=1e-14)
        assert abs(a.value - b.value) <= 1e-12

    def test_tail_certificate(self):
        # value computed at loose tolerance differs from a much finer run by
        # at most the reported tail bound
        loose = sigma2(REFERENCE, 1.2, 0.35, tol=1e-6)
        fine = sigma2(REFERENCE, 1.2, 0.35, tol=1e-15)
        assert abs(loose.value - fine.value) <= loose.tail_bound + 1e-15


class TestSigma3:
    def test_brute_force_oracle_moderate_W(self):
        beta, Z = 0.8, wing_pressure(REFERENCE, 0.8) + 0.25
        ev = sigma3(REFERENCE, beta, Z)
        brute = brute_wing_block_series(REFERENCE, beta, Z, n_terms=3000)
        assert_close(ev.value, brute, 1e-12)

    def test_brute_force_oracle_small_W(self):
        beta = 1.4
        Z = wing_pressure(REFERENCE, beta) + 5e-4
        ev = sigma3(REFERENCE, beta, Z)
        brute = brute_wing_block_series(REFERENCE, beta, Z, n_terms=400_000)
        # brute truncation at 4e5 terms with eps*beta=1.4 leaves ~O(1e-3) of
        # polynomial tail * e^{-n W}; compare where both are solid
        assert abs(ev.value - brute) <= 2e-6

    def test_zeta_identity_at_floor(self):
        # at Z = P34 the series part collapses to (zeta(eps*beta)-1) over the
        # squared normalization, plus the single-block correction
        beta = 1.6
        z0 = wing_pressure(REFERENCE, beta)
        ev = sigma3(REFERENCE, beta, z0)
        pref = (1.0 + math.exp(REFERENCE.delta * beta)) ** -2
        expect = (riemann_zeta(REFERENCE.epsilon * beta) - 1.0) * pref \
            + single_block_correction(REFERENCE, beta, z0)
        assert_close(ev.value, expect, 1e-11)

    def test_divergence(self):
        beta = 0.5
        z0 = wing_pressure(REFERENCE, beta)
        assert sigma3(REFERENCE, beta, z0 - 1e-9).divergent
        assert sigma3(REFERENCE, beta, z0).divergent       # eps*beta = 0.5 <= 1
        assert sigma3(REFERENCE, 1.0, wing_pressure(REFERENCE, 1.0)).divergent
        assert not sigma3(REFERENCE, 1.5, wing_pressure(REFERENCE, 1.5)).divergent

    def test_vanishes_at_large_Z(self):
        ev = sigma3(REFERENCE, 0.7, 60.0)
        assert 0.0 < ev.value < 1e-20

    @given(beta=st.floats(0.1, 3.0), w=st.floats(1e-4, 2.0))
    @settings(max_examples=40, deadline=None)
    def test_monotone_decreasing_in_Z(self, beta, w):
        z = wing_pressure(REFERENCE, beta) + w
        a = sigma3(REFERENCE, beta, z)
        b = sigma3(REFERENCE, beta, z + 0.05)
        assert b.value < a.value

    def test_refinement_stability(self):
        z = wing_pressure(REFERENCE, 1.1) + 0.04
        loose = sigma3(REFERENCE, 1.1, z, tol=1e-8)
        fine = sigma3(REFERENCE, 1.1, z, tol=1e-14)
        assert abs(loose.value - fine.value) <= max(loose.tail_bound, fine.tail_bound)

    def test_asymptotic_matches_direct_across_switchover(self):
        # the polylog-expansion regime and direct summation agree near W=0.02
        for beta in (0.3, 0.9, 1.5, 2.0, 2.5):
            for w in (0.019, 0.021):
                z = wing_pressure(REFERENCE, beta) + w
                ev = sigma3(REFERENCE, beta, z)
                brute = brute_wing_block_series(REFERENCE, beta, z, n_terms=40_000)
                assert_close(ev.value, brute, 5e-10, f"beta={beta} w={w}")


class TestSigma2Monotonicity:
    @given(beta=st.floats(0.0, 4.0), z=st.floats(0.01, 3.0))
    @settings(max_examples=40, deadline=None)
    def test_decreasing_in_Z(self, beta, z):
        assert sigma2(REFERENCE, beta, z + 0.1).value < sigma2(REFERENCE, beta, z).value


class TestDsigma:
    def test_s1_closed_form(self):
        p = ModelParams(1.0, 0.5, 1.0, 1.0, L=1)
        beta = 0.25
        Z = math.log(2.0) - p.alpha * beta
        ev = dsigma_dZ("S1", p, beta, Z)
        assert_close(ev.value, -2.0, 1e-12)  # -sum n 2^-n

    def test_s2_matches_finite_differences(self):
        # includes beta < 1, where the derivative series has a polynomially
        # growing prefactor and needs the ratio-envelope tail bound
        h = 1e-5
        for beta, Z in [(0.3, 0.8), (0.7, 0.9), (1.4, 0.5), (2.2, 1.3)]:
            d = dsigma_dZ("S2", REFERENCE, beta, Z)
            fd = (sigma2(REFERENCE, beta, Z + h).value
                  - sigma2(REFERENCE, beta, Z - h).value) / (2 * h)
            tol = max(1e-6, 10 * d.tail_bound)
            assert_close(d.value, fd, tol, f"beta={beta} Z={Z}")

    def test_s3_divergence_boundary(self):
        # at the pressure floor the derivative series converges iff eps*beta > 2
        p19 = ModelParams(1.0, 0.5, 1.0, 1.9, L=1)
        assert dsigma_dZ("S3", p19, 1.0, wing_pressure(p19, 1.0)).divergent
        p25 = ModelParams(1.0, 0.5, 1.0, 2.5, L=1)
        assert not dsigma_dZ("S3", p25, 1.0, wing_pressure(p25, 1.0)).divergent

    def test_s3_value_against_termwise_sum(self):
        # termwise oracle on the exact block series; the tail decays only like
        # N^(-1/2) at eps*beta = 2.5, so it is bracketed by integrals
        p25 = ModelParams(1.0, 0.5, 1.0, 2.5, L=1)
        beta = 1.0
        z0 = wing_pressure(p25, beta)
        ev = dsigma_dZ("S3", p25, beta, z0)
        log_g = p25.gamma * beta
        log_q = math.log(1.0 + math.exp(p25.delta * beta))
        rate = log_g + log_q - z0
        N = 2_000_000
        total = -math.exp(log_g - z0) * 2.0 ** -2.5
        for n in range(2, N + 1):
            total += -n * (n + 1.0) ** (-2.5) * math.exp(n * rate - 2.0 * log_q)
        # beyond N the terms equal -pref * n (n+1)^(-2.5); integral bracket
        pref = (1.0 + math.exp(p25.delta * beta)) ** -2
        hi_tail = pref * 2.0 * N ** -0.5          # int_N x^(-1.5) dx upper
        lo_tail = pref * 2.0 * (N + 2) ** -0.5 * 0.9
        assert total - hi_tail - 1e-9 <= ev.value <= total - lo_tail + 1e-9

    def test_s3_matches_finite_differences(self):
        h = 1e-6
        beta = 1.1
        z = wing_pressure(REFERENCE, beta) + 0.4
        d = dsigma_dZ("S3", REFERENCE, beta, z)
        fd = (sigma3(REFERENCE, beta, z + h).value
              - sigma3(REFERENCE, beta, z - h).value) / (2 * h)
        assert_close(d.value, fd, 1e-5)

    def test_bad_which(self):
        with pytest.raises(ValueError):
            dsigma_dZ("S4", REFERENCE, 1.0, 1.0)


class TestZeta:
    def test_basel(self):
        assert_close(riemann_zeta(2.0), math.pi ** 2 / 6.0, 1e-12)

    def test_large_s(self):
        assert_close(riemann_zeta(60.0), 1.0, 1e-15)

    def test_domain(self):
        with pytest.raises(ValueError):
            riemann_zeta(1.0)
        with pytest.raises(ValueError):
            riemann_zeta(0.5)

    def test_brute_force_at_low_s(self):
        # direct summation of 1e8 terms plus integral-bracket midpoint
        s = 1.2
        N = 100_000_000
        total = 0.0
        for start in range(1, N + 1, 10_000_000):
            n = np.arange(start, min(start + 10_000_000, N + 1), dtype=float)
            total += float((n ** -s).sum())
        upper = N ** (1 - s) / (s - 1)          # integral from N
        lower = (N + 1) ** (1 - s) / (s - 1)    # integral from N+1
        brute = total + 0.5 * (upper + lower)
        assert_close(riemann_zeta(s), brute, 1e-10)

    def test_against_tail_sum_consistency(self):
        # the kernel approaches zeta(s) - 1 as W -> 0 at the known rate
        # Gamma(1-s) W^(s-1) (for non-integer s; faster log rate at s = 2)
        w = 1e-9
        for s in (1.3, 3.7):
            a = tail_sum(s, 0.0).value
            b = tail_sum(s, w).value
            lead = abs(math.gamma(1.0 - s)) * w ** (s - 1.0)
            assert abs(a - b) <= 3.0 * lead + 1e-8
        assert abs(tail_sum(2.0, 0.0).value - tail_sum(2.0, w).value) \
            <= 3.0 * w * abs(math.log(w)) + 1e-8
