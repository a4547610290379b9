"""Codebooks, power normalization, and rate scheduling."""

import numpy as np
import pytest

from lrmimo.codes import (RateSchedule, encode, enumerate_codebook,
                          make_code, make_constellation, schedule_rate)
from lrmimo.errors import (CodebookTooLarge, DomainError, InvalidSymbol,
                           MinimumRate)


def _rate_args(code):
    return code.name, code.nt, code.T, code.nsym


class TestConstellation:
    def test_orders(self):
        for q in (2, 4, 8, 16, 64):
            cst = make_constellation(q)
            assert len(cst.points) == q
            assert cst.re_levels * cst.im_levels == q

    def test_square_for_even_powers(self):
        cst = make_constellation(16)
        assert cst.re_levels == cst.im_levels == 4

    def test_energy_normalized(self):
        for q in (2, 4, 16):
            cst = make_constellation(q)
            assert np.mean(np.abs(cst.points) ** 2) == pytest.approx(1.0)

    def test_non_power_rejected(self):
        with pytest.raises(DomainError):
            make_constellation(6)


class TestPowerConstraint:
    @pytest.mark.parametrize("name,q", [("cda2x2", 2), ("cda2x2", 4),
                                        ("uncoded_qam", 2), ("uncoded_qam", 16)])
    def test_average_energy_is_T(self, name, q):
        code = make_code(name, q)
        X = enumerate_codebook(code)
        avg = np.mean(np.sum(X ** 2, axis=1))
        assert avg == pytest.approx(code.T, rel=1e-6)

    def test_analytic_scale_matches_enumeration(self):
        # force the analytic path by shrinking the exact-enumeration limit
        code = make_code("cda2x2", 4)
        from lrmimo.codes import _scale_for
        analytic = _scale_for(code.G, code.Lvec, code.T, 2 ** 30)
        assert analytic == pytest.approx(code.scale, rel=1e-12)


class TestEnumerate:
    def test_cda_q2_sixteen_codewords(self):
        code = make_code("cda2x2", 2)
        X = enumerate_codebook(code)
        assert X.shape == (16, 8)

    def test_cda_q4_distinct(self):
        code = make_code("cda2x2", 4)
        X = enumerate_codebook(code)
        assert X.shape[0] == 256
        assert len(np.unique(np.round(X, 9), axis=0)) == 256

    def test_min_distance_positive(self):
        X = enumerate_codebook(make_code("cda2x2", 2))
        diff = X[:, None, :] - X[None, :, :]
        d2 = np.sum(diff ** 2, axis=-1)
        np.fill_diagonal(d2, np.inf)
        assert d2.min() > 1e-6

    def test_cap(self):
        code = make_code("cda2x2", 4)
        with pytest.raises(CodebookTooLarge):
            enumerate_codebook(code, cap=100)


class TestEncode:
    def test_zero_vector_at_center_even_grid(self):
        # all-center symbols of a square constellation give the zero vector
        code = make_code("cda2x2", 4)
        # index picking offsets (0, 0) maps to s = (-1, -1); the centered
        # grid has no zero point, so check linearity instead: opposite
        # corners sum to zero
        lo = encode(code, [0, 0, 0, 0])
        hi = encode(code, [3, 3, 3, 3])
        assert np.allclose(lo + hi, 0, atol=1e-12)

    def test_bpsk_embedding(self):
        code = make_code("uncoded_qam", 2, nt=1, T=1)
        x0 = encode(code, [0])
        x1 = encode(code, [1])
        assert np.allclose(x0, [-code.scale, 0.0])
        assert np.allclose(x1, [code.scale, 0.0])

    def test_out_of_range(self):
        code = make_code("cda2x2", 2)
        with pytest.raises(InvalidSymbol):
            encode(code, [0, 0, 0, 2])
        with pytest.raises(InvalidSymbol):
            encode(code, [0, 0, 0])

    def test_consistent_with_enumeration(self):
        code = make_code("cda2x2", 2)
        X = enumerate_codebook(code)
        lim = code.constellation.im_levels
        for i in range(code.size):
            u = code.symbol_offsets(i)
            symbols = u[0::2] * lim + u[1::2]
            assert np.allclose(encode(code, symbols), X[i], atol=1e-12)


class TestScheduleRate:
    def test_cda_q4_rate(self):
        code = make_code("cda2x2", 4)
        assert code.size == 256
        assert code.rate_bits == pytest.approx(np.log2(256) / 2)  # 4 b/cu

    def test_scaling_r1_rho256(self):
        # target 8 b/cu; largest power of 2 with 2*log2(q) <= 8 is q = 16
        code = make_code("cda2x2", 2)
        R, q = schedule_rate(RateSchedule("scaling", r=1.0), *_rate_args(code), 256.0)
        assert q == 16
        assert R == pytest.approx(8.0)

    def test_scaling_r_half_rho16(self):
        # target 2 b/cu => q = 2
        code = make_code("cda2x2", 2)
        R, q = schedule_rate(RateSchedule("scaling", r=0.5), *_rate_args(code), 16.0)
        assert q == 2
        assert R == pytest.approx(2.0)

    def test_scaling_enumeration_oracle(self):
        # directly enumerate candidate orders and pick the largest feasible
        code = make_code("cda2x2", 2)
        for r, rho in [(0.5, 16.0), (1.0, 100.0), (1.0, 10000.0), (0.7, 300.0)]:
            target = r * np.log2(rho)
            feasible = [q for q in (2, 4, 8, 16, 32, 64, 128)
                        if code.nsym / code.T * np.log2(q) <= target + 1e-12]
            R, q = schedule_rate(RateSchedule("scaling", r=r), *_rate_args(code), rho)
            assert q == max(feasible)

    def test_below_minimum(self):
        code = make_code("cda2x2", 2)
        with pytest.raises(MinimumRate):
            schedule_rate(RateSchedule("scaling", r=0.1), *_rate_args(code), 2.0)

    def test_fixed_rate(self):
        code = make_code("cda2x2", 2)
        R, q = schedule_rate(RateSchedule("fixed_rate", fixed_rate=2.0),
                             *_rate_args(code), 1000.0)
        assert (R, q) == (2.0, 2)

    def test_fixed_rate_unrealizable(self):
        code = make_code("cda2x2", 2)
        with pytest.raises(DomainError):
            schedule_rate(RateSchedule("fixed_rate", fixed_rate=2.5),
                          *_rate_args(code), 1000.0)

    def test_rate_bookkeeping_exact(self):
        for name, q in [("cda2x2", 2), ("cda2x2", 8), ("uncoded_qam", 4)]:
            code = make_code(name, q)
            assert code.rate_bits == np.log2(code.size) / code.T
