"""Channel sampling, transmission, outage, and the optimal DMT curve."""

import numpy as np
import pytest

from lrmimo.channel import (ChannelModel, apply_channel, dmt_optimal_curve,
                            outage_indicator, sample_channel, transmit)
from lrmimo.errors import DomainError, ShapeError
from lrmimo.codes import make_code, encode


class TestSampleChannel:
    def test_deterministic(self):
        model = ChannelModel(2, 2, 2, 100.0)
        H1 = sample_channel(model, (42, 7))
        H2 = sample_channel(model, (42, 7))
        assert np.array_equal(H1, H2)

    def test_distinct_seeds_differ(self):
        model = ChannelModel(2, 2, 2, 100.0)
        assert not np.allclose(sample_channel(model, (42, 7)),
                               sample_channel(model, (42, 8)))

    def test_moments(self):
        model = ChannelModel(2, 2, 2, 100.0)
        n = 100_000
        acc = np.zeros((2, 2), dtype=complex)
        acc2 = np.zeros((2, 2))
        for i in range(n):
            H = sample_channel(model, (3, i))
            acc += H
            acc2 += np.abs(H) ** 2
        mean = acc / n
        second = acc2 / n
        # per-entry mean within 3 sigma of zero; |CN(0,1)| real part var 1/2
        bound = 3 / np.sqrt(2 * n)
        assert np.all(np.abs(mean.real) < bound)
        assert np.all(np.abs(mean.imag) < bound)
        assert np.all(np.abs(second - 1.0) < 0.02)


class TestTransmit:
    def test_identity_channel_zero_noise(self):
        code = make_code("cda2x2", 4)
        model = ChannelModel(2, 2, 2, rho=2.0)  # beta = 1
        x = encode(code, [1, 2, 3, 0])
        inst = transmit(model, np.eye(2, dtype=complex), x, (1, 0),
                        noise=np.zeros(4))
        assert np.allclose(inst.y, x, atol=1e-12)

    def test_zero_codeword_gives_noise(self):
        model = ChannelModel(1, 1, 1, rho=10.0)
        inst = transmit(model, np.array([[1.0 + 0j]]), np.zeros(2), (2, 5))
        emb = np.array([inst.w[0].real, inst.w[0].imag])
        assert np.allclose(inst.y, emb)

    def test_reproducible(self):
        code = make_code("cda2x2", 2)
        model = ChannelModel(2, 2, 2, 50.0)
        H = sample_channel(model, (9, 1))
        x = encode(code, [1, 0, 1, 1])
        y1 = transmit(model, H, x, (9, 2)).y
        y2 = transmit(model, H, x, (9, 2)).y
        assert np.array_equal(y1, y2)

    def test_shape_error(self):
        model = ChannelModel(2, 2, 2, 50.0)
        with pytest.raises(ShapeError):
            transmit(model, np.eye(2, dtype=complex), np.zeros(5), (0, 0))

    def test_energy_accounting(self):
        # E||y||^2 = beta E||Hx||^2 + 2 nr T over many noise/channel draws
        code = make_code("cda2x2", 4)
        model = ChannelModel(2, 2, 2, rho=8.0)
        rng = np.random.default_rng(77)
        n = 20_000
        tot_y = 0.0
        tot_sig = 0.0
        for i in range(n):
            H = sample_channel(model, (11, i))
            x = encode(code, rng.integers(0, 4, size=4))
            sig = apply_channel(model, H, x)
            inst = transmit(model, H, x, (12, i))
            tot_y += np.sum(inst.y ** 2)
            tot_sig += np.sum(sig ** 2)
        noise_energy = tot_y / n - tot_sig / n
        assert noise_energy == pytest.approx(2 * model.nr * model.T, rel=0.02)


class TestOutage:
    def test_zero_channel(self):
        model = ChannelModel(2, 2, 2, 100.0)
        assert outage_indicator(model, np.zeros((2, 2), dtype=complex), 0.5)

    def test_identity_high_snr(self):
        model = ChannelModel(2, 2, 2, 1e9)
        assert not outage_indicator(model, np.eye(2, dtype=complex), 10.0)

    def test_monotone_in_rho(self):
        rng = np.random.default_rng(55)
        for i in range(200):
            H = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))) / np.sqrt(2)
            lo = outage_indicator(ChannelModel(2, 2, 2, 10.0), H, 2.0)
            hi = outage_indicator(ChannelModel(2, 2, 2, 1000.0), H, 2.0)
            if not lo:
                assert not hi

    def test_outage_slope_near_minus_four(self):
        # Monte Carlo oracle for the 2x2 outage exponent at fixed rate;
        # grid chosen where events remain countable
        rng = np.random.default_rng(404)
        R = 1.0
        draws = 2_000_000
        rates = []
        rhos = 10 ** (np.array([5.0, 7.5, 10.0]) / 10)
        for rho in rhos:
            beta = rho / 2
            H = (rng.normal(size=(draws, 2, 2)) +
                 1j * rng.normal(size=(draws, 2, 2))) / np.sqrt(2)
            A = np.eye(2)[None] + beta * (H @ H.conj().transpose(0, 2, 1))
            det = (A[:, 0, 0] * A[:, 1, 1] - A[:, 0, 1] * A[:, 1, 0]).real
            rates.append(np.mean(np.log2(det) < R))
        x = np.log(rhos)
        y = np.log(rates)
        slope = np.polyfit(x, y, 1)[0]
        assert -5.2 < slope < -3.0
        # matches the analytic curve value at r = 0
        assert dmt_optimal_curve(2, 2, 0.0) == 4.0


class TestDmtCurve:
    def test_corners(self):
        assert dmt_optimal_curve(2, 2, 0) == 4.0
        assert dmt_optimal_curve(2, 2, 2) == 0.0
        assert dmt_optimal_curve(2, 2, 1) == 1.0

    def test_interpolation(self):
        assert dmt_optimal_curve(2, 2, 0.5) == pytest.approx(2.5)

    def test_domain(self):
        with pytest.raises(DomainError):
            dmt_optimal_curve(2, 2, 2.5)
        with pytest.raises(DomainError):
            dmt_optimal_curve(2, 2, -0.1)

    def test_nonincreasing_convex(self):
        rs = np.linspace(0, 2, 41)
        vals = [dmt_optimal_curve(2, 2, r) for r in rs]
        diffs = np.diff(vals)
        assert np.all(diffs <= 1e-12)
        assert np.all(np.diff(diffs) >= -1e-9)  # piecewise-linear convex

    def test_endpoints_general(self):
        for nt, nr in [(1, 1), (2, 1), (3, 2), (4, 4)]:
            assert dmt_optimal_curve(nt, nr, 0) == nt * nr
            assert dmt_optimal_curve(nt, nr, min(nt, nr)) == 0.0
