"""Zero-forcing precoder construction and normalization."""
import numpy as np
import pytest

from onebitdl.channel import ChannelRealization, draw_channel, freq_response_many
from onebitdl.config import SystemConfig, centered_band, full_band
from onebitdl.errors import SingularChannelError
from onebitdl.numerics import RngStream
from onebitdl.precoding import flat_covariance, zf_precode


def _cfg(**kw):
    base = dict(num_antennas=16, num_ues=4, fft_size=64, cp_len=16, num_taps=3,
                used_subcarriers=centered_band(64, 40))
    base.update(kw)
    return SystemConfig(**base)


def test_zero_forcing_removes_multiuser_coupling():
    # H[k] P[k] must be gamma * I on every used subcarrier: the off-diagonal
    # entries vanish and the diagonal is one common constant across bins.
    cfg = _cfg()
    ch = draw_channel(cfg, RngStream(1, ()))
    ps = zf_precode(ch, cfg)
    hs = freq_response_many(ch, ps.subcarriers, cfg.fft_size)
    prod = hs @ ps.matrices                     # (K, U, U)
    gamma = prod[0, 0, 0]
    want = np.broadcast_to(gamma * np.eye(cfg.num_ues), prod.shape)
    np.testing.assert_allclose(prod, want, atol=1e-9 * abs(gamma))
    assert gamma.real > 0 or abs(gamma.imag) > 0  # nonzero


def test_power_normalization_is_exact():
    cfg = _cfg()
    ch = draw_channel(cfg, RngStream(2, ()))
    ps = zf_precode(ch, cfg)
    total = np.sum(np.abs(ps.matrices) ** 2) / cfg.fft_size
    assert abs(total - 1.0) < 1e-12, f"transmit power {total}"


def test_matrix_for_lookup():
    cfg = _cfg()
    ch = draw_channel(cfg, RngStream(3, ()))
    ps = zf_precode(ch, cfg)
    k = int(ps.subcarriers[5])
    np.testing.assert_array_equal(ps.matrix_for(k), ps.matrices[5])
    unused = 0
    assert unused not in set(int(x) for x in ps.subcarriers)
    with pytest.raises(KeyError):
        ps.matrix_for(unused)


def test_flat_channel_gives_flat_precoder():
    cfg = _cfg(num_taps=1, used_subcarriers=full_band(64))
    ch = draw_channel(cfg, RngStream(4, ()))
    ps = zf_precode(ch, cfg)
    assert ps.is_flat
    c_x = flat_covariance(ps)
    assert abs(np.trace(c_x).real - 1.0) < 1e-12
    np.testing.assert_allclose(c_x, c_x.conj().T, atol=1e-12)


def test_selective_channel_not_flat():
    cfg = _cfg()
    ch = draw_channel(cfg, RngStream(5, ()))
    ps = zf_precode(ch, cfg)
    assert not ps.is_flat
    with pytest.raises(ValueError):
        flat_covariance(ps)


def test_singular_channel_names_subcarrier():
    # Two UEs sharing identical taps make H H^H rank-deficient on every bin.
    cfg = _cfg(num_ues=2, num_taps=1, used_subcarriers=full_band(64))
    ch = draw_channel(cfg, RngStream(6, ()))
    taps = ch.taps.copy()
    taps[:, 1, :] = taps[:, 0, :]
    with pytest.raises(SingularChannelError) as err:
        zf_precode(ChannelRealization(taps), cfg)
    assert "rank-deficient" in str(err.value)
    assert err.value.subcarrier in set(int(k) for k in cfg.used_subcarriers)


def test_effective_per_ue_power_splits_evenly():
    # (1/N) sum_k ||p_u[k]||^2 averages to 1/U per UE by symmetry.
    cfg = _cfg()
    powers = np.zeros(cfg.num_ues)
    for s in range(8):
        ch = draw_channel(cfg, RngStream(s, ("p",)))
        ps = zf_precode(ch, cfg)
        powers += np.sum(np.abs(ps.matrices) ** 2, axis=(0, 1)) / cfg.fft_size
    powers /= 8
    np.testing.assert_allclose(powers, 1 / cfg.num_ues, rtol=0.35)
