import numpy as np
import pytest

from micromaser import (DICKE_PAIR, ONE_ATOM, ConfigurationError, ModelSpec,
                        assemble, build_kernel, gain_rates, loss_rates,
                        solve_truncated, thermal_distribution)


def test_gain_vanishes_at_zero_interaction_time():
    spec = ModelSpec(DICKE_PAIR, 50.0, gtau=0.0)
    b = gain_rates(build_kernel(spec, 32), spec.N)
    for arr in (b.sub2, b.sub1, b.diag, b.sup1):
        assert np.abs(arr).max() == 0.0


def test_one_atom_gain_has_no_two_photon_band():
    spec = ModelSpec(ONE_ATOM, 50.0, gtau=1.0)
    b = gain_rates(build_kernel(spec, 32), spec.N)
    assert np.abs(b.sub2).max() == 0.0
    assert np.abs(b.sub1[1:]).min() >= 0.0


def test_gain_interior_columns_conserve():
    spec = ModelSpec(DICKE_PAIR, 30.0, gtau=1.7)
    kern = build_kernel(spec, 64)
    b = gain_rates(kern, spec.N)
    col = b.diag.copy()
    col[:-1] += b.sub1[1:]
    col[:-2] += b.sub2[2:]
    assert np.abs(col[:-2]).max() < 1e-12 * spec.N


def test_loss_vacuum_is_dark_without_thermal_photons():
    b = loss_rates(0.0, 16)
    assert b.diag[0] == 0.0 and b.sub1[1] == 0.0


def test_loss_single_photon_decay():
    gen = assemble(ModelSpec(DICKE_PAIR, 0.0, nbar_th=0.0, gtau=0.0), 16)
    p = np.zeros(17)
    p[1] = 1.0
    dp = gen.matvec(p)
    assert dp[1] == pytest.approx(-1.0, abs=1e-15)
    assert dp[0] == pytest.approx(1.0, abs=1e-15)


def test_loss_detailed_balance_ratio():
    b = loss_rates(0.1, 16)
    up01 = b.sub1[1]     # 0 -> 1
    down10 = b.sup1[0]   # 1 -> 0
    assert up01 == pytest.approx(0.1, abs=1e-15)
    assert down10 == pytest.approx(1.1, abs=1e-15)
    assert up01 / down10 == pytest.approx(1.0 / 11.0, rel=1e-14)


@pytest.mark.parametrize("variant,N,gtau,delta", [
    (DICKE_PAIR, 100.0, 2.5, 0.0),
    (ONE_ATOM, 200.0, 1.2, 0.0),
    ("two-photon-detuned", 100.0, 3.0, 150.0),
])
def test_interior_column_sums_vanish(variant, N, gtau, delta):
    spec = ModelSpec(variant, N, nbar_th=0.1, gtau=gtau, delta=delta)
    gen = assemble(spec, 128)
    s = gen.column_sums()
    assert np.abs(s[:-2]).max() < 1e-12 * max(N, 1.0)
    # the clipped columns lose probability, never create it
    assert s[-2] <= 1e-12 * N and s[-1] <= 1e-12 * N


def test_band_signs_and_widths():
    spec = ModelSpec(DICKE_PAIR, 40.0, nbar_th=0.2, gtau=1.3)
    gen = assemble(spec, 64)
    b = gen.bands
    assert b.sub2.min() >= 0.0 and b.sub1.min() >= 0.0 and b.sup1.min() >= 0.0
    assert b.diag.max() <= 0.0
    dense = gen.to_dense()
    lower = np.tril(dense, -3)
    upper = np.triu(dense, 2)
    assert np.abs(lower).max() == 0.0 and np.abs(upper).max() == 0.0
    # dense agrees with the banded matvec
    p = np.random.RandomState(5).random_sample(65)
    assert np.abs(dense @ p - gen.matvec(p)).max() < 1e-12


def test_zero_pump_steady_state_is_thermal():
    spec = ModelSpec(DICKE_PAIR, 0.0, nbar_th=0.1, gtau=2.5)
    gen = assemble(spec, 64)
    dist = solve_truncated(gen)
    ref = thermal_distribution(0.1, 64)
    assert 0.5 * np.abs(dist.p - ref.p).sum() < 1e-10


def test_zero_interaction_time_steady_state_is_thermal():
    spec = ModelSpec(DICKE_PAIR, 75.0, nbar_th=0.3, gtau=0.0)
    gen = assemble(spec, 80)
    dist = solve_truncated(gen)
    ref = thermal_distribution(0.3, 80)
    assert 0.5 * np.abs(dist.p - ref.p).sum() < 1e-10


def test_fig3a_scale_generator_assembles():
    spec = ModelSpec(DICKE_PAIR, 100.0, nbar_th=0.1, gtau=2.5)
    gen = assemble(spec, 512)
    assert gen.n_max == 512
    assert np.isfinite(gen.to_dense()).all()


def test_assemble_rejects_tiny_box():
    with pytest.raises(ConfigurationError):
        assemble(ModelSpec(DICKE_PAIR, 1.0, gtau=1.0), 3)
