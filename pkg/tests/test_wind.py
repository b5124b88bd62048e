"""The wind demonstration model: closed forms and published statistics."""

import math

import numpy as np
import pytest

from srm3.errors import InfeasibleBispectrumError, UnsupportedConfigurationError
from srm3.estimators import build_terms
from srm3.pure import compute_pure_multivariate
from srm3.simulate import Method
from srm3.spectra import validate_bispectrum, validate_spectrum
from srm3.wind import (
    TABLE_SECOND_ORDER,
    TABLE_THIRD_ORDER,
    build_davenport_coherence,
    build_example_targets,
    build_kaimal_psd,
    example_coherence,
    example_grid,
    example_psd,
)
from srm3.workbench import zero_lag_third_target


def test_kaimal_value_at_zero_frequency():
    z, u_star, U = 35.0, 1.76, 45.0
    expected = 0.5 * (200.0 / (2 * math.pi)) * u_star**2 * z / U
    assert build_kaimal_psd(z, u_star, U, 0.0) == pytest.approx(expected)


def test_kaimal_decays_to_zero():
    assert build_kaimal_psd(35.0, 1.76, 45.0, 1e9) < 1e-12


def test_kaimal_strictly_decreasing_on_fine_grid():
    w = np.linspace(0.0, 4.0, 1000)
    vals = build_kaimal_psd(40.0, 1.5, 30.0, w)
    assert np.all(np.diff(vals) < 0)
    assert np.all(vals > 0)


def test_kaimal_parameter_validation():
    for bad in [(-1, 1, 1), (1, 0, 1), (1, 1, -2)]:
        with pytest.raises(Exception):
            build_kaimal_psd(*bad, omega=1.0)
    with pytest.raises(Exception):
        build_kaimal_psd(35.0, 1.76, 45.0, -0.5)


def test_kaimal_against_numeric_fit():
    """The parametric form matches the numeric model exactly at w = 0; the
    frequency decay differs (exponent 5/2 vs 5/3) and the gap is reported."""
    # parameters solving 0.5*(200/2pi) u*^2 z/U = 38.3 and 50 z/(2pi U) = 6.19
    z = 35.0
    U = 50.0 * z / (2 * math.pi * 6.19)
    u_star2 = 38.3 / (0.5 * (200.0 / (2 * math.pi)) * z / U)
    w = np.linspace(0.0, 2.0, 101)
    parametric = build_kaimal_psd(z, math.sqrt(u_star2), U, w)
    numeric = example_psd(0, w)
    assert parametric[0] == pytest.approx(numeric[0], rel=1e-12)
    rel = np.abs(parametric - numeric) / numeric
    print(f"parametric-vs-numeric spectrum: max relative gap {rel.max():.3f}")
    assert rel.max() > 0.1  # the two closed forms genuinely differ off w = 0


def test_davenport_coherence_in_unit_interval():
    w = np.linspace(0.0, 5.0, 200)
    coh = build_davenport_coherence(35.0, 140.0, 40.0, 50.0, w)
    assert np.all(coh > 0) and np.all(coh <= 1.0)
    assert coh[0] == 1.0


def test_numeric_model_reference_values():
    assert example_psd(0, 0.0) == pytest.approx(38.3)
    assert example_psd(1, 0.0) == pytest.approx(43.3)
    assert example_psd(2, 0.0) == pytest.approx(135.0)
    # two-point coherence at 1 rad/s
    assert example_coherence(0, 1, 1.0) == pytest.approx(math.exp(-0.1757))
    assert example_coherence(0, 1, 1.0) == pytest.approx(0.83887, abs=5e-6)
    # cross-spectrum value at w -> 0: sqrt(38.3 * 43.3)
    assert math.sqrt(example_psd(0, 0.0) * example_psd(1, 0.0)) == pytest.approx(
        40.72, abs=5e-3
    )


def test_coherences_and_bicoherence_factors_in_unit_interval():
    w = np.linspace(0.0, 4.0, 500)
    for j in range(3):
        for k in range(j + 1, 3):
            coh = example_coherence(j, k, w)
            assert np.all(coh > 0) and np.all(coh <= 1.0)
    from srm3.wind import CROSS_BISPECTRUM_RECIPE

    s = np.linspace(0.0, 8.0, 500)
    for _, decay in CROSS_BISPECTRUM_RECIPE.values():
        factor = np.exp(-decay * s)
        assert np.all(factor > 0) and np.all(factor <= 1.0)


def test_builder_requires_three_variates():
    from srm3.grids import FrequencyGrid

    with pytest.raises(UnsupportedConfigurationError):
        build_example_targets(FrequencyGrid(2, 10, 0.2))


def test_builder_output_validates():
    grid = example_grid(N=24)
    S, B = build_example_targets(grid)
    assert validate_spectrum(S).ok
    assert validate_bispectrum(B).ok


def test_zero_cross_bicoherence_zeroes_mixed_entries():
    grid = example_grid(N=10)
    _, B = build_example_targets(grid, cross_scale=0.0)
    for a in range(3):
        for l in range(3):
            for n in range(3):
                block = B.values[:, :, a, l, n]
                if a == l == n:
                    assert np.all(block.real > 0)
                else:
                    assert not np.any(block)


def test_published_second_order_targets_reproduced():
    grid = example_grid()
    S, _ = build_example_targets(grid)
    dw = grid.delta_omega
    for (a, b), published in TABLE_SECOND_ORDER.items():
        mine = 2.0 * np.sum(S.values[:, a, b].real) * dw
        assert mine == pytest.approx(published, rel=1.5e-3), (a, b)


def test_published_third_order_targets_reproduced():
    grid = example_grid()
    _, B = build_example_targets(grid)
    for (a, b, c), published in TABLE_THIRD_ORDER.items():
        mine = zero_lag_third_target(B, a, b, c)
        assert mine == pytest.approx(published, rel=5e-3), (a, b, c)


def test_published_bispectrum_scale_is_unrealizable():
    """The full-scale bispectral target demands more interaction energy at
    low frequency than the prescribed spectrum holds; synthesis must refuse
    it rather than silently alter the second-order target."""
    grid = example_grid()
    S, B = build_example_targets(grid)
    with pytest.raises(InfeasibleBispectrumError) as excinfo:
        compute_pure_multivariate(S, B)
    assert excinfo.value.bin_index == 2


def test_scaled_wind_targets_are_feasible_and_consistent():
    from srm3.spectra import CrossBispectrum

    grid = example_grid()
    S, B = build_example_targets(grid)
    small = CrossBispectrum(grid, B.values * 0.04)
    terms = build_terms(S, small, Method.THIRD_ORDER_MV)
    dw = grid.delta_omega
    # synthesized second moments meet the prescribed spectrum exactly
    for a in range(3):
        prescribed = 2.0 * np.sum(S.values[:, a, a].real) * dw
        assert terms.target_second(a, a, 0.0) == pytest.approx(prescribed, rel=1e-12)
    # exact third moments track the plain bispectrum sum; the small gap is
    # the equal-bin channel-pair coherence absent from the plain sum
    for (a, b, c) in ((0, 0, 0), (0, 1, 2)):
        assert terms.target_third(a, b, c, 0.0, 0.0) == pytest.approx(
            0.04 * zero_lag_third_target(B, a, b, c), rel=0.05
        )
