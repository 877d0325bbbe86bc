"""Exponent bundle: derived values, closed-form identities on a parameter
grid, mode validation, and the admissible radial-growth windows."""

import random

import pytest

from treemax import exponents as ex
from treemax.errors import ConfigError, DomainError


def test_reference_point_exact():
    cfg = ex.derived_exponents(2, 2.0, 0.25)
    assert cfg.q == 4.0
    assert cfg.delta == -1.0
    assert abs(cfg.epsilon - 2.0 / 3.0) < 1e-15
    assert cfg.is_sobolev
    for name, lhs, rhs in cfg.identities():
        assert abs(lhs - rhs) < 1e-15, name


def test_identities_hold_on_grid():
    rng = random.Random(5150)
    count = 0
    while count < 50:
        alpha = rng.uniform(0.05, 0.6)
        p = rng.uniform(1.05, min(1.0 / alpha - 0.05, 4.0))
        if p <= 1.05:
            continue
        cfg = ex.derived_exponents(rng.choice([2, 3, 5]), p, alpha)
        for name, lhs, rhs in cfg.identities():
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs)), (name, p, alpha)
        assert cfg.q >= cfg.p
        assert cfg.delta == cfg.p + 1.0 - cfg.q
        count += 1


def test_free_mode_validation():
    cfg = ex.derived_exponents(2, 2.0, 0.25, mode="free", q=3.0)
    assert cfg.q == 3.0 and cfg.delta == 0.0
    assert not cfg.is_sobolev
    # universal identities still hold; the sobolev-only ones are not listed
    names = [n for n, _, _ in cfg.identities()]
    assert "split_exponent" in names and "sobolev_scale" not in names
    with pytest.raises(ConfigError):
        ex.derived_exponents(2, 2.0, 0.25, mode="free")  # q missing
    with pytest.raises(ConfigError):
        ex.derived_exponents(2, 2.0, 0.25, mode="free", q=1.5)  # q < p
    with pytest.raises(ConfigError):
        ex.derived_exponents(2, 2.0, 0.25, mode="free", q=5.0)  # q > sobolev target
    with pytest.raises(ConfigError):
        ex.derived_exponents(2, 2.0, 0.25, mode="maximal", q=3.0)
    with pytest.raises(ConfigError):
        ex.derived_exponents(2, 2.0, 0.25, q=3.9)  # wrong explicit q in sobolev mode
    same = ex.derived_exponents(2, 2.0, 0.25, q=4.0)
    assert same.q == 4.0


def test_parameter_range_validation():
    with pytest.raises(DomainError):
        ex.derived_exponents(1, 2.0, 0.25)
    with pytest.raises(DomainError):
        ex.derived_exponents(2, 2.0, 0.0)
    with pytest.raises(DomainError):
        ex.derived_exponents(2, 2.0, 1.0)
    with pytest.raises(DomainError):
        ex.derived_exponents(2, 1.0, 0.25)
    with pytest.raises(DomainError):
        ex.derived_exponents(2, 4.0, 0.25)  # p must stay below 1/alpha


def test_windows_at_reference_point():
    cfg = ex.derived_exponents(2, 2.0, 0.25)
    lo, hi = ex.radial_window(cfg)
    assert lo == 0.0
    assert abs(hi - 0.5) < 1e-15  # p (p - 1) / q = 2 * 1 / 4
    plo, phi = ex.per_level_window(cfg)
    assert abs(plo - 0.5) < 1e-15  # -delta p / q = 1 * 2 / 4
    assert phi == 1.0  # p - 1
    # the documented window and the measured window meet exactly at 1/2
    assert abs(hi - plo) < 1e-15


def test_per_level_window_left_edge_clamps_at_zero():
    # with delta > 0 the deepest-corner constraint is vacuous and the left
    # edge clamps to 0
    cfg = ex.derived_exponents(2, 2.0, 0.25, mode="free", q=2.5)
    assert cfg.delta > 0
    plo, phi = ex.per_level_window(cfg)
    assert plo == 0.0 and phi == 1.0


def test_series_exponent_and_boundary():
    cfg = ex.derived_exponents(2, 2.0, 0.25)
    b = ex.series_boundary(cfg)
    assert abs(b - 0.25) < 1e-15  # (1 - 2/3) * (1 - 1/4)
    assert ex.series_exponent(cfg, b) == pytest.approx(0.0, abs=1e-15)
    assert ex.series_exponent(cfg, 0.1) > 0
    assert ex.series_exponent(cfg, 0.4) < 0
    with pytest.raises(DomainError):
        ex.series_exponent(cfg, 0.0)
    with pytest.raises(DomainError):
        ex.series_exponent(cfg, 1.0)


def test_config_is_frozen_and_carries_search_knobs():
    cfg = ex.derived_exponents(2, 2.0, 0.25)
    assert cfg.exhaustive_guard == 12
    assert cfg.heuristic_starts == 8
    assert cfg.anneal_steps == 200
    with pytest.raises(Exception):
        cfg.q = 5.0
