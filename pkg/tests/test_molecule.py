import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chiralgate.molecule import (DipoleComponents, RotorConstants,
                                 TransitionTable, builtin_propanediol,
                                 consistency_check, j1_energies,
                                 mhz_to_rad_per_us, rabi_frequency,
                                 rwa_warnings)


def test_j1_energies_closed_forms():
    c = RotorConstants(8572.05, 3640.10, 2790.96)
    e101, e111, e110 = j1_energies(c)
    np.testing.assert_allclose(e101, 6431.06, atol=1e-9)
    np.testing.assert_allclose(e111, 11363.01, atol=1e-9)
    np.testing.assert_allclose(e110, 12212.15, atol=1e-9)


def test_spherical_limit_degenerate():
    e = j1_energies(RotorConstants(100.0, 100.0, 100.0))
    np.testing.assert_allclose(e, [200.0, 200.0, 200.0])


def test_energy_ordering():
    e101, e111, e110 = j1_energies(RotorConstants(9.0, 5.0, 2.0))
    assert e101 <= e111 <= e110


def test_rotor_constants_validation():
    with pytest.raises(ValueError):
        RotorConstants(1.0, 2.0, 3.0)  # A < B
    with pytest.raises(ValueError):
        RotorConstants(3.0, 2.0, 0.0)


def test_corrected_builtin_is_self_consistent():
    constants, _, table = builtin_propanediol("corrected")
    assert consistency_check(constants, table) == []


def test_printed_builtin_flags_a_constant():
    constants, _, table = builtin_propanediol("printed")
    flags = consistency_check(constants, table)
    # both A-dependent lines disagree by ~2.7 GHz; the a-type line is fine
    assert len(flags) == 2
    assert any("omega_00_11" in f for f in flags)
    assert any("omega_00_10" in f for f in flags)
    assert not any("omega_11_10" in f for f in flags)
    assert any("-2699" in f or "+2699" in f or "2699" in f or "2700" in f for f in flags)


def test_unknown_variant_rejected():
    with pytest.raises(ValueError):
        builtin_propanediol("imaginary")


def test_table_loop_closure_enforced():
    TransitionTable(11363.0, 12212.0, 849.0)  # closes
    with pytest.raises(ValueError):
        TransitionTable(11363.0, 12212.0, 900.0)


def test_rabi_conversion_value():
    # mu_b = 1.916 D at 2 V/cm is ~1.93 MHz, far below the 10-12 MHz range
    # sometimes quoted for the pump drive
    np.testing.assert_allclose(rabi_frequency(1.916, 2.0), 1.9293, atol=2e-3)
    assert rabi_frequency(0.0, 5.0) == 0.0


@given(mu=st.floats(0.0, 5.0), eps=st.floats(0.0, 2.0))
@settings(max_examples=50, deadline=None)
def test_rabi_linearity(mu, eps):
    np.testing.assert_allclose(rabi_frequency(2 * mu, eps),
                               2 * rabi_frequency(mu, eps), rtol=1e-12, atol=1e-15)
    np.testing.assert_allclose(rabi_frequency(mu, 2 * eps),
                               2 * rabi_frequency(mu, eps), rtol=1e-12, atol=1e-15)


def test_dipole_validation():
    with pytest.raises(ValueError):
        DipoleComponents(-0.1, 1.0, 1.0)


def test_rwa_warning_threshold():
    _, _, table = builtin_propanediol("corrected")
    assert rwa_warnings(table, {"P": 1.9}) == []
    warnings = rwa_warnings(table, {"S": 9.0})  # 9 / 849 > 1e-2
    assert len(warnings) == 1 and "S drive" in warnings[0]


def test_unit_boundary_conversion():
    np.testing.assert_allclose(mhz_to_rad_per_us(1.0), 2 * np.pi)
