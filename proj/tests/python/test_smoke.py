import numpy as np
import pytest

import gridforge as gf


def test_gate_basics():
    d = gf.displacement(1.0 + 0.0j, 80)
    vac = np.zeros(81, complex)
    vac[0] = 1.0
    st = d @ vac
    assert abs(np.vdot(vac, st)) ** 2 == pytest.approx(np.exp(-1.0), abs=1e-8)

    a = gf.annihilation(80)
    n = a.conj().T @ a
    disp = gf.displacement(1 + 0.5j, 80) @ vac
    assert np.real(np.vdot(disp, n @ disp)) == pytest.approx(1.25, abs=1e-6)


def test_db_convention():
    assert gf.db_to_natural(10.0) == pytest.approx(np.log(10.0) / 2.0)
    assert gf.natural_to_db(gf.db_to_natural(7.8)) == pytest.approx(7.8)


def test_protocol_and_oracle_roundtrip():
    amps, trace = gf.run_protocol(1, 0, 6.0, 200, True)
    assert trace["beta"][0] == pytest.approx(0.3133, abs=3e-3)

    pc, _ = gf.run_protocol(0, 2, 7.8, 300, False)
    orc = gf.realize_phased_comb(0, 2, gf.db_to_natural(7.8), 300)
    assert gf.fidelity(pc, orc) >= 1.0 - 1e-8


def test_oracle_leg_counts():
    assert len(gf.phased_comb_oracle_legs(0, 3)) == 9
    assert len(gf.phased_comb_oracle_legs(1, 3)) == 16


def test_channel_fidelity_trivial_oracle():
    g = 0.01
    res = gf.channel_fidelity("trivial", 1, 0.0, 30, g)
    oracle = ((1 / np.sqrt(1 + g) + np.sqrt(1 - g)) ** 2 + g**2 / (1 + g)) / 4
    assert res["f_e"] == pytest.approx(oracle, abs=1e-8)


def test_truncation_error_is_exposed():
    with pytest.raises(gf.TruncationError):
        gf.run_protocol(0, 3, 7.8, 60, False)


def test_wigner_vacuum_peak():
    vac = np.zeros(41, complex)
    vac[0] = 1.0
    w = gf.wigner(vac, [0.0], [0.0])
    assert w[0, 0] == pytest.approx(1.0 / np.pi, abs=1e-6)
