"""Smoke test for the pybiphoton extension module.

Build first:
    cargo build --release -p biphoton-python --features extension-module
    cp target/release/libpybiphoton.so python/pybiphoton.so
"""

import math
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import pybiphoton as bp


def main():
    bbo = bp.Crystal("BBO", length_um=3000.0)
    star = bp.find_symmetric_pump_wavelength(bbo)
    assert abs(star * 1000 - 757) < 10, star

    pump = bp.Pump.from_bandwidth_nm(0.4, 2.0)
    disp = bp.dispersion_params(bbo, pump)
    assert disp.dl > 0 and abs(disp.dl - disp.d_big * 3000.0) < 1e-9

    mid = 0.5 * disp.dl
    assert abs(abs(bp.pi_wavefunction(disp.ridge_slope() * mid, mid, disp, pump)) - 1.0) < 1e-12
    assert bp.pi_wavefunction(0.0, -disp.dl, disp, pump) == 0

    q = math.pi / 4
    par = bp.interference_scan([0.0, 100.0], disp, pump, q, q, nodes=256)
    cross = bp.interference_scan([0.0, 100.0], disp, pump, q, -q, nodes=256)
    assert abs(par["rates"][0] - 1.0) < 1e-3 and cross["rates"][0] < 1e-3
    assert all(abs(a + b - 1.0) < 1e-6 for a, b in zip(par["rates"], cross["rates"]))
    assert bp.werner_epsilon(disp, pump, 0.0, nodes=256) == 1.0

    diag = bp.spectral_diagnostics(bp.Crystal("BBO", 2000.0), pump, nodes=128)
    assert diag["pearson_rho"] < -0.5 and diag["classification"] == "anticorrelated"
    assert diag["schmidt_number"] >= 1.0

    psi = bp.time_domain_wavefunction(bp.Crystal("BBO", 2000.0), bp.Pump.from_duration_fs(0.4, 100.0), nodes=256)
    assert len(psi["values"]) == 2 * len(psi["t_minus"]) == len(psi["t_plus"])

    try:
        bp.Pump.from_bandwidth_nm(-0.4, 2.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative wavelength accepted")

    ids = [row[0] for row in bp.list_scenarios()]
    assert len(ids) == 9 and "fig6" in ids
    with tempfile.TemporaryDirectory() as tmp:
        report = bp.run_scenario("fig6", tmp)
        assert report["passed"], report
        assert (Path(tmp) / "fig6" / "grid.csv").exists()

    print("pybiphoton smoke test passed")


if __name__ == "__main__":
    main()
