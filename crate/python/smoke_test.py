"""Smoke test for the gqdlab Python extension.

Build and install first, e.g.:
    maturin build --release -m crates/py/Cargo.toml
    pip install target/wheels/gqdlab-*.whl
"""

import json
import math

import gqdlab


def close(a, b, tol=1e-6):
    return abs(a - b) <= tol


def main():
    ghz = gqdlab.DensityMatrix.family("ghz", 3)
    assert ghz.n_qubits == 3
    assert close(ghz.trace(), 1.0, 1e-12) and close(ghz.purity(), 1.0, 1e-12)
    assert close(gqdlab.mutual_information(ghz), 3.0, 1e-9)

    r = gqdlab.gqd(ghz)
    assert r.converged and close(r.value, 1.0), r
    assert len(r.argmin) == 3

    bell = gqdlab.DensityMatrix([[0.5, 0, 0, 0.5], [0, 0, 0, 0], [0, 0, 0, 0], [0.5, 0, 0, 0.5]])
    assert close(gqdlab.loss_of_correlation(bell, [(0.0, 0.0), (0.0, 0.0)]), 1.0, 1e-12)
    assert close(bell.partial_trace([0]).entropy(), 1.0, 1e-12)

    report = gqdlab.standard_deficit(ghz)
    assert close(report.margin, 1.0) and report.holds
    assert json.loads(report.json)["audit"] == "standard_deficit"

    rho = gqdlab.DensityMatrix.family("random", 4, rank=2, seed=7)
    angles = [(0.3, 1.1), (0.9, 0.2), (1.3, 2.0), (0.1, 0.4)]
    assert gqdlab.identity_residual(rho, angles) < 1e-9
    assert gqdlab.identity_residual(rho, angles, blocks=[[0, 1], [2, 3]]) < 1e-9

    power = gqdlab.power_inequality(gqdlab.DensityMatrix.family("ghz", 4), [[0, 1], [2, 3]], 2)
    assert power.margin >= -1e-6

    werner = gqdlab.DensityMatrix.family("werner-ghz", 3, mu=1.0)
    assert close(gqdlab.residual_gqd(werner).margin, 1.0)
    assert gqdlab.mixed_w_residual_closed_form(3, 0.0) == 0.0

    records = gqdlab.ising_sweep(4, [0.5, 1.0, 2.0])
    assert [rec.param for rec in records] == [0.5, 1.0, 2.0]
    assert all(rec.converged and rec.theta_bar is not None for rec in records)

    mus = gqdlab.mu_sweep("mixed-w", 3, [0.0, 0.5])
    assert close(mus[0].gqd_total, 0.0) and mus[1].gqd_total >= mus[1].nn_sum

    ising = gqdlab.DensityMatrix.ising(3, 0.05)
    assert close(gqdlab.gqd(ising).value, 1.0, 1e-2)

    try:
        gqdlab.DensityMatrix.family("ghz", 1)
    except ValueError:
        pass
    else:
        raise AssertionError("one-qubit GHZ must be rejected")

    assert math.isfinite(r.value)
    print("gqdlab smoke test passed")


if __name__ == "__main__":
    main()
