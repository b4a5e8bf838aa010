"""Smoke test for the compiled extension: `python python/smoke_test.py`."""

import math

import magnus_tls as mt


def close(a, b, tol):
    assert abs(a - b) < tol, (a, b)


def main():
    pulse = mt.Pulse("gaussian", 1.0, 6.0, 1.0).normalize_area(math.pi / 2)
    close(pulse.area(), math.pi / 2, 1e-10)
    assert pulse.support == (0.0, 12.0)

    # resonant drive: every order matches the numerical reference
    _, numeric = mt.bloch_trajectory(pulse, 0.0)
    for order in (1, 2, 3):
        _, analytic = mt.magnus_trajectory(pulse, 0.0, order=order)
        err = max(math.dist(a, b) for a, b in zip(analytic, numeric))
        assert err < 1e-6, (order, err)
    close(numeric[-1][2], 0.0, 1e-6)

    _, vn = mt.von_neumann_trajectory(pulse, 0.2)
    _, bl = mt.bloch_trajectory(pulse, 0.2)
    assert max(math.dist(a, b) for a, b in zip(vn, bl)) < 1e-7

    coeffs = mt.coefficients(pulse, 0.1, nodes=201)
    assert len(coeffs["t"]) == 201 and set(coeffs) >= {"eta", "zeta", "lambda"}

    r = mt.expm_skew(0.3, -0.4, 1.2)
    for i in range(3):
        for j in range(3):
            dot = sum(r[k][i] * r[k][j] for k in range(3))
            close(dot, 1.0 if i == j else 0.0, 1e-12)

    s = mt.BlochVector.from_density(0.5, 0.5, 0.5 + 0j)
    close(s.s1, 1.0, 1e-12)
    rho00, rho11, rho01 = s.to_density()
    close(rho00 + rho11, 1.0, 1e-12)

    rows = mt.run_comparison(detunings=[0.0, 0.1], scale="peak", nodes=401)
    assert len(rows) == 6
    near = {r["order"]: r["max_err"] for r in rows if r["delta"] > 0}
    assert near[3] < near[1], near

    try:
        mt.Pulse("triangle", 1.0, 0.0, 1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("unknown shape accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
