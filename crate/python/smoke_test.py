"""Smoke test for the tensorgeo_py extension module.

Build and install first:  pip install --no-build-isolation ./crates/py
"""

import math

import tensorgeo_py as tg


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol * (1.0 + abs(b))


def main():
    e = tg.Expr(["a*x^2 + sin(y)"], ["x", "y"], {"a": 3.0})
    value, jac, hess = e.derivatives([1.0, 0.0])
    assert close(value[0], 3.0) and close(jac[0][0], 6.0) and close(hess[0][0][0], 6.0)

    helix = tg.Curve(["2*cos(t)", "2*sin(t)", "t"], (0.0, 10.0))
    f = helix.frenet(1.3)
    assert close(f["curvature"], 0.4) and close(f["torsion"], -0.2)
    assert close(helix.arc_length(0.0, 1.0), math.sqrt(5.0))

    pseudo = tg.Surface.revolution("sin(t)", "cos(t) + ln(tan(t/2))", (0.1, 1.4), (0.0, 6.0))
    assert close(pseudo.gauss_curvature(0.7, 1.0), -1.0, 1e-6)
    assert close(pseudo.intrinsic_curvature(0.7, 1.0), -1.0, 1e-6)
    assert pseudo.local(0.7, 1.0)["class"] == "hyperbolic"

    sphere = tg.Surface(["cos(u)*cos(v)", "cos(u)*sin(v)", "sin(u)"], (-1.5, 1.5), (-10.0, 10.0))
    path = sphere.geodesic(0.0, 0.0, 0.0, 1.0, math.pi)
    s, u, v = path[-1]
    assert close(s, math.pi, 1e-6) and abs(u) < 1e-9 and close(v, math.pi, 1e-6)

    r, U, V = tg.polar([[1.2, 0.3, 0.0], [0.1, 0.9, 0.2], [0.0, -0.1, 1.1]])
    assert close(sum(r[i][0] * r[i][0] for i in range(3)), 1.0)
    axis, angle = tg.axis_angle(tg.rotation([0.0, 0.0, 1.0], 0.5))
    assert close(angle, 0.5) and close(axis[2], 1.0)
    assert tg.cayley_hamilton_residual([[1, 2, 3], [4, 5, 6], [7, 8, 10]]) < 1e-10

    k = tg.isotropic_kelvin(1.0, 0.5)
    rk = tg.rotate_kelvin(k, tg.rotation([math.sqrt(0.5), math.sqrt(0.5), 0.0], 0.8))
    assert max(abs(k[i][j] - rk[i][j]) for i in range(6) for j in range(6)) < 1e-12

    g = tg.christoffel("polar", [2.0, 0.3])
    assert close(g[0][1][1], -2.0) and close(g[1][0][1], 0.5)
    lap = tg.diff_op("spherical", "scalar", "laplacian", ["r^2"], ["r", "ph", "th"], [1.5, 0.7, 0.3])
    assert close(lap[0], 6.0)

    s, pts = tg.reconstruct("0.4", "-0.2", (0.0, 1.0))
    assert len(s) == len(pts) == 1001

    try:
        tg.Expr(["sin(x"], ["x"])
    except ValueError as err:
        assert "byte" in str(err)
    else:
        raise AssertionError("malformed expression accepted")

    print("tensorgeo_py smoke test passed")


if __name__ == "__main__":
    main()
