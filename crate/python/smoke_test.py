"""Smoke test for the trimer extension module."""

import math

import trimer


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    p = trimer.CouplingParams(1.0, 0.5, 0.5)
    r = trimer.report(p)
    assert r.class_label == "2-3", r
    assert close(r.n_tri, 0.403, 1e-3), r

    name, degeneracy, energy, cls = trimer.ground_state(p)
    assert name == "FI^II_3/2-1/2" and degeneracy == 2 and cls == "2-3"
    assert close(energy, -1.75, 1e-12)

    levels = trimer.spectrum(trimer.CouplingParams(1.0, 0.0))
    assert len(levels) == 18
    assert levels == sorted(levels, key=lambda x: x[1])

    assert len(trimer.manifolds()) == 17

    t, found = trimer.threshold_kelvin(90.3, 0.0, 2.1667, 0.0, 0.1)
    assert found and close(t, 100.0, 10.0), t

    value, t_star, _ = trimer.max_negativity(trimer.CouplingParams(1.0, 1.5, 0.8), 3.0)
    assert close(value, 0.338, 0.01), value

    q = trimer.CouplingParams(1.0, 1.5, 0.8)
    obs = trimer.observables(q, 0.3)
    back = trimer.reconstruct(obs, 1.0 / 0.3, 0.8)
    direct = trimer.report(q, 0.3)
    assert close(back.n_tri, direct.n_tri, 1e-8)

    scan = trimer.t_scan(q, [0.0, 0.1, 0.3, 1.0])
    assert scan[0] == 0.0 and scan[2] > 0.3

    try:
        trimer.report(p, -1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative temperature accepted")

    assert math.isfinite(t_star)
    print("smoke test passed")


if __name__ == "__main__":
    main()
