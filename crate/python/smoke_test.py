"""Smoke test for the conecollar_py extension module.

Run after `pip install --no-build-isolation -e crates/python`:

    python3 python/smoke_test.py
"""

import json
import math

import conecollar_py as cc

SAMPLE = {
    "genus": 0,
    "cone_angles": [1.0, 1.5, 2.0, 2.5],
    "curves": [{"id": "a", "length": 1.2}],
    "pants": [
        {"boundaries": ["cone:0", "cone:1", "a"]},
        {"boundaries": ["a", "cone:2", "cone:3"]},
    ],
}


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    # widths against their closed forms
    assert close(cc.geodesic_collar_width(2.0, math.pi / 4), math.asinh(math.cos(math.pi / 4) / math.sinh(1.0)))
    assert close(cc.cone_collar_width(0.5), math.asinh(1 / math.tan(0.5)))
    assert close(cc.classical_collar_width(2.0), math.asinh(1 / math.sinh(1.0)))
    assert close(cc.torus_sharp_width(0.8), math.asinh(1 / math.tan(0.4)))
    assert cc.bers_bound(0, 4) == 8 * math.pi
    assert cc.partition_size(2, 3) == (6, 5)

    t = cc.Trirectangle(1.0, math.pi / 3)
    assert max(abs(r) for r in t.residuals()) < 1e-12

    v = cc.VPiece(math.pi / 4, 1.0, 2.0)
    angles, _, _ = v.split()
    assert close(sum(angles), math.pi / 4)
    assert close(v.area(), 2 * math.pi - math.pi / 2)
    hat = cc.JokersHat(0.5, 0.6, 1.0)
    assert hat.cone_to_cone_distance() > cc.cone_collar_width(0.5) + cc.cone_collar_width(0.6)
    assert set(hat.geometry()) >= {"height", "cone_to_cone"}

    s = cc.Surface.from_json(json.dumps(SAMPLE))
    assert s.signature == (0, 4)
    assert close(s.phi_max, 1.25)
    widths = s.widths()
    assert widths["geodesics"][0]["id"] == "a"
    cert = s.certify()
    assert cert["passed"] and len(cert["certificate"]["records"]) == 6
    assert cc.Surface.from_json(s.to_json()).to_json() == s.to_json()

    for seed in range(20):
        r = cc.Surface.random(2, 3, seed)
        assert r.validate()["entries"] and r.certify()["passed"]
        assert r.collar_area() < r.area()

    ledger = cc.ledger(2, 3, seed=5)
    assert ledger == cc.ledger(2, 3, json.dumps([st["event"] for st in ledger["steps"]]))
    assert all(g["bound"] <= g["allowance"] for g in ledger["geodesics"])

    report = cc.verify(seed=1, count=50)
    assert all(c["failures"] == 0 for c in report["checks"])

    for bad in (lambda: cc.cone_collar_width(2.0), lambda: cc.bers_bound(0, 3),
                lambda: cc.Surface.from_json("{")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("conecollar_py smoke test passed")


if __name__ == "__main__":
    main()
