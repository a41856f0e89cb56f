"""Smoke test for the planeaut Python bindings.

Build and install first:  pip install -e crates/py --no-build-isolation
Then run:                 python python/smoke_test.py
"""

import json

import planeaut_py as pa


def check(cond, what):
    if not cond:
        raise SystemExit(f"FAIL: {what}")
    print(f"ok   {what}")


def main():
    f = pa.Automorphism(json.dumps({"field": "Q", "components": ["z1 + z2^2", "z2"]}))
    g = pa.Automorphism('{"components": ["z2", "z1 + 3*z2^3"]}', field="Q")
    h = f.compose(g)
    # the inner map contributes the first syllable
    check(h.polydegree() == [3, 2], "composite polydegree is (3, 2)")
    check(h.compose(h.inverse()).is_identity(), "inverse composes to the identity")
    word = json.loads(h.decompose())
    check(word["polydegree"] == h.polydegree(), "decomposition agrees with polydegree")
    check(pa.Automorphism(h.to_json()) == h, "JSON round trip")

    try:
        pa.Automorphism('{"field": "Q", "components": ["z1", "z1*z2"]}')
        check(False, "non-automorphism rejected")
    except pa.PlaneautError as e:
        check(e.args[0] == "NotAnAutomorphism", "non-automorphism rejected")

    group = {"kind": "cyclic", "orders": [2], "field": "Q",
             "generators": [{"components": ["-z1 + z2^2", "z2"]}]}
    lin = json.loads(pa.linearize(json.dumps(group)))
    check(lin["verified"], "involution linearized")

    family = {"group": {"kind": "cyclic", "orders": [2]}, "field": "Q(x)",
              "generators": [{"components": ["-z1 + 2*x*z2^2", "z2"]}]}
    report = json.loads(pa.family(json.dumps(family)))
    check(report["verified"] and report["residual_poles"] == [], "family linearized over Q[x]")
    check(pa.verify(json.dumps({"family": family, "report": report})), "report re-verifies")

    req = {"psi": {"field": "Q(x)", "components": ["z1 + z2^2/x", "z2"]},
           "rho": [[["1", "0"], ["0", "-1"]]]}
    out = json.loads(pa.remove_pole(json.dumps(req), "0"))
    check([s["w"] for s in out["trace"]] == [[3, 1], [1, 0]], "pole at 0 removed in two steps")

    suite = json.loads(pa.selftest("negative"))
    check(suite["passed"], "negative suite passes")
    print("smoke test passed")


if __name__ == "__main__":
    main()
