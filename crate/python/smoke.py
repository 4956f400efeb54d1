"""Smoke test for the norden extension module.

Build with `maturin develop -m crates/python/Cargo.toml`, or copy
target/debug/libnorden.so to norden.so somewhere on PYTHONPATH.
"""

import json
from pathlib import Path

import norden

flat = norden.Manifold.flat_k(2)
assert flat.dim == 8
assert flat.classify(count=8)["verdict"] == "K"

w = norden.Manifold.conformal_w(2, "x1 + sin(x2)")
c = w.classify(count=8)
assert c["verdict"] == "W", c["verdict"]
lee = w.lee_forms([0.1] * 8)
assert max(abs(t) for t in lee["theta"][0]) > 1e-3

imm = norden.Immersion.coordinate(w, 1)
assert imm.source_dim == 4
assert imm.holomorphy_residual([0.2, -0.1, 0.3, 0.0]) < 1e-12
t31 = imm.theorem31(count=8)
assert all(v < 1e-7 for k, v in t31.items()), t31
assert imm.umbilicity(count=8)["verdict"] == "TotallyUmbilical"

prod, left, right = norden.product(norden.Manifold.flat_k(1), norden.Manifold.flat_k(1))
assert prod.dim == 8 and right.source_dim == 4

try:
    norden.Manifold.conformal_w(1, "x9")
except norden.NordenError:
    pass
else:
    raise AssertionError("expected NordenError")

text = (Path(__file__).resolve().parent.parent / "scenarios" / "conformal_w.toml").read_text()
report = norden.run_scenario(text, points=8)
assert report["summary"]["exit_code"] == 0, json.dumps(report["summary"])
assert "classify" in norden.checks()
print("smoke: ok")
