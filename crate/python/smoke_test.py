"""Smoke test for the polycomplex Python extension.

Build first with `cargo build -p polycomplex-py` (add `--release` for an
optimized build), then run `python3 python/smoke_test.py`.
"""

import importlib
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_extension():
    candidates = sorted(
        ROOT.glob("target/*/libpolycomplex_py.so"),
        key=lambda p: p.stat().st_mtime,
        reverse=True,
    )
    if not candidates:
        sys.exit("extension not built; run `cargo build -p polycomplex-py`")
    staging = Path(tempfile.mkdtemp())
    shutil.copy(candidates[0], staging / "polycomplex.so")
    sys.path.insert(0, str(staging))
    return importlib.import_module("polycomplex")


def main():
    pc = load_extension()

    r = pc.Isometry("(-x,-y,-z)+(1,0,1)")
    assert r.is_involution()
    assert r.then(r.inverse()) == pc.Isometry("(x,y,z)")
    assert r.apply(["1/2", "0", "1/2"]) == ["1/2", "0", "1/2"]

    catalog = pc.Catalog()
    assert len(catalog) == 25
    gs = catalog.resolve("K_2_2")
    assert gs.mirror_vector() == (2, 2)

    region = pc.build(gs, -2, 2)
    assert len(region["vertices"]) == 63
    assert all(len(f) == 3 for f in region["finite_faces"])
    off = pc.to_off(gs, -2, 2)
    assert off.startswith("OFF\n63 ")

    report = catalog.verify("K_0_1", -2, 2)
    assert report["passed"], report
    names = {c["name"] for c in report["checks"]}
    assert "claim:triangular_oracle" in names

    try:
        catalog.resolve("nosuch")
    except ValueError as e:
        assert "nosuch" in str(e)
    else:
        raise AssertionError("unknown entry accepted")

    print(f"python smoke test passed: {len(catalog.names())} entries")


if __name__ == "__main__":
    main()
