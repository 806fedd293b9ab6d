"""Generate data/gasket.json: a 50-hole cylinder-head-gasket-style layout.

The layout is a stand-in (no published coordinates exist): a circular outer
plate with four bore holes on the x axis plus rings of coolant, oil and
oil-return passages.  Hole placement is deterministic; the script validates
pairwise clearances and the two starting points used in experiments.
"""

import json
import math
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "wosq", "data",
                   "gasket.json")

TEMPS = {"outer": 25.0, "bore": 160.0, "coolant": 45.0, "oil": 90.0,
         "oil_return": 70.0}


def main():
    comps = [{"kind": "circle", "params": {"center": [0.0, 0.0], "radius": 1.4},
              "boundary_value": {"const": TEMPS["outer"]}, "label": "outer"}]
    holes = []

    for x in (-0.723, -0.241, 0.241, 0.723):
        holes.append(("bore", x, 0.0, 0.155))

    # coolant ring just inside the outer edge
    for i in range(18):
        a = 2 * math.pi * (i + 0.5) / 18
        holes.append(("coolant", 1.18 * math.cos(a), 1.18 * math.sin(a), 0.045))

    # oil passages on a middle ring, kept away from the bores
    for i in range(16):
        a = 2 * math.pi * (i + 0.5) / 16
        x, y = 0.93 * math.cos(a), 0.93 * math.sin(a)
        holes.append(("oil", x, y, 0.04))

    # oil-return passages above/below the bore row
    for x in (-0.482, 0.0, 0.482):
        for y in (-0.42, 0.42):
            holes.append(("oil_return", x, y, 0.055))
    for x in (-0.964, 0.964):
        for y in (-0.38, 0.38):
            holes.append(("oil_return", x, y, 0.05))
    for x in (-1.05, 1.05):
        holes.append(("oil_return", x, 0.0, 0.05))

    assert len(holes) == 50, len(holes)

    # clearance checks
    for i, (li, xi, yi, ri) in enumerate(holes):
        assert math.hypot(xi, yi) + ri < 1.4 - 0.04, (li, xi, yi)
        for lj, xj, yj, rj in holes[i + 1:]:
            gap = math.hypot(xi - xj, yi - yj) - ri - rj
            assert gap > 0.03, (li, lj, gap)
    for zx, zy in ((0.240999, 0.3), (0.0030105, 0.002839)):
        dmin = min(math.hypot(zx - x, zy - y) - r for _, x, y, r in holes)
        dmin = min(dmin, 1.4 - math.hypot(zx, zy))
        assert dmin > 0.02, (zx, zy, dmin)

    for label, x, y, r in holes:
        comps.append({"kind": "circle",
                      "params": {"center": [round(x, 6), round(y, 6)], "radius": r},
                      "boundary_value": {"const": TEMPS[label]}, "label": label})

    cfg = {"dimension": 2, "composition": "outer_minus_holes",
           "components": comps, "source": {"kind": "zero"}}
    with open(OUT, "w") as fh:
        json.dump(cfg, fh, indent=1)
    print(f"wrote {OUT} with {len(comps)} components")


if __name__ == "__main__":
    main()
