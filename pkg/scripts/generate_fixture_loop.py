"""Regenerate the bundled curve fixture (rudolph_8_20.json).

The curve w^3 - 3w + 2 z^4 has branch points at the 8th roots of unity
and its real-part coincidence graph is 8 radial rays: label 2 at z^4=1,
label 1 at z^4=-1.  The disc boundary built here is a curved band
(roughly an annular dumbbell) around the two branch points e^{+-i pi/4}:
it dips inside the unit circle near 135 and 225 degrees to dodge the
label-1 rays there, and bulges outside near 90, 180 and 270 degrees so
the three label-2 rays cut straight through the band.  That produces
exactly the target combinatorics: 4 regions in a chain, 3 pass-through
label-2 edges, and 2 label-1 branch terminals.

Run from the repository root:

    python3 scripts/generate_fixture_loop.py
"""

import json
import pathlib

import numpy as np

# (angle degrees, centerline radius) knots; cosine-eased in between
KNOTS = [
    (38, 1.0), (45, 1.0), (90, 1.18), (135, 0.82), (180, 1.18),
    (225, 0.82), (270, 1.18), (315, 1.0), (322, 1.0),
]
HALF = 0.13  # half-width of the band


def centerline(theta_deg):
    th = np.atleast_1d(np.asarray(theta_deg, dtype=float))
    out = np.empty_like(th)
    for i, t in enumerate(th):
        for (a, ca), (b, cb) in zip(KNOTS[:-1], KNOTS[1:]):
            if a <= t <= b:
                u = 0.0 if b == a else (t - a) / (b - a)
                out[i] = ca + (cb - ca) * (1 - np.cos(np.pi * u)) / 2
                break
    return out


def loop_vertices(step_deg=1.0, ncap=8):
    thetas = np.arange(38.0, 322.0 + 1e-9, step_deg)
    c = centerline(thetas)
    rot = np.exp(1j * np.deg2rad(thetas))
    outer = (c + HALF) * rot
    inner = (c - HALF) * rot
    cap_end = [
        ((c[-1] + HALF) - 2 * HALF * k / ncap) * np.exp(1j * np.deg2rad(322.0))
        for k in range(1, ncap)
    ]
    cap_start = [
        ((c[0] - HALF) + 2 * HALF * k / ncap) * np.exp(1j * np.deg2rad(38.0))
        for k in range(1, ncap)
    ]
    return np.concatenate([outer, cap_end, inner[::-1], cap_start])


def main():
    verts = loop_vertices()
    data = {
        "schema": 1,
        "name": "cuspless-octic-disc-8-20",
        "terms": [
            {"zdeg": 0, "wdeg": 3, "re": 1.0, "im": 0.0},
            {"zdeg": 0, "wdeg": 1, "re": -3.0, "im": 0.0},
            {"zdeg": 4, "wdeg": 0, "re": 2.0, "im": 0.0},
        ],
        "window": [-1.6, 1.6, -1.6, 1.6],
        "targets": [3],
        "loop": {
            "vertices": [[round(v.real, 9), round(v.imag, 9)] for v in verts]
        },
    }
    out = (pathlib.Path(__file__).resolve().parent.parent
           / "src" / "curvebraid" / "fixtures" / "rudolph_8_20.json")
    with open(out, "w") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")
    print(f"wrote {out} ({len(verts)} vertices)")


if __name__ == "__main__":
    main()
