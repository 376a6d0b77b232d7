"""Zero-dimensional systems with solutions worked out by hand."""

import itertools
import math

H = math.sqrt(0.5)

# (name, generators, variable order, known solutions)
SYSTEMS = [
    ("sqrt2", ["x^2 - 2"], ("x",), [(math.sqrt(2),), (-math.sqrt(2),)]),
    ("linear", ["x - 5"], ("x",), [(5.0,)]),
    ("line_circle", ["x - y", "x^2 + y^2 - 1"], ("x", "y"), [(H, H), (-H, -H)]),
    (
        # x^2 + y^2 = 5 with xy = 2 gives (x + y)^2 = 9 and (x - y)^2 = 1
        "hyperbola_circle",
        ["x^2 + y^2 - 5", "x*y - 2"],
        ("x", "y"),
        [(1.0, 2.0), (2.0, 1.0), (-1.0, -2.0), (-2.0, -1.0)],
    ),
    ("grid", ["x^2 - 1", "y^2 - 4"], ("x", "y"), [(a, b) for a in (1.0, -1.0) for b in (2.0, -2.0)]),
    (
        # elementary symmetric functions of {1, 2, 3}
        "symmetric",
        ["x + y + z - 6", "x*y + y*z + z*x - 11", "x*y*z - 6"],
        ("x", "y", "z"),
        [tuple(map(float, p)) for p in itertools.permutations((1, 2, 3))],
    ),
    (
        # two unit-variance Gaussians, weighted power sums p1 = 1/5, p2 = 1, p3 = 1/5:
        # Newton's recurrence gives u + v = 0, uv = -1, so {u, v} = {1, -1}
        "pearson",
        [
            "w*u - w*v + v - 1/5",
            "w*u^2 - w*v^2 + v^2 - 1",
            "w*u^3 - w*v^3 + v^3 + 3*w*u - 3*w*v + 3*v - 4/5",
        ],
        ("w", "u", "v"),
        [(0.4, -1.0, 1.0), (0.6, 1.0, -1.0)],
    ),
    (
        "triangle",
        ["x^2 - y", "y^2 - x"],
        ("x", "y"),
        [(0.0, 0.0), (1.0, 1.0)]
        + [(complex(math.cos(t), math.sin(t)), complex(math.cos(2 * t), math.sin(2 * t))) for t in (2 * math.pi / 3, -2 * math.pi / 3)],
    ),
]
