"""Ideal corpus: at most three variables, generators of degree at most three."""

IDEALS = [
    ["x", "y"],
    ["x^2", "y"],
    ["x*y", "x*z", "y*z"],
    ["x^2 - y", "x^3 - z"],
    ["x^2 + y^2 - 1", "x - y"],
    ["x*y - 1", "y*z - 1"],
    ["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"],
    ["x^2 - y*z", "y^2 - x*z", "z^2 - x*y"],
    ["x + y + z", "x*y + y*z + z*x", "x*y*z - 1"],
    ["x^2*y - z", "x*y^2 - 1"],
    ["x^3 - y", "y^3 - z"],
    ["x^2 - 1", "y^2 - 1", "x*y - 1"],
    ["x*y", "x^2 - x"],
    ["y^2 - x^3 - x"],
    ["x - 1/2", "y + 3"],
    ["x^2 + y + z - 1", "x + y^2 + z - 1", "x + y + z^2 - 1"],
    ["2*x*y - 3*z", "x^2 - y^2"],
    ["x^3", "y^3", "x*y*z"],
    ["1 - x*y", "x"],
    ["x*z - y^2", "x^3 - y*z"],
    ["x^2*z - y^3", "x*y - z^2"],
    ["x + y", "x*y + z^2", "z^3"],
]
