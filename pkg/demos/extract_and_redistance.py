"""Zero-set extraction and exact redistancing on a star-shaped interface.

Builds the level-set function of a gently wavy star, extracts its zero
contour, rebuilds the signed distance to the extracted polyline, and checks
two properties of the result: the gradient magnitude is 1 inside a band
around the interface (clear of the medial kinks on both sides), and a second
redistance pass is nearly a no-op.  Optionally writes the vertex cloud to a
CSV for plotting.
"""

import sys

import numpy as np

from hmbo.fields import field_from_function, make_grid
from hmbo.interfaces import (
    average_radius,
    extract_zero_set,
    signed_distance,
    write_interface_csv,
)


def star(x, y):
    r = np.hypot(x, y)
    theta = np.arctan2(y, x)
    return r - (1.0 + 0.15 * np.cos(4.0 * theta))


def eikonal_residual(values, grid, mask):
    gx = (values[:, 2:] - values[:, :-2]) / (2.0 * grid.dx)
    gy = (values[2:, :] - values[:-2, :]) / (2.0 * grid.dy)
    grad = np.hypot(gx[1:-1, :], gy[:, 1:-1])
    return np.max(np.abs(grad[mask[1:-1, 1:-1]] - 1.0))


if __name__ == "__main__":
    grid = make_grid(256, 256, (-2.0, 2.0, -2.0, 2.0))
    f = field_from_function(grid, star)

    curve = extract_zero_set(f)
    print(f"extracted {curve.n_vertices} vertices, {curve.n_segments} segments")
    print(f"mean vertex radius: {average_radius(curve):.6f} (nominal 1.0)")

    d = signed_distance(f, curve)
    # measure in a band around the interface: past 3 dx the chord kinks are
    # gone, below 0.25 the medial axes of the star are not yet reached
    mask = (np.abs(d.values) >= 3.0 * grid.dx) & (np.abs(d.values) <= 0.25)
    mask[:2, :] = mask[-2:, :] = False
    mask[:, :2] = mask[:, -2:] = False
    print(f"eikonal residual in the band: {eikonal_residual(d.values, grid, mask):.3e}")

    d2 = signed_distance(d, extract_zero_set(d))
    print(f"second pass moved nodes by at most {np.max(np.abs(d2.values - d.values)):.3e}")

    if len(sys.argv) > 1:
        write_interface_csv(curve, sys.argv[1])
        print(f"wrote vertex cloud to {sys.argv[1]}")
