"""Uniform Cartesian grids and nodal scalar fields.

Nodes are vertex-centered: node (i, j) sits at (xmin + i*dx, ymin + j*dy)
with dx = (xmax - xmin) / (nx - 1), so the first and last nodes lie exactly
on the rectangle boundary.  Field values are stored as a (ny, nx) array,
row-major with y as the outer index.

The Laplacian uses the standard 5-point stencil with mirror ghost nodes
(ghost value equals the first interior value), which realizes a homogeneous
Neumann condition: the centered normal derivative at every boundary node of
the implied extension is exactly zero.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class Grid2D:
    """Tensor-product grid of nx-by-ny nodes over [xmin,xmax] x [ymin,ymax]."""

    nx: int
    ny: int
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    @property
    def dx(self) -> float:
        return (self.xmax - self.xmin) / (self.nx - 1)

    @property
    def dy(self) -> float:
        return (self.ymax - self.ymin) / (self.ny - 1)

    @property
    def shape(self) -> tuple[int, int]:
        """Array shape of fields on this grid: (ny, nx)."""
        return (self.ny, self.nx)

    def x_coords(self) -> np.ndarray:
        return np.linspace(self.xmin, self.xmax, self.nx)

    def y_coords(self) -> np.ndarray:
        return np.linspace(self.ymin, self.ymax, self.ny)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Node coordinate arrays X, Y, each of shape (ny, nx)."""
        return np.meshgrid(self.x_coords(), self.y_coords(), indexing="xy")


def make_grid(nx: int, ny: int, bounds) -> Grid2D:
    """Build a grid from node counts and bounds [xmin, xmax, ymin, ymax]."""
    if nx < 3 or ny < 3:
        raise ValidationError(f"need at least 3 nodes per axis, got nx={nx}, ny={ny}")
    xmin, xmax, ymin, ymax = (float(b) for b in bounds)
    if not (xmin < xmax and ymin < ymax):
        raise ValidationError(f"degenerate bounds {bounds!r}")
    return Grid2D(int(nx), int(ny), xmin, xmax, ymin, ymax)


@dataclass
class ScalarField:
    """Nodal values of a scalar function on a Grid2D.

    values has shape (ny, nx); entry [j, i] belongs to the node at
    (xmin + i*dx, ymin + j*dy).  All entries must be finite.
    """

    grid: Grid2D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != self.grid.shape:
            raise ValidationError(
                f"field shape {v.shape} does not match grid shape {self.grid.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise ValidationError("field contains non-finite values")
        self.values = v

    def copy(self) -> "ScalarField":
        return ScalarField(self.grid, self.values.copy())


def field_from_function(grid: Grid2D, fn) -> ScalarField:
    """Sample fn(x, y) at every node.  fn must accept numpy arrays."""
    X, Y = grid.mesh()
    return ScalarField(grid, np.asarray(fn(X, Y), dtype=float))


def constant_field(grid: Grid2D, value: float) -> ScalarField:
    return ScalarField(grid, np.full(grid.shape, float(value)))


def _laplacian_values(v: np.ndarray, dx: float, dy: float) -> np.ndarray:
    """5-point Laplacian with mirror (Neumann) ghost nodes, on a raw array."""
    p = np.pad(v, 1, mode="reflect")
    return (p[1:-1, :-2] - 2.0 * v + p[1:-1, 2:]) / (dx * dx) + (
        p[:-2, 1:-1] - 2.0 * v + p[2:, 1:-1]
    ) / (dy * dy)


def laplacian(f: ScalarField) -> ScalarField:
    """Discrete Laplacian of f with homogeneous Neumann boundary handling."""
    g = f.grid
    return ScalarField(g, _laplacian_values(f.values, g.dx, g.dy))


def eval_bilinear(f: ScalarField, p) -> float:
    """Bilinear interpolation of f at a point p = (x, y) inside the domain."""
    g = f.grid
    x, y = float(p[0]), float(p[1])
    # tolerate roundoff at the outer edges, reject genuinely outside points
    tol_x = 1e-12 * (g.xmax - g.xmin)
    tol_y = 1e-12 * (g.ymax - g.ymin)
    if not (g.xmin - tol_x <= x <= g.xmax + tol_x and g.ymin - tol_y <= y <= g.ymax + tol_y):
        raise ValidationError(f"point ({x}, {y}) outside domain")
    i = min(int((x - g.xmin) / g.dx), g.nx - 2)
    j = min(int((y - g.ymin) / g.dy), g.ny - 2)
    i = max(i, 0)
    j = max(j, 0)
    u = (x - (g.xmin + i * g.dx)) / g.dx
    v = (y - (g.ymin + j * g.dy)) / g.dy
    z = f.values
    return float(
        (1 - u) * (1 - v) * z[j, i]
        + u * (1 - v) * z[j, i + 1]
        + (1 - u) * v * z[j + 1, i]
        + u * v * z[j + 1, i + 1]
    )


def write_field_csv(f: ScalarField, path) -> None:
    """Dump a field as x,y,value rows, row-major with y as the outer index."""
    g = f.grid
    xs = g.x_coords()
    ys = g.y_coords()
    with open(path, "w", newline="") as fh:
        fh.write("x,y,value\n")
        for j in range(g.ny):
            for i in range(g.nx):
                fh.write(f"{xs[i]:.17g},{ys[j]:.17g},{f.values[j, i]:.17g}\n")
