"""Rigid transformations of the mesh plane used as migration functions.

All variants are bijections of the full plane (zero-based coordinates on an
``nx``-by-``ny`` mesh):

    rotation       (x, y) -> (N-1-y, x)           square meshes only
    mirror_x       (x, y) -> (nx-1-x, y)
    mirror_y       (x, y) -> (x, ny-1-y)
    mirror_xy      both axes; equals rotation twice on square meshes
    translate_x    (x, y) -> ((x+dx) mod nx, y)
    translate_y    (x, y) -> (x, (y+dy) mod ny)
    translate_xy   both axes
    identity

Translation offsets wrap modulo the mesh dimension, so any offset stays a
permutation of the plane.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BoundsError, ConfigurationError, UnsupportedFunctionError
from .grid import Coord, GridSpec

KINDS = (
    "identity", "rotation", "mirror_x", "mirror_y", "mirror_xy",
    "translate_x", "translate_y", "translate_xy",
)
_TRANSLATING = ("translate_x", "translate_y", "translate_xy")


@dataclass(frozen=True)
class MigrationFunction:
    """Tagged plane transform; dx/dy matter only for the translating kinds."""

    kind: str
    dx: int = 0
    dy: int = 0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown migration function {self.kind!r}")

    def label(self) -> str:
        """Stable tag used in config files and CSV output."""
        if self.kind == "translate_x":
            return f"translate_x:{self.dx}"
        if self.kind == "translate_y":
            return f"translate_y:{self.dy}"
        if self.kind == "translate_xy":
            return f"translate_xy:{self.dx}:{self.dy}"
        return self.kind


IDENTITY = MigrationFunction("identity")
ROTATION = MigrationFunction("rotation")
MIRROR_X = MigrationFunction("mirror_x")
MIRROR_Y = MigrationFunction("mirror_y")
MIRROR_XY = MigrationFunction("mirror_xy")


def translate_x(offset: int) -> MigrationFunction:
    return MigrationFunction("translate_x", dx=offset)


def translate_y(offset: int) -> MigrationFunction:
    return MigrationFunction("translate_y", dy=offset)


def translate_xy(dx: int, dy: int) -> MigrationFunction:
    return MigrationFunction("translate_xy", dx=dx, dy=dy)


def parse_function(tag: str, dx: int | None = None, dy: int | None = None) -> MigrationFunction:
    """Parse a tag such as ``mirror_xy``, ``translate_x:2`` or ``translate_xy:1:1``.

    Keyword offsets override tag arguments; a translating kind with no
    offset at all defaults to a shift of 1 per moving axis.
    """
    parts = [p.strip() for p in tag.strip().split(":")]
    name, args = parts[0], parts[1:]
    if name not in KINDS:
        raise ConfigurationError(f"unknown migration function {tag!r}")
    if name not in _TRANSLATING:
        if args or dx is not None or dy is not None:
            raise ConfigurationError(f"{name} takes no offsets")
        return MigrationFunction(name)
    try:
        offsets = [int(a) for a in args]
    except ValueError:
        raise ConfigurationError(f"bad offsets in function tag {tag!r}") from None
    tag_dx = tag_dy = None
    if name == "translate_x" and len(offsets) in (0, 1):
        tag_dx = offsets[0] if offsets else None
    elif name == "translate_y" and len(offsets) in (0, 1):
        tag_dy = offsets[0] if offsets else None
    elif name == "translate_xy" and len(offsets) in (0, 2):
        if offsets:
            tag_dx, tag_dy = offsets
    else:
        raise ConfigurationError(f"wrong number of offsets in function tag {tag!r}")
    fdx = dx if dx is not None else tag_dx
    fdy = dy if dy is not None else tag_dy
    if name == "translate_x":
        return translate_x(1 if fdx is None else fdx)
    if name == "translate_y":
        return translate_y(1 if fdy is None else fdy)
    return translate_xy(1 if fdx is None else fdx, 1 if fdy is None else fdy)


def apply(fn: MigrationFunction, c: Coord, grid: GridSpec) -> Coord:
    """Image of one coordinate under a migration function."""
    if not grid.in_bounds(c):
        raise BoundsError(f"{c} outside {grid.nx}x{grid.ny} mesh")
    k = fn.kind
    if k == "identity":
        return c
    if k == "rotation":
        if grid.nx != grid.ny:
            raise UnsupportedFunctionError(
                f"rotation needs a square mesh, got {grid.nx}x{grid.ny}")
        return Coord(grid.nx - 1 - c.y, c.x)
    if k == "mirror_x":
        return Coord(grid.nx - 1 - c.x, c.y)
    if k == "mirror_y":
        return Coord(c.x, grid.ny - 1 - c.y)
    if k == "mirror_xy":
        return Coord(grid.nx - 1 - c.x, grid.ny - 1 - c.y)
    if k == "translate_x":
        return Coord((c.x + fn.dx) % grid.nx, c.y)
    if k == "translate_y":
        return Coord(c.x, (c.y + fn.dy) % grid.ny)
    return Coord((c.x + fn.dx) % grid.nx, (c.y + fn.dy) % grid.ny)


@dataclass(frozen=True)
class Permutation:
    """Total bijection of mesh blocks, stored as a row-major index map."""

    grid: GridSpec
    forward: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.forward) != list(range(self.grid.n_cells)):
            raise ConfigurationError("index map is not a bijection of the mesh")

    def __call__(self, c: Coord) -> Coord:
        return self.grid.coord(self.forward[self.grid.index(c)])

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.forward)
        for src, dst in enumerate(self.forward):
            inv[dst] = src
        return Permutation(self.grid, tuple(inv))

    def after(self, other: "Permutation") -> "Permutation":
        """Composition self o other (other applied first)."""
        if other.grid != self.grid:
            raise ConfigurationError("cannot compose permutations of different meshes")
        return Permutation(self.grid, tuple(self.forward[i] for i in other.forward))

    def fixed_point_indices(self) -> tuple[int, ...]:
        return tuple(i for i, d in enumerate(self.forward) if i == d)

    @classmethod
    def identity(cls, grid: GridSpec) -> "Permutation":
        return cls(grid, tuple(range(grid.n_cells)))


def as_permutation(fn: MigrationFunction, grid: GridSpec) -> Permutation:
    """The whole-plane permutation, pointwise equal to :func:`apply`."""
    return Permutation(grid, tuple(grid.index(apply(fn, c, grid)) for c in grid.cells()))


def fixed_points(fn: MigrationFunction, grid: GridSpec) -> set[Coord]:
    """Cells the function leaves in place."""
    return {c for c in grid.cells() if apply(fn, c, grid) == c}


@dataclass(frozen=True)
class CumulativeTransform:
    """Product of every migration applied since start.

    Drives the I/O address translation that keeps migrations invisible to
    the outside of the chip.
    """

    composed: Permutation

    @classmethod
    def identity(cls, grid: GridSpec) -> "CumulativeTransform":
        return cls(Permutation.identity(grid))


def compose(ct: CumulativeTransform, fn: MigrationFunction,
            grid: GridSpec) -> CumulativeTransform:
    """Account for one more migration: new product = fn o previous."""
    if grid != ct.composed.grid:
        raise ConfigurationError("cumulative transform belongs to a different mesh")
    return CumulativeTransform(as_permutation(fn, grid).after(ct.composed))


def external_address(ct: CumulativeTransform, logical: Coord) -> Coord:
    """Physical destination for a packet addressed to a logical coordinate."""
    return ct.composed(logical)


def internal_address(ct: CumulativeTransform, physical: Coord) -> Coord:
    """Logical source for a packet leaving from a physical coordinate."""
    return ct.composed.inverse()(physical)
