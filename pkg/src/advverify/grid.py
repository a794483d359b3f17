"""Regular and irregular 1D finite-volume grids on the unit interval."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MIN_CELLS = 4
MAX_PERTURB_FRACTION = 0.45
DEFAULT_PERTURB_FRACTION = 0.3
DEFAULT_TILE_CELLS = 4
GRID_KINDS = ("regular", "irregular", "random")

_LCG_MULT = 6364136223846793005
_LCG_INC = 1442695040888963407
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True, eq=False)
class Grid1D:
    """Cell faces, centers and volumes of a 1D grid on [0, 1]."""

    faces: np.ndarray
    centers: np.ndarray = field(init=False)
    volumes: np.ndarray = field(init=False)

    def __post_init__(self):
        faces = np.asarray(self.faces, dtype=np.float64).copy()
        if faces.ndim != 1 or faces.size < 2:
            raise ValueError("faces must be a 1D array with at least two entries")
        if faces[0] != 0.0 or faces[-1] != 1.0:
            raise ValueError("boundary faces must be exactly 0 and 1")
        if not np.all(np.diff(faces) > 0.0):
            raise ValueError("faces must be strictly increasing")
        faces.setflags(write=False)
        centers = 0.5 * (faces[:-1] + faces[1:])
        volumes = np.diff(faces)
        centers.setflags(write=False)
        volumes.setflags(write=False)
        object.__setattr__(self, "faces", faces)
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "volumes", volumes)

    @property
    def n_cells(self) -> int:
        return self.volumes.size

    @property
    def h(self) -> float:
        """Nominal spacing 1/N used for refinement bookkeeping."""
        return 1.0 / self.n_cells

    @property
    def cfl_spacing(self) -> float:
        """Smallest cell volume; the spacing that limits explicit time steps."""
        return float(self.volumes.min())

    def dump(self, path) -> None:
        """Write one face coordinate per line with 17 significant digits."""
        with open(path, "w") as fh:
            for x in self.faces:
                fh.write(f"{x:.17g}\n")


@dataclass(frozen=True, eq=False)
class SolutionField:
    """Cell-centered values on a grid at time ``time``."""

    values: np.ndarray
    grid: Grid1D
    time: float = 0.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (self.grid.n_cells,):
            raise ValueError(
                f"expected {self.grid.n_cells} values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise FloatingPointError("solution field contains non-finite values")
        object.__setattr__(self, "values", values)


def lcg_uniforms(seed: int, count: int) -> np.ndarray:
    """Draw ``count`` uniforms in [0, 1) from the 64-bit LCG seeded with ``seed``.

    The state is advanced before each draw; the top 53 bits of the new state
    form the mantissa of the returned value.
    """
    state = seed & _MASK64
    out = np.empty(count, dtype=np.float64)
    for i in range(count):
        state = (_LCG_MULT * state + _LCG_INC) & _MASK64
        out[i] = (state >> 11) / 9007199254740992.0  # 2**53
    return out


def _check_cells(n_cells: int) -> None:
    if int(n_cells) != n_cells or n_cells < MIN_CELLS:
        raise ValueError(f"need an integer n_cells >= {MIN_CELLS}, got {n_cells!r}")


def make_regular(n_cells: int) -> Grid1D:
    _check_cells(n_cells)
    n = int(n_cells)
    return Grid1D(np.arange(n + 1, dtype=np.float64) / n)


def make_irregular(n_cells: int, seed: int = 0,
                   perturb_fraction: float = DEFAULT_PERTURB_FRACTION) -> Grid1D:
    """Uniform grid with every interior face shifted by up to +-r*h.

    The shift of face i is ``(2*u_i - 1) * r * h`` with ``u_i`` taken from
    :func:`lcg_uniforms`, so a given (n_cells, seed, r) always produces the
    same grid, bit for bit.
    """
    _check_cells(n_cells)
    if not 0.0 <= perturb_fraction <= MAX_PERTURB_FRACTION:
        raise ValueError(
            f"perturb_fraction must lie in [0, {MAX_PERTURB_FRACTION}], got {perturb_fraction}")
    n = int(n_cells)
    h = 1.0 / n
    faces = np.arange(n + 1, dtype=np.float64) / n
    u = lcg_uniforms(seed, n - 1)
    faces[1:-1] += (2.0 * u - 1.0) * perturb_fraction * h
    return Grid1D(faces)


def make_tiled_irregular(n_cells: int, seed: int = 0,
                         perturb_fraction: float = DEFAULT_PERTURB_FRACTION,
                         tile_cells: int = DEFAULT_TILE_CELLS) -> Grid1D:
    """Irregular grid built from one random tile of ``tile_cells`` cells.

    The tile is :func:`make_irregular` applied to ``tile_cells`` cells with
    the given seed; its interior shifts (in units of h) are repeated across
    the domain, with the faces between tiles left unshifted. Every level of a
    family then holds the same set of local stencil shapes, so observed
    orders do not jump with the luck of each level's draw, and the smallest
    volume halves exactly with h.
    """
    _check_cells(n_cells)
    n = int(n_cells)
    if tile_cells < 2 or n % tile_cells:
        raise ValueError(f"n_cells={n} is not a multiple of tile_cells={tile_cells}")
    if not 0.0 <= perturb_fraction <= MAX_PERTURB_FRACTION:
        raise ValueError(
            f"perturb_fraction must lie in [0, {MAX_PERTURB_FRACTION}], got {perturb_fraction}")
    shifts = np.zeros(tile_cells)
    shifts[1:] = (2.0 * lcg_uniforms(seed, tile_cells - 1) - 1.0) * perturb_fraction
    faces = np.arange(n + 1, dtype=np.float64) / n
    faces[1:-1] += shifts[np.arange(1, n) % tile_cells] / n
    return Grid1D(faces)


def grid_family(kind: str, base_cells: int, n_levels: int, seed: int = 0,
                perturb_fraction: float = DEFAULT_PERTURB_FRACTION) -> list[Grid1D]:
    """Grids with base_cells * 2**k cells, k = 0 .. n_levels-1.

    ``irregular`` levels tile the same random pattern (seed fixed across
    levels); ``random`` levels are drawn independently face by face with
    seed + k.
    """
    if n_levels < 2:
        raise ValueError("a refinement family needs at least 2 levels")
    if kind == "regular":
        return [make_regular(base_cells * 2**k) for k in range(n_levels)]
    if kind == "irregular":
        return [make_tiled_irregular(base_cells * 2**k, seed, perturb_fraction)
                for k in range(n_levels)]
    if kind == "random":
        return [make_irregular(base_cells * 2**k, seed + k, perturb_fraction)
                for k in range(n_levels)]
    raise ValueError(f"unknown grid kind {kind!r}")
