"""Block-partitioned matrices over GF(p) and the secure augmentation step.

A matrix is cut into a t x s grid of equally sized dense blocks.  Before
encoding, confidential inputs are augmented with uniformly random blocks so
that any P_C colluding workers learn nothing; exactly P_C of the appended
blocks on each side stay random, the rest are forced to zero by a boolean
mask.  Three regimes exist:

* ``gpd``  -- P_C = 0, nothing appended.
* ``tall`` -- s < t.  Random block rows are stacked under A and random block
  columns appended right of B.  When s does not divide P_C the surplus blocks
  are zeroed from the highest polynomial exponent downwards (rightmost blocks
  of R's last row, topmost blocks of R's last column).
* ``wide`` -- s >= t.  Random block columns are appended right of A and
  random block rows under B.  Placement depends on min(t, d):

  - min(t, d) == 1: P_C random columns/rows; only the last block row of R and
    the last block column of R' stay live.  Their polynomial exponents sit
    past every data exponent they could interfere with.
  - min(t, d) >= 2: the appended band is split in two.  A carries randomness
    in its first ceil(P_C/t) appended columns, B in its last ceil(P_C/d)
    appended rows, and each side is structurally zero where the other side is
    random.  Every product of a random block with its facing partner is
    therefore zero, which keeps the decoded coefficients free of random
    contributions.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, FieldMismatchError, WrongCaseError
from .field import PrimeField


@dataclass(frozen=True)
class BlockMatrix:
    """A dense matrix over GF(p) together with its block-grid shape."""

    data: np.ndarray
    grid: tuple[int, int]
    field: PrimeField

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.int64) % self.field.p
        gr, gc = self.grid
        if arr.ndim != 2:
            raise ConfigurationError("matrix data must be two-dimensional")
        if gr < 1 or gc < 1:
            raise ConfigurationError(f"block grid {self.grid} must be positive")
        if arr.shape[0] % gr or arr.shape[1] % gc:
            raise ConfigurationError(
                f"shape {arr.shape} is not divisible by block grid {self.grid}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def block_shape(self) -> tuple[int, int]:
        return (self.data.shape[0] // self.grid[0], self.data.shape[1] // self.grid[1])

    def block(self, i: int, j: int) -> np.ndarray:
        """The (i, j) block, 0-indexed, as a read-only view."""
        br, bc = self.block_shape
        return self.data[i * br : (i + 1) * br, j * bc : (j + 1) * bc]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BlockMatrix)
            and self.field == other.field
            and self.grid == other.grid
            and np.array_equal(self.data, other.data)
        )


def partition(matrix: np.ndarray, grid: tuple[int, int], field: PrimeField) -> BlockMatrix:
    """Wrap a dense matrix as a block matrix with the given grid."""
    return BlockMatrix(np.asarray(matrix), grid, field)


def multiply(a: BlockMatrix, b: BlockMatrix) -> BlockMatrix:
    """Exact block-wise product; the reference answer every decode is checked against."""
    if a.field != b.field:
        raise FieldMismatchError("operands live in different fields")
    if a.shape[1] != b.shape[0] or a.grid[1] != b.grid[0]:
        raise ConfigurationError(
            f"inner dimensions do not match: {a.shape}/{a.grid} vs {b.shape}/{b.grid}"
        )
    return BlockMatrix(a.field.matmul(a.data, b.data), (a.grid[0], b.grid[1]), a.field)


# ---------------------------------------------------------------------------
# augmentation layout
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AugmentationLayout:
    """Where random blocks go for a given (t, s, d, P_C), and which are zeroed.

    ``a_zero_mask`` covers the appended block grid on the A side (tall: delta
    rows x s, wide: t x width); True marks a structurally zero block.  The
    B-side mask is laid out the same way (tall: s x delta, wide: width x d).
    """

    case: str  # "gpd" | "tall" | "wide"
    t: int
    s: int
    d: int
    p_c: int
    delta: int  # tall: appended block rows of A / columns of B
    width: int  # wide: appended block columns of A / rows of B
    delta_a: int  # wide, min(t,d) >= 2: random band width on the A side
    delta_b: int  # wide, min(t,d) >= 2: random band width on the B side
    a_zero_mask: np.ndarray
    b_zero_mask: np.ndarray

    @property
    def t_star(self) -> int:
        return self.t + self.delta

    @property
    def d_star(self) -> int:
        return self.d + self.delta

    @property
    def s_wide(self) -> int:
        return self.s + self.width

    @property
    def live_a(self) -> list[tuple[int, int]]:
        """Appended A-side grid positions that stay random, row-major."""
        return [tuple(ix) for ix in np.argwhere(~self.a_zero_mask)]

    @property
    def live_b(self) -> list[tuple[int, int]]:
        return [tuple(ix) for ix in np.argwhere(~self.b_zero_mask)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, AugmentationLayout):
            return NotImplemented
        return (
            (self.case, self.t, self.s, self.d, self.p_c,
             self.delta, self.width, self.delta_a, self.delta_b)
            == (other.case, other.t, other.s, other.d, other.p_c,
                other.delta, other.width, other.delta_a, other.delta_b)
            and np.array_equal(self.a_zero_mask, other.a_zero_mask)
            and np.array_equal(self.b_zero_mask, other.b_zero_mask)
        )

    def __hash__(self) -> int:
        return hash(
            (self.case, self.t, self.s, self.d, self.p_c,
             self.delta, self.width, self.delta_a, self.delta_b,
             self.a_zero_mask.tobytes(), self.b_zero_mask.tobytes())
        )


def augmentation_layout(t: int, s: int, d: int, p_c: int) -> AugmentationLayout:
    for name, v in (("t", t), ("s", s), ("d", d)):
        if v < 1:
            raise ConfigurationError(f"{name} must be >= 1, got {v}")
    if p_c < 0:
        raise ConfigurationError(f"collusion tolerance must be >= 0, got {p_c}")

    if p_c == 0:
        empty = np.zeros((0, 0), dtype=bool)
        return AugmentationLayout("gpd", t, s, d, 0, 0, 0, 0, 0, empty, empty)

    if s < t:
        delta = ceil(p_c / s)
        surplus = s * delta - p_c
        a_mask = np.zeros((delta, s), dtype=bool)
        b_mask = np.zeros((s, delta), dtype=bool)
        if surplus:
            a_mask[delta - 1, s - surplus :] = True  # rightmost of the last row
            b_mask[:surplus, delta - 1] = True  # topmost of the last column
        return AugmentationLayout("tall", t, s, d, p_c, delta, 0, 0, 0, a_mask, b_mask)

    if min(t, d) == 1:
        width = p_c
        a_mask = np.ones((t, width), dtype=bool)
        a_mask[t - 1, :] = False  # live randomness sits in the last block row
        b_mask = np.ones((width, d), dtype=bool)
        b_mask[:, d - 1] = False  # and in the last block column
        return AugmentationLayout("wide", t, s, d, p_c, 0, width, width, width, a_mask, b_mask)

    delta_a = ceil(p_c / t)
    delta_b = ceil(p_c / d)
    width = delta_a + delta_b
    a_mask = np.ones((t, width), dtype=bool)
    a_mask[:, :delta_a] = False
    for _ in range(t * delta_a - p_c):  # surplus dies highest exponent first
        live = np.argwhere(~a_mask[:, :delta_a])
        i, j = max(live, key=lambda ix: (ix[0], ix[1]))
        a_mask[i, j] = True
    b_mask = np.ones((width, d), dtype=bool)
    b_mask[delta_a:, :] = False
    for _ in range(d * delta_b - p_c):
        live = np.argwhere(~b_mask[delta_a:, :])
        # exponent of appended row r in column l is t*s_w*l + (width-1-r)
        r, l = max(live, key=lambda ix: (ix[1], -ix[0]))
        b_mask[delta_a + r, l] = True
    return AugmentationLayout("wide", t, s, d, p_c, 0, width, delta_a, delta_b, a_mask, b_mask)


# ---------------------------------------------------------------------------
# augmentation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AugmentedPair:
    """The encoder's inputs: A and B with their random padding attached."""

    layout: AugmentationLayout
    a_star: BlockMatrix
    b_star: BlockMatrix
    random_a: np.ndarray  # appended element rows/columns of a_star, post-mask
    random_b: np.ndarray

    @property
    def original_a(self) -> np.ndarray:
        if self.layout.case == "wide":
            return self.a_star.data[:, : self._split_a]
        return self.a_star.data[: self._split_a, :]

    @property
    def original_b(self) -> np.ndarray:
        if self.layout.case == "wide":
            return self.b_star.data[: self._split_b, :]
        return self.b_star.data[:, : self._split_b]

    @property
    def _split_a(self) -> int:
        if self.layout.case == "wide":
            return self.a_star.shape[1] - self.random_a.shape[1]
        return self.a_star.shape[0] - self.random_a.shape[0]

    @property
    def _split_b(self) -> int:
        if self.layout.case == "wide":
            return self.b_star.shape[0] - self.random_b.shape[0]
        return self.b_star.shape[1] - self.random_b.shape[1]


def _validate_operands(a: BlockMatrix, b: BlockMatrix) -> tuple[int, int, int]:
    if a.field != b.field:
        raise FieldMismatchError("A and B must share one field")
    t, s = a.grid
    s2, d = b.grid
    if s != s2 or a.shape[1] != b.shape[0]:
        raise ConfigurationError(
            f"inner partitions do not agree: A {a.shape}/{a.grid}, B {b.shape}/{b.grid}"
        )
    return t, s, d


def _apply_mask(blocks: np.ndarray, mask: np.ndarray, block_shape: tuple[int, int]) -> np.ndarray:
    out = blocks.copy()
    br, bc = block_shape
    for i, j in np.argwhere(mask):
        out[i * br : (i + 1) * br, j * bc : (j + 1) * bc] = 0
    return out


def augment_tall(
    a: BlockMatrix, b: BlockMatrix, p_c: int, rng: np.random.Generator
) -> AugmentedPair:
    """Stack random block rows under A and random block columns right of B."""
    t, s, d = _validate_operands(a, b)
    if s >= t:
        raise WrongCaseError(f"tall augmentation needs s < t, got s={s}, t={t}")
    layout = augmentation_layout(t, s, d, p_c)
    field = a.field
    br, bc = a.block_shape
    rb_rows, rb_cols = b.block_shape
    r_a = field.random_array((layout.delta * br, a.shape[1]), rng)
    r_b = field.random_array((b.shape[0], layout.delta * rb_cols), rng)
    r_a = _apply_mask(r_a, layout.a_zero_mask, (br, bc))
    r_b = _apply_mask(r_b, layout.b_zero_mask, (rb_rows, rb_cols))
    a_star = BlockMatrix(np.vstack([a.data, r_a]), (layout.t_star, s), field)
    b_star = BlockMatrix(np.hstack([b.data, r_b]), (s, layout.d_star), field)
    return AugmentedPair(layout, a_star, b_star, r_a, r_b)


def augment_wide(
    a: BlockMatrix, b: BlockMatrix, p_c: int, rng: np.random.Generator
) -> AugmentedPair:
    """Append random block columns right of A and random block rows under B."""
    t, s, d = _validate_operands(a, b)
    if s < t:
        raise WrongCaseError(f"wide augmentation needs s >= t, got s={s}, t={t}")
    layout = augmentation_layout(t, s, d, p_c)
    field = a.field
    br, bc = a.block_shape
    rb_rows, rb_cols = b.block_shape
    r_a = field.random_array((a.shape[0], layout.width * bc), rng)
    r_b = field.random_array((layout.width * rb_rows, b.shape[1]), rng)
    r_a = _apply_mask(r_a, layout.a_zero_mask, (br, bc))
    r_b = _apply_mask(r_b, layout.b_zero_mask, (rb_rows, rb_cols))
    a_star = BlockMatrix(np.hstack([a.data, r_a]), (t, layout.s_wide), field)
    b_star = BlockMatrix(np.vstack([b.data, r_b]), (layout.s_wide, d), field)
    return AugmentedPair(layout, a_star, b_star, r_a, r_b)


def augment(
    a: BlockMatrix, b: BlockMatrix, p_c: int, rng: np.random.Generator
) -> AugmentedPair:
    """Case dispatch: tall when s < t, wide otherwise.  Total for every grid."""
    t, s, _ = _validate_operands(a, b)
    if p_c == 0:
        layout = augmentation_layout(t, s, b.grid[1], 0)
        none_a = np.zeros((0, a.shape[1]) if s < t else (a.shape[0], 0), dtype=np.int64)
        none_b = np.zeros((b.shape[0], 0) if s < t else (0, b.shape[1]), dtype=np.int64)
        return AugmentedPair(layout, a, b, none_a, none_b)
    if s < t:
        return augment_tall(a, b, p_c, rng)
    return augment_wide(a, b, p_c, rng)


# ---------------------------------------------------------------------------
# matrix text I/O
# ---------------------------------------------------------------------------


def write_matrix(path: str | Path, matrix: np.ndarray, modulus: int) -> None:
    """Text format: first line "rows cols modulus", then row-major integers."""
    arr = np.asarray(matrix, dtype=np.int64)
    lines = [f"{arr.shape[0]} {arr.shape[1]} {modulus}"]
    lines += [" ".join(str(v) for v in row) for row in arr]
    Path(path).write_text("\n".join(lines) + "\n")


def read_matrix(path: str | Path) -> tuple[np.ndarray, int]:
    tokens = Path(path).read_text().split()
    if len(tokens) < 3:
        raise ConfigurationError(f"{path}: truncated matrix file")
    try:
        rows, cols, modulus = (int(x) for x in tokens[:3])
        vals = [int(x) for x in tokens[3:]]
    except ValueError as exc:
        raise ConfigurationError(f"{path}: non-integer entry ({exc})") from None
    if len(vals) != rows * cols:
        raise ConfigurationError(
            f"{path}: expected {rows * cols} entries, found {len(vals)}"
        )
    return np.array(vals, dtype=np.int64).reshape(rows, cols), modulus
