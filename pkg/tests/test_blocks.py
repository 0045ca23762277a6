"""Block partitioning, random augmentation layouts, matrix file round-trips."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sgpd import (
    ConfigurationError,
    FieldMismatchError,
    PrimeField,
    WrongCaseError,
    augment,
    augment_tall,
    augment_wide,
    augmentation_layout,
    multiply,
    partition,
    read_matrix,
    write_matrix,
)

from conftest import make_pair, small_matmul, triple_loop_product


def test_partition_blocks_are_views(field257):
    rng = np.random.default_rng(0)
    arr = field257.random_array((6, 4), rng)
    bm = partition(arr, (3, 2), field257)
    assert bm.block_shape == (2, 2)
    for i in range(3):
        for j in range(2):
            assert np.array_equal(bm.block(i, j), arr[2 * i : 2 * i + 2, 2 * j : 2 * j + 2])


def test_partition_rejects_bad_grid(field257):
    with pytest.raises(ConfigurationError):
        partition(np.zeros((6, 4)), (4, 2), field257)
    with pytest.raises(ConfigurationError):
        partition(np.zeros((6, 4)), (3, 0), field257)
    with pytest.raises(ConfigurationError):
        partition(np.zeros(6), (2, 3), field257)


def test_block_matrix_reduces_and_freezes(field5):
    bm = partition(np.array([[7, -1], [10, 4]]), (1, 1), field5)
    assert np.array_equal(bm.data, [[2, 4], [0, 4]])
    with pytest.raises(ValueError):
        bm.data[0, 0] = 3


def test_multiply_matches_triple_loop(field257):
    rng = np.random.default_rng(1)
    a = partition(field257.random_array((4, 6), rng), (2, 3), field257)
    b = partition(field257.random_array((6, 2), rng), (3, 1), field257)
    got = multiply(a, b)
    assert got.grid == (2, 1)
    assert np.array_equal(got.data, triple_loop_product(a.data, b.data, 257))


def test_multiply_rejects_mismatches(field257, field5):
    a = partition(np.zeros((4, 6)), (2, 3), field257)
    with pytest.raises(ConfigurationError):
        multiply(a, partition(np.zeros((4, 2)), (2, 1), field257))
    with pytest.raises(FieldMismatchError):
        multiply(a, partition(np.zeros((6, 2)), (3, 1), field5))


# ---------------------------------------------------------------------------
# augmentation layouts
# ---------------------------------------------------------------------------


def test_layout_gpd_appends_nothing():
    lay = augmentation_layout(3, 2, 2, 0)
    assert lay.case == "gpd"
    assert lay.a_zero_mask.size == 0 and lay.b_zero_mask.size == 0


def test_layout_tall_partial_band_zeroes_surplus():
    # delta=1 appended band of 2 blocks per side, only 1 may stay random
    lay = augmentation_layout(3, 2, 2, 1)
    assert (lay.case, lay.delta, lay.t_star, lay.d_star) == ("tall", 1, 4, 3)
    assert lay.a_zero_mask.tolist() == [[False, True]]  # rightmost zeroed
    assert lay.b_zero_mask.tolist() == [[True], [False]]  # topmost zeroed
    assert lay.live_a == [(0, 0)] and lay.live_b == [(1, 0)]


def test_layout_tall_full_band_keeps_everything():
    lay = augmentation_layout(3, 2, 2, 2)
    assert not lay.a_zero_mask.any() and not lay.b_zero_mask.any()
    assert len(lay.live_a) == 2 and len(lay.live_b) == 2


def test_layout_tall_two_band_surplus_sits_in_last_band():
    lay = augmentation_layout(3, 2, 2, 3)
    assert lay.delta == 2
    assert lay.a_zero_mask.tolist() == [[False, False], [False, True]]
    assert lay.b_zero_mask.tolist() == [[False, True], [False, False]]


def test_layout_wide_single_output_row_keeps_corner():
    lay = augmentation_layout(2, 3, 1, 2)
    assert (lay.case, lay.width, lay.s_wide) == ("wide", 2, 5)
    assert lay.a_zero_mask.tolist() == [[True, True], [False, False]]
    assert lay.b_zero_mask.tolist() == [[False], [False]]


def test_layout_wide_padded_bands_face_zeros():
    lay = augmentation_layout(2, 2, 2, 2)
    assert (lay.delta_a, lay.delta_b, lay.width) == (1, 1, 2)
    assert lay.a_zero_mask.tolist() == [[False, True], [False, True]]
    assert lay.b_zero_mask.tolist() == [[True, True], [False, False]]


def test_layout_wide_padded_surplus_masking():
    lay = augmentation_layout(3, 3, 3, 2)
    assert (lay.delta_a, lay.delta_b) == (1, 1)
    assert lay.a_zero_mask[:, 0].tolist() == [False, False, True]
    assert lay.a_zero_mask[:, 1].all()
    assert lay.b_zero_mask[0].all()
    assert lay.b_zero_mask[1].tolist() == [False, False, True]


def test_layout_rejects_negative_collusion():
    with pytest.raises(ConfigurationError):
        augmentation_layout(2, 2, 2, -1)


# ---------------------------------------------------------------------------
# augment
# ---------------------------------------------------------------------------


def test_augment_no_collusion_is_identity(field257):
    rng = np.random.default_rng(3)
    a_arr, b_arr, pair = make_pair(2, 3, 2, 0, field257, rng, bt=2, bs=1, bd=2)
    assert np.array_equal(pair.a_star.data, a_arr)
    assert np.array_equal(pair.b_star.data, b_arr)
    assert pair.random_a.size == 0 and pair.random_b.size == 0


def test_augment_tall_shapes_and_data_preserved(field257):
    rng = np.random.default_rng(4)
    a_arr, b_arr, pair = make_pair(3, 2, 2, 1, field257, rng, bt=2, bs=2, bd=1)
    assert pair.layout.case == "tall"
    assert pair.a_star.grid == (4, 2) and pair.b_star.grid == (2, 3)
    assert np.array_equal(pair.original_a, a_arr)
    assert np.array_equal(pair.original_b, b_arr)
    # zeroed surplus blocks are real zeros in the stacked data
    assert not pair.a_star.block(3, 1).any()
    assert not pair.b_star.block(0, 2).any()
    assert pair.a_star.block(3, 0).any() and pair.b_star.block(1, 2).any()


def test_augment_tall_product_embeds_true_product(field257):
    rng = np.random.default_rng(5)
    a_arr, b_arr, pair = make_pair(4, 1, 2, 3, field257, rng, bt=1, bs=3, bd=2)
    full = multiply(pair.a_star, pair.b_star)
    want = small_matmul(a_arr, b_arr, 257)
    rows, cols = want.shape
    assert np.array_equal(full.data[:rows, :cols], want)


def test_augment_wide_corner_shapes(field257):
    rng = np.random.default_rng(6)
    a_arr, b_arr, pair = make_pair(2, 3, 1, 2, field257, rng, bt=1, bs=2, bd=3)
    assert pair.layout.case == "wide"
    assert pair.a_star.grid == (2, 5) and pair.b_star.grid == (5, 1)
    assert np.array_equal(pair.original_a, a_arr)
    assert np.array_equal(pair.original_b, b_arr)
    # appended A columns are zero except in the last block row
    assert not pair.a_star.block(0, 3).any() and not pair.a_star.block(0, 4).any()
    assert pair.a_star.block(1, 3).any()


def test_augment_wide_padded_product_is_exact(field257):
    # facing zeros cancel every random contribution in the full product
    rng = np.random.default_rng(7)
    a_arr, b_arr, pair = make_pair(2, 2, 2, 2, field257, rng, bt=2, bs=2, bd=2)
    full = multiply(pair.a_star, pair.b_star)
    assert np.array_equal(full.data, small_matmul(a_arr, b_arr, 257))


def test_augment_case_dispatch(field257):
    rng = np.random.default_rng(8)
    a = partition(field257.random_array((4, 2), rng), (4, 2), field257)
    b = partition(field257.random_array((2, 2), rng), (2, 2), field257)
    with pytest.raises(WrongCaseError):
        augment_wide(a, b, 1, rng)
    wide_a = partition(field257.random_array((2, 4), rng), (2, 4), field257)
    wide_b = partition(field257.random_array((4, 2), rng), (4, 2), field257)
    with pytest.raises(WrongCaseError):
        augment_tall(wide_a, wide_b, 1, rng)
    assert augment(a, b, 1, rng).layout.case == "tall"
    assert augment(wide_a, wide_b, 1, rng).layout.case == "wide"


def test_augment_rejects_field_mismatch(field257, field5):
    rng = np.random.default_rng(9)
    a = partition(np.zeros((2, 2)), (2, 2), field257)
    b = partition(np.zeros((2, 2)), (2, 2), field5)
    with pytest.raises(FieldMismatchError):
        augment(a, b, 1, rng)


@given(
    st.integers(1, 4), st.integers(1, 4), st.integers(1, 4),
    st.integers(0, 4), st.integers(0, 2**31),
)
@settings(max_examples=40, deadline=None)
def test_augment_live_random_count_is_exactly_pc(t, s, d, p_c, seed):
    field = PrimeField(257)
    rng = np.random.default_rng(seed)
    a_arr, b_arr, pair = make_pair(t, s, d, p_c, field, rng)
    lay = pair.layout
    if p_c == 0:
        assert lay.case == "gpd"
        return
    # exactly p_c live random blocks per side; the rest of the band is zero
    assert len(lay.live_a) == p_c and len(lay.live_b) == p_c
    assert lay.a_zero_mask.sum() == lay.a_zero_mask.size - p_c
    assert lay.b_zero_mask.sum() == lay.b_zero_mask.size - p_c
    assert np.array_equal(pair.original_a, a_arr)
    assert np.array_equal(pair.original_b, b_arr)


# ---------------------------------------------------------------------------
# matrix files
# ---------------------------------------------------------------------------


def test_matrix_file_round_trip(tmp_path, field257):
    rng = np.random.default_rng(10)
    arr = field257.random_array((5, 3), rng)
    path = tmp_path / "m.mat"
    write_matrix(path, arr, 257)
    back, modulus = read_matrix(path)
    assert modulus == 257
    assert np.array_equal(back, arr)
    header = path.read_text().splitlines()[0]
    assert header == "5 3 257"


def test_matrix_file_rejects_truncation(tmp_path):
    path = tmp_path / "bad.mat"
    path.write_text("2 2 257\n1 2\n")
    with pytest.raises(ConfigurationError):
        read_matrix(path)


def test_matrix_file_rejects_garbage(tmp_path):
    path = tmp_path / "bad.mat"
    path.write_text("2 2 257\n1 2\n3 x\n")
    with pytest.raises(ConfigurationError):
        read_matrix(path)
