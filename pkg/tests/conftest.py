"""Shared fixtures and independent oracles.

The oracles recompute what the library claims by a different route: matrix
products by explicit integer triple loops, shares by symbolic polynomial
evaluation built straight from the exponent maps, and the product polynomial
by term-by-term convolution.  None of them call the code paths under test.
"""

from __future__ import annotations

import numpy as np
import pytest

from sgpd import PrimeField, augment, partition


@pytest.fixture(scope="session")
def field257() -> PrimeField:
    return PrimeField(257)


@pytest.fixture(scope="session")
def field65537() -> PrimeField:
    return PrimeField(65537)


@pytest.fixture(scope="session")
def field5() -> PrimeField:
    return PrimeField(5)


def triple_loop_product(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Reference matmul mod p in plain Python integers (arbitrary precision)."""
    rows, inner = a.shape
    inner2, cols = b.shape
    assert inner == inner2
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        for k in range(inner):
            aik = int(a[i, k])
            if aik == 0:
                continue
            for j in range(cols):
                out[i][j] = (out[i][j] + aik * int(b[k, j])) % p
    return np.array(out, dtype=np.int64).reshape(rows, cols)


def small_matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # exact for the tiny blocks used in tests: products stay far below 2**63
    return (a.astype(np.int64) @ b.astype(np.int64)) % p


def product_coefficients(pair, geometry) -> dict:
    """Symbolic convolution of the two encoding polynomials.

    Returns {exponent: coefficient block} for f_A(x) * f_B(x), summing
    A-block x B-block products over every pair of live monomials.
    """
    exps = geometry.exponents
    p = pair.a_star.field.p
    out_shape = (pair.a_star.block_shape[0], pair.b_star.block_shape[1])
    coeffs: dict = {}
    rows_a, cols_a = pair.a_star.grid
    rows_b, cols_b = pair.b_star.grid
    for i in range(rows_a):
        for j in range(cols_a):
            if not exps.a_live[i, j]:
                continue
            e_a = int(exps.a_exponents[i, j])
            blk_a = pair.a_star.block(i, j)
            for k in range(rows_b):
                for l in range(cols_b):
                    if not exps.b_live[k, l]:
                        continue
                    g = e_a + int(exps.b_exponents[k, l])
                    term = small_matmul(blk_a, pair.b_star.block(k, l), p)
                    if g in coeffs:
                        coeffs[g] = (coeffs[g] + term) % p
                    else:
                        coeffs[g] = term
    return coeffs, out_shape


def evaluate_terms(coeffs: dict, x: int, p: int, shape) -> np.ndarray:
    acc = np.zeros(shape, dtype=np.int64)
    for g, mat in coeffs.items():
        acc = (acc + mat * pow(x, g, p)) % p
    return acc


def encoding_terms(block_matrix, exponents: np.ndarray, live: np.ndarray) -> dict:
    """{exponent: block} for one encoding polynomial, read off the map."""
    terms = {}
    rows, cols = block_matrix.grid
    for i in range(rows):
        for j in range(cols):
            if live[i, j]:
                terms[int(exponents[i, j])] = block_matrix.block(i, j)
    return terms


def make_pair(t, s, d, p_c, field, rng, bt=1, bs=1, bd=1):
    """Random input matrices plus their augmented pair for an encoding run."""
    a = field.random_array((t * bt, s * bs), rng)
    b = field.random_array((s * bs, d * bd), rng)
    pair = augment(partition(a, (t, s), field), partition(b, (s, d), field), p_c, rng)
    return a, b, pair
