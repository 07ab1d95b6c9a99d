"""Seeded random generators shared across the test modules."""

import random

from extmod.linalg import (Matrix, SubspaceBasis, hstack, image,
                           standard_complement, sum_space)
from extmod.modules import FlashShape, Module, direct_sum, make_flash, validate


def random_matrix(field, nrows, ncols, rng):
    if field.characteristic:
        rows = [[rng.randrange(field.characteristic) for _ in range(ncols)]
                for _ in range(nrows)]
    else:
        rows = [[rng.randint(-4, 4) for _ in range(ncols)] for _ in range(nrows)]
    return Matrix(field, rows, ncols=ncols)


def random_subspace(field, ambient, rng, max_gens=None):
    gens = rng.randint(0, max_gens if max_gens is not None else ambient)
    vectors = [random_matrix(field, 1, ambient, rng).row(0) for _ in range(gens)]
    return SubspaceBasis.from_spanning(field, ambient, vectors)


def random_flash_shapes(rng, count_max=12, bottoms_max=7, shift_max=10):
    return [FlashShape.finite(rng.randint(1, bottoms_max),
                              rng.random() < 0.5,
                              rng.random() < 0.5,
                              rng.randint(0, shift_max))
            for _ in range(rng.randint(1, count_max))]


def flash_sum(shapes, params):
    return direct_sum([make_flash(s, params) for s in shapes], params)


def random_variant_b_module(params, max_total_dim, seed, degree_max=7):
    """A random valid variant-B module (not necessarily a flash sum prior).

    Action matrices are sampled ascending through the degrees; each one is
    forced to kill everything that already arrived from below, which is
    exactly the variant-B axiom set.
    """
    rng = random.Random(seed)
    field = params.field
    total = rng.randint(1, max_total_dim)
    dims = {}
    while sum(dims.values()) < total:
        d = rng.randint(0, degree_max)
        dims[d] = dims.get(d, 0) + 1
    a1, a2 = {}, {}
    for d in sorted(dims):
        n = dims[d]
        arriving = SubspaceBasis.zero(field, n)
        for mats, step in ((a1, params.deg_e1), (a2, params.deg_e2)):
            if d - step in mats:
                arriving = sum_space(arriving, image(mats[d - step]))
        comp = standard_complement(arriving)
        for mats, step in ((a1, params.deg_e1), (a2, params.deg_e2)):
            nt = dims.get(d + step, 0)
            if nt == 0 or not comp:
                continue
            basis = Matrix.from_cols(field, arriving.vectors() + comp, nrows=n)
            rnd = random_matrix(field, nt, len(comp), rng)
            mats[d] = hstack([Matrix.zeros(field, nt, arriving.dim), rnd]) \
                @ basis.inverse()
    m = Module(params, dims, a1, a2)
    assert not validate(m)
    return m
