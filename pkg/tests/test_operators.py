import random

import pytest

from extmod.modules import (E1, E2, FlashShape, default_params, direct_sum,
                            make_flash, make_free, random_basis_change, shift)
from extmod.operators import (GradedSubspace, act_image, action_kernel,
                              degree_part, filtration, filtration_trace,
                              margolis_homology, op_preimage, radical, socle,
                              stable_intersection)
from extmod.modules import counterexample_stage
from helpers import flash_sum, random_flash_shapes, random_variant_b_module

P = default_params()
PA = default_params(variant="A")


def span(m, *labels):
    return GradedSubspace.from_labels(m, labels)


def test_act_image_examples():
    m2 = make_flash(FlashShape.l(2, 0, 1), P)
    assert act_image(m2, E1, GradedSubspace.full(m2)) == span(m2, "y0", "y1")
    m1 = make_flash(FlashShape.l(1, 0, 1), P)
    assert act_image(m1, E2, GradedSubspace.full(m1)) == span(m1, "y0", "y1")
    assert act_image(m1, E1, GradedSubspace.zero(m1)).is_zero()


def test_op_preimage_examples():
    for n in (1, 2, 3):
        m = make_flash(FlashShape.l(n, 0, 1), P)
        e1m = act_image(m, E1, GradedSubspace.full(m))
        pre = op_preimage(m, E2, e1m)
        everything_but_xn = [f"x{i}" for i in range(n)] + \
            [f"y{i}" for i in range(n + 1)]
        assert pre == span(m, *everything_but_xn)
    m1 = make_flash(FlashShape.l(1, 0, 1), P)
    assert op_preimage(m1, E2, GradedSubspace.full(m1)) == GradedSubspace.full(m1)
    assert op_preimage(m1, E2, GradedSubspace.zero(m1)) == span(m1, "y0", "y1")


def test_filtration_examples():
    m2 = make_flash(FlashShape.l(2, 0, 1), P)
    assert filtration(m2, 0) == GradedSubspace.full(m2)
    assert filtration(m2, 1) == span(m2, "x0", "x1", "y0", "y1", "y2")
    tops = span(m2, "y0", "y1", "y2")
    for j in (3, 4, 5):
        assert filtration(m2, j) == tops


def test_filtration_chain_decreases_and_stabilizes():
    rng = random.Random(5)
    cases = [flash_sum(random_flash_shapes(rng, 4, 4, 6), P) for _ in range(3)]
    cases += [random_variant_b_module(P, 8, seed) for seed in (1, 2)]
    cases += [random_basis_change(cases[0], 9)]
    for m in cases:
        trace = filtration_trace(m, 4)
        for j in range(len(trace.subspaces) - 1):
            assert trace.subspaces[j].contains(trace.subspaces[j + 1])
        assert trace.stable_index <= m.total_dim
        assert trace.subspaces[trace.stable_index] == \
            trace.subspaces[trace.stable_index + 1]


def test_preimage_image_adjunction():
    rng = random.Random(6)
    for seed in range(5):
        m = random_variant_b_module(P, 8, 100 + seed)
        u = GradedSubspace.from_degree_vectors(
            m, {d: [m.basis_vector(d, rng.randrange(m.dim(d)))]
                for d in m.degrees if rng.random() < 0.6})
        assert op_preimage(m, E2, act_image(m, E2, u)).contains(u)
        assert u.contains(act_image(m, E2, op_preimage(m, E2, u)))


@pytest.mark.parametrize("n", range(13))
def test_bottom_membership_law(n):
    # the canonical x0 belongs to F_j exactly while j <= n
    m = make_flash(FlashShape.l(n, 0, 1), P)
    x0 = m.basis_vector(*m.label_position("x0"))
    trace = filtration_trace(m, n + 2)
    for j in range(n + 3):
        assert degree_part(trace[j], 0).contains_vector(x0) == (j <= n)


def test_open_ended_flash_never_expels_x0():
    for n in (0, 1, 2, 4):
        m = make_flash(FlashShape.l(n, 0, 0), P)
        x0 = m.basis_vector(*m.label_position("x0"))
        trace = filtration_trace(m, 2 * n + 3)
        for j in range(2 * n + 4):
            assert degree_part(trace[j], 0).contains_vector(x0)
        assert stable_intersection(m) == GradedSubspace.full(m)


def test_stable_intersection_examples():
    stage = counterexample_stage(3, P)
    assert degree_part(stable_intersection(stage), 0).dim == 0
    from extmod.modules import zero_module
    assert stable_intersection(zero_module(P)).is_zero()


def test_degree_part_examples():
    m = make_flash(FlashShape.l(3, 0, 1), P)
    assert degree_part(GradedSubspace.full(m), 0).dim == 1
    assert degree_part(GradedSubspace.full(m), 100).dim == 0
    stage = counterexample_stage(4, P)
    assert degree_part(filtration(stage, 2), 0).dim == 3


def test_socle_and_radical():
    m1 = make_flash(FlashShape.l(1, 0, 1), P)
    assert socle(m1) == span(m1, "y0", "y1")
    simple = make_flash(FlashShape.simple(), P)
    assert socle(simple) == GradedSubspace.full(simple)
    free = make_free(0, PA)
    assert radical(free) == GradedSubspace.from_labels(
        free, ["e1g", "e2g", "e1e2g"])
    for seed in range(4):
        m = random_variant_b_module(P, 9, 200 + seed)
        assert socle(m).contains(radical(m))


def test_margolis_examples():
    free = make_free(0, PA)
    assert margolis_homology(free, E1) == {}
    assert margolis_homology(free, E2) == {}
    for n in range(9):
        m = make_flash(FlashShape.l(n, 0, 1), P)
        assert margolis_homology(m, E2) == {}
        assert margolis_homology(m, E1) == {0: 1, n * P.gap + P.deg_e2: 1}
    m2 = make_flash(FlashShape.l(2, 0, 1), P)
    assert margolis_homology(m2, E1) == {0: 1, 7: 1}


def test_margolis_additive_and_invariant():
    rng = random.Random(8)
    for seed in range(4):
        shapes = random_flash_shapes(rng, 4, 4, 5)
        mods = [make_flash(s, P) for s in shapes]
        total = direct_sum(mods, P)
        for which in (E1, E2):
            summed = {}
            for m in mods:
                for d, k in margolis_homology(m, which).items():
                    summed[d] = summed.get(d, 0) + k
            assert margolis_homology(total, which) == summed
            scrambled = random_basis_change(total, 300 + seed)
            assert margolis_homology(scrambled, which) == summed


def test_operators_commute_with_shift():
    m = flash_sum([FlashShape.l(2, 0, 1), FlashShape.finite(2, True, False, 1)], P)
    moved = shift(m, 5)
    for j in (0, 1, 2, 3):
        left = filtration(moved, j)
        right = filtration(m, j)
        assert left.dims() == {d + 5: k for d, k in right.dims().items()}
        assert all(left.spaces[d + 5] == right.spaces[d]
                   for d in right.spaces)
    assert margolis_homology(moved, E1) == \
        {d + 5: k for d, k in margolis_homology(m, E1).items()}


def test_action_kernel():
    m1 = make_flash(FlashShape.l(1, 0, 1), P)
    assert action_kernel(m1, E2) == span(m1, "y0", "y1")
    assert action_kernel(m1, E1) == span(m1, "x0", "y0", "y1")


def test_ambient_mismatch_rejected():
    m1 = make_flash(FlashShape.l(1, 0, 1), P)
    m2 = make_flash(FlashShape.l(2, 0, 1), P)
    with pytest.raises(ValueError):
        act_image(m2, E1, GradedSubspace.full(m1))
