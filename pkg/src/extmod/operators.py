"""Operator calculus on graded modules.

Degreewise subspaces, action images, e2-preimages, the decreasing filtration
F_0 = M, F_j = e2^{-1}(e1 F_{j-1}) with its stabilization, degree slices,
socle and radical, and Margolis homology ker(e)/im(e) for either generator.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import (SubspaceBasis, image, intersect, kernel, preimage_space,
                     quotient_dim, sum_space)
from .modules import E1, E2, Module


class GradedSubspace:
    """A per-degree subspace of a module's carrier, canonical in every degree."""

    __slots__ = ("field", "parent_dims", "spaces")

    def __init__(self, field, parent_dims: dict[int, int],
                 spaces: dict[int, SubspaceBasis]):
        self.field = field
        self.parent_dims = dict(parent_dims)
        self.spaces = {}
        for d, n in self.parent_dims.items():
            sub = spaces.get(d)
            if sub is None:
                raise ValueError(f"missing subspace at degree {d}")
            if sub.ambient_dim != n:
                raise ValueError(f"ambient mismatch at degree {d}")
            self.spaces[d] = sub

    # -- constructors -----------------------------------------------------------

    @classmethod
    def full(cls, m: Module) -> "GradedSubspace":
        return cls(m.field, m.dims_by_degree,
                   {d: SubspaceBasis.full(m.field, n)
                    for d, n in m.dims_by_degree.items()})

    @classmethod
    def zero(cls, m: Module) -> "GradedSubspace":
        return cls(m.field, m.dims_by_degree,
                   {d: SubspaceBasis.zero(m.field, n)
                    for d, n in m.dims_by_degree.items()})

    @classmethod
    def from_degree_vectors(cls, m: Module,
                            vectors: dict[int, list[tuple]]) -> "GradedSubspace":
        spaces = {}
        for d, n in m.dims_by_degree.items():
            spaces[d] = SubspaceBasis.from_spanning(m.field, n, vectors.get(d, []))
        return cls(m.field, m.dims_by_degree, spaces)

    @classmethod
    def from_labels(cls, m: Module, labels) -> "GradedSubspace":
        """Span of the named canonical basis vectors."""
        vectors: dict[int, list[tuple]] = {}
        for label in labels:
            d, i = m.label_position(label)
            vectors.setdefault(d, []).append(m.basis_vector(d, i))
        return cls.from_degree_vectors(m, vectors)

    @classmethod
    def degree_slice(cls, m: Module, d: int) -> "GradedSubspace":
        """Everything in one degree, zero elsewhere."""
        spaces = {deg: (SubspaceBasis.full(m.field, n) if deg == d
                        else SubspaceBasis.zero(m.field, n))
                  for deg, n in m.dims_by_degree.items()}
        return cls(m.field, m.dims_by_degree, spaces)

    # -- views -------------------------------------------------------------------

    def dim_at(self, d: int) -> int:
        sub = self.spaces.get(d)
        return sub.dim if sub is not None else 0

    def dims(self) -> dict[int, int]:
        return {d: s.dim for d, s in self.spaces.items() if s.dim}

    @property
    def total_dim(self) -> int:
        return sum(s.dim for s in self.spaces.values())

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def contains(self, other: "GradedSubspace") -> bool:
        if self.parent_dims != other.parent_dims:
            raise ValueError("subspaces of different carriers")
        return all(self.spaces[d].contains_subspace(other.spaces[d])
                   for d in self.spaces)

    def contains_vector_at(self, d: int, vec) -> bool:
        sub = self.spaces.get(d)
        if sub is None:
            return not any(vec)
        return sub.contains_vector(vec)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedSubspace):
            return NotImplemented
        return self.parent_dims == other.parent_dims and self.spaces == other.spaces

    __hash__ = None

    def __repr__(self) -> str:
        return f"GradedSubspace({self.dims()})"


def _check_ambient(m: Module, u: GradedSubspace) -> None:
    if u.parent_dims != m.dims_by_degree:
        raise ValueError("graded subspace does not live in this module's carrier")


def act_image(m: Module, which: str, u: GradedSubspace) -> GradedSubspace:
    """Degreewise image of u under the chosen action."""
    _check_ambient(m, u)
    step = m.params.action_degree(which)
    field = m.field
    vectors: dict[int, list[tuple]] = {}
    for d, sub in u.spaces.items():
        if sub.dim == 0 or m.dim(d + step) == 0:
            continue
        a = m.action(which, d)
        vectors[d + step] = [a.apply(v) for v in sub.vectors()]
    return GradedSubspace.from_degree_vectors(m, vectors)


def op_preimage(m: Module, which: str, u: GradedSubspace) -> GradedSubspace:
    """Degreewise {v : (action) v lies in u}; always contains the kernel."""
    _check_ambient(m, u)
    step = m.params.action_degree(which)
    field = m.field
    spaces = {}
    for d, n in m.dims_by_degree.items():
        target = u.spaces.get(d + step,
                              SubspaceBasis.zero(field, m.dim(d + step)))
        spaces[d] = preimage_space(m.action(which, d), target)
    return GradedSubspace(m.field, m.dims_by_degree, spaces)


def _filtration_step(m: Module, u: GradedSubspace) -> GradedSubspace:
    return op_preimage(m, E2, act_image(m, E1, u))


def filtration(m: Module, j: int) -> GradedSubspace:
    """The j-th term of the chain F_0 = M, F_j = e2^{-1}(e1 F_{j-1})."""
    if j < 0:
        raise ValueError("filtration index must be non-negative")
    f = GradedSubspace.full(m)
    for _ in range(j):
        f = _filtration_step(m, f)
    return f


@dataclass(frozen=True)
class FiltrationTrace:
    """The chain F_0 >= F_1 >= ... and the first index where it stops moving."""

    subspaces: tuple[GradedSubspace, ...]
    stable_index: int

    def __getitem__(self, j: int) -> GradedSubspace:
        # after stabilization every term equals the stable one
        if j >= len(self.subspaces):
            return self.subspaces[self.stable_index]
        return self.subspaces[j]


def filtration_trace(m: Module, j_max: int) -> FiltrationTrace:
    """Compute the chain out to j_max and past it until it stabilizes.

    Termination is guaranteed: the chain is weakly decreasing and the total
    dimension is finite.
    """
    chain = [GradedSubspace.full(m)]
    stable = None
    while stable is None or len(chain) <= j_max:
        nxt = _filtration_step(m, chain[-1])
        if stable is None and nxt == chain[-1]:
            stable = len(chain) - 1
        chain.append(nxt)
        if len(chain) > m.total_dim + j_max + 2:
            raise AssertionError("filtration failed to stabilize")
    return FiltrationTrace(tuple(chain), stable)


def stable_intersection(m: Module) -> GradedSubspace:
    """The intersection of the whole chain (= its stable term)."""
    trace = filtration_trace(m, 0)
    return trace.subspaces[trace.stable_index]


def degree_part(u: GradedSubspace, d: int) -> SubspaceBasis:
    """The degree-d slice of a graded subspace."""
    sub = u.spaces.get(d)
    if sub is not None:
        return sub
    return SubspaceBasis.zero(u.field, 0)


def action_kernel(m: Module, which: str) -> GradedSubspace:
    return GradedSubspace(m.field, m.dims_by_degree,
                          {d: kernel(m.action(which, d)) for d in m.degrees})


def socle(m: Module) -> GradedSubspace:
    """ker e1 intersected with ker e2, degreewise."""
    spaces = {d: intersect(kernel(m.action(E1, d)), kernel(m.action(E2, d)))
              for d in m.degrees}
    return GradedSubspace(m.field, m.dims_by_degree, spaces)


def radical(m: Module) -> GradedSubspace:
    """im e1 + im e2, degreewise."""
    p = m.params
    field = m.field
    spaces = {}
    for d, n in m.dims_by_degree.items():
        parts = SubspaceBasis.zero(field, n)
        for which, step in ((E1, p.deg_e1), (E2, p.deg_e2)):
            if m.dim(d - step):
                parts = sum_space(parts, image(m.action(which, d - step)))
        spaces[d] = parts
    return GradedSubspace(m.field, m.dims_by_degree, spaces)


def margolis_homology(m: Module, which: str) -> dict[int, int]:
    """Degreewise dim ker(e)/im(e); well-defined because e squares to zero.

    Only nonzero entries appear in the result.
    """
    step = m.params.action_degree(which)
    out = {}
    for d in m.degrees:
        k = m.dim(d) - m.action(which, d).rank()
        i = m.action(which, d - step).rank() if m.dim(d - step) else 0
        if k - i:
            out[d] = k - i
    return out


def quotient_dim_at(u: GradedSubspace, v: GradedSubspace, d: int) -> int:
    """dim of the degree-d slice of u/v for a contained pair (checked)."""
    return quotient_dim(degree_part(u, d), degree_part(v, d))


def graded_intersect(u: GradedSubspace, v: GradedSubspace) -> GradedSubspace:
    if u.parent_dims != v.parent_dims:
        raise ValueError("subspaces of different carriers")
    return GradedSubspace(u.field, u.parent_dims,
                          {d: intersect(u.spaces[d], v.spaces[d]) for d in u.spaces})
