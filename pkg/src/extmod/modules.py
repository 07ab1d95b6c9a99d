"""Graded modules over a two-generator exterior algebra.

The algebra has generators e1, e2 in positive degrees |e1| < |e2| with
e1^2 = e2^2 = 0 and graded commutation e2*e1 = sigma * e1*e2, where
sigma = (-1)^(|e1|*|e2|) taken in the coefficient field.  Variant "A" is the
full algebra; variant "B" is the quotient in which e1*e2 acts as zero.

A module is a finitely supported graded vector space together with two
families of action matrices raising degree by |e1| and |e2|.  Constructors
here build the string modules of the theory ("lightning flashes"), free
modules, direct sums, shifts, truncations, and seeded basis scrambles.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .linalg import Field, Matrix

E1 = "e1"
E2 = "e2"


@dataclass(frozen=True)
class AlgebraParams:
    """Field, generator degrees and algebra variant."""

    field: Field
    deg_e1: int
    deg_e2: int
    variant: str = "B"

    def __post_init__(self) -> None:
        if not (0 < self.deg_e1 < self.deg_e2):
            raise ValueError(
                f"generator degrees must satisfy 0 < |e1| < |e2|, "
                f"got {self.deg_e1}, {self.deg_e2}")
        if self.variant not in ("A", "B"):
            raise ValueError(f"variant must be 'A' or 'B', got {self.variant!r}")

    @property
    def gap(self) -> int:
        return self.deg_e2 - self.deg_e1

    @property
    def sigma(self):
        """(-1)^(|e1||e2|) as a field element; equals 1 in characteristic 2."""
        one = self.field.one
        if (self.deg_e1 * self.deg_e2) % 2 == 0:
            return one
        return self.field.neg(one)

    def action_degree(self, which: str) -> int:
        if which == E1:
            return self.deg_e1
        if which == E2:
            return self.deg_e2
        raise ValueError(f"unknown action {which!r}")

    def with_variant(self, variant: str) -> "AlgebraParams":
        return AlgebraParams(self.field, self.deg_e1, self.deg_e2, variant)


def default_params(characteristic: int = 2, deg_e1: int = 1, deg_e2: int = 3,
                   variant: str = "B") -> AlgebraParams:
    return AlgebraParams(Field(characteristic), deg_e1, deg_e2, variant)


@dataclass(frozen=True, order=True)
class FlashShape:
    """Canonical combinatorial description of an indecomposable summand.

    ``finite`` flashes have ``bottoms`` generator-layer vectors x_0..x_{b-1}
    and socle-layer tops y_i; ``left_top``/``right_top`` say whether the walk
    ends with a dangling top on that side.  ``shift`` is the degree of x_0
    (or of the generator, for the ``free`` kind).  The printable name follows
    the L(n, eps, eps') convention with n = bottoms - 1.
    """

    kind: str = "finite"  # "finite" | "right_infinite" | "free"
    bottoms: int = 1
    left_top: bool = False
    right_top: bool = False
    shift: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("finite", "right_infinite", "free"):
            raise ValueError(f"unknown shape kind {self.kind!r}")
        if self.kind == "finite" and self.bottoms < 1:
            raise ValueError("a finite flash needs at least one bottom")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def finite(cls, bottoms: int, left_top: bool, right_top: bool,
               shift: int = 0) -> "FlashShape":
        return cls("finite", bottoms, bool(left_top), bool(right_top), shift)

    @classmethod
    def l(cls, n: int, eps: int, eps2: int, shift: int = 0) -> "FlashShape":
        """The flash L(n, eps, eps') based at ``shift``."""
        return cls.finite(n + 1, bool(eps), bool(eps2), shift)

    @classmethod
    def simple(cls, shift: int = 0) -> "FlashShape":
        return cls.finite(1, False, False, shift)

    @classmethod
    def right_infinite(cls, left_top: bool, shift: int = 0) -> "FlashShape":
        return cls("right_infinite", 0, bool(left_top), False, shift)

    @classmethod
    def free(cls, shift: int = 0) -> "FlashShape":
        return cls("free", 0, False, False, shift)

    # -- structure -------------------------------------------------------------

    def top_indices(self) -> list[int]:
        if self.kind != "finite":
            raise ValueError("top_indices is defined for finite shapes")
        idx = [-1] if self.left_top else []
        idx += list(range(self.bottoms - 1))
        if self.right_top:
            idx.append(self.bottoms - 1)
        return idx

    @property
    def total_dim(self) -> int:
        if self.kind != "finite":
            raise ValueError("total_dim is defined for finite shapes")
        return 2 * self.bottoms - 1 + int(self.left_top) + int(self.right_top)

    def bottom_degree(self, i: int, params: AlgebraParams) -> int:
        return self.shift + i * params.gap

    def top_degree(self, i: int, params: AlgebraParams) -> int:
        # works for i = -1: shift - gap + |e2| = shift + |e1|
        return self.shift + i * params.gap + params.deg_e2

    def dims(self, params: AlgebraParams) -> dict[int, int]:
        if self.kind == "free":
            d = self.shift
            return {d: 1, d + params.deg_e1: 1, d + params.deg_e2: 1,
                    d + params.deg_e1 + params.deg_e2: 1}
        if self.kind != "finite":
            raise ValueError("dims is defined for finite and free shapes")
        out: dict[int, int] = {}
        for i in range(self.bottoms):
            deg = self.bottom_degree(i, params)
            out[deg] = out.get(deg, 0) + 1
        for i in self.top_indices():
            deg = self.top_degree(i, params)
            out[deg] = out.get(deg, 0) + 1
        return out

    def shifted(self, d: int) -> "FlashShape":
        return FlashShape(self.kind, self.bottoms, self.left_top, self.right_top,
                          self.shift + d)

    def __str__(self) -> str:
        if self.kind == "free":
            return f"free@{self.shift}"
        if self.kind == "right_infinite":
            return f"L(inf,{int(self.left_top)})@{self.shift}"
        return (f"L({self.bottoms - 1},{int(self.left_top)},{int(self.right_top)})"
                f"@{self.shift}")


@dataclass(frozen=True)
class Violation:
    """A failed module axiom: which relation broke and at which source degree."""

    relation: str
    degree: int

    def __str__(self) -> str:
        return f"{self.relation} fails at degree {self.degree}"


class Module:
    """A graded module: carrier dimensions plus the two action families.

    ``actions[which][d]`` maps the degree-d slice to degree d + |which|;
    absent matrices are zero.  Optional per-degree basis labels are carried
    by the canonical constructors and dropped by basis scrambles; algorithms
    must not depend on them.
    """

    __slots__ = ("params", "dims_by_degree", "_a1", "_a2", "labels")

    def __init__(self, params: AlgebraParams, dims: dict[int, int],
                 a1: dict[int, Matrix], a2: dict[int, Matrix],
                 labels: dict[int, tuple[str, ...]] | None = None):
        self.params = params
        self.dims_by_degree = {d: n for d, n in sorted(dims.items()) if n > 0}
        self._a1 = self._normalize_actions(a1, params.deg_e1)
        self._a2 = self._normalize_actions(a2, params.deg_e2)
        if labels is not None:
            labels = {d: tuple(ls) for d, ls in labels.items() if self.dim(d)}
            for d, ls in labels.items():
                if len(ls) != self.dim(d):
                    raise ValueError(f"label count mismatch at degree {d}")
        self.labels = labels

    def _normalize_actions(self, mats: dict[int, Matrix], step: int) -> dict[int, Matrix]:
        out = {}
        for d, mat in sorted(mats.items()):
            want = (self.dim(d + step), self.dim(d))
            if mat.shape != want:
                raise ValueError(
                    f"action matrix at degree {d} has shape {mat.shape}, expected {want}")
            if not mat.is_zero():
                out[d] = mat
        return out

    # -- views ----------------------------------------------------------------

    @property
    def field(self) -> Field:
        return self.params.field

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(self.dims_by_degree)

    def dim(self, d: int) -> int:
        return self.dims_by_degree.get(d, 0)

    @property
    def total_dim(self) -> int:
        return sum(self.dims_by_degree.values())

    def action(self, which: str, d: int) -> Matrix:
        step = self.params.action_degree(which)
        stored = (self._a1 if which == E1 else self._a2).get(d)
        if stored is not None:
            return stored
        return Matrix.zeros(self.field, self.dim(d + step), self.dim(d))

    def action_items(self, which: str) -> dict[int, Matrix]:
        return dict(self._a1 if which == E1 else self._a2)

    def label_position(self, label: str) -> tuple[int, int]:
        """(degree, index within degree) of a labeled basis vector."""
        if self.labels is None:
            raise KeyError("module carries no basis labels")
        for d, ls in self.labels.items():
            if label in ls:
                return d, ls.index(label)
        raise KeyError(f"no basis vector labeled {label!r}")

    def basis_vector(self, degree: int, index: int) -> tuple:
        f = self.field
        v = [f.zero] * self.dim(degree)
        v[index] = f.one
        return tuple(v)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Module):
            return NotImplemented
        return (self.params == other.params
                and self.dims_by_degree == other.dims_by_degree
                and self._a1 == other._a1 and self._a2 == other._a2)

    __hash__ = None  # mutable-looking container; identity hashing would mislead

    def __repr__(self) -> str:
        return f"Module(dims={self.dims_by_degree})"


def validate(m: Module) -> list[Violation]:
    """All failed axioms; empty exactly when m is a legal module."""
    out: list[Violation] = []
    p = m.params
    for d in m.degrees:
        if m.dim(d) == 0:
            continue
        a1_d = m.action(E1, d)
        a2_d = m.action(E2, d)
        if not (m.action(E1, d + p.deg_e1) @ a1_d).is_zero():
            out.append(Violation("e1e1", d))
        if not (m.action(E2, d + p.deg_e2) @ a2_d).is_zero():
            out.append(Violation("e2e2", d))
        e1e2 = m.action(E1, d + p.deg_e2) @ a2_d
        e2e1 = m.action(E2, d + p.deg_e1) @ a1_d
        if p.variant == "B":
            if not e1e2.is_zero():
                out.append(Violation("e1e2", d))
            if not e2e1.is_zero():
                out.append(Violation("e2e1", d))
        else:
            # graded commutation: e2 e1 = sigma e1 e2
            if e2e1 != e1e2.scaled(p.sigma):
                out.append(Violation("e1e2-commute", d))
    return out


def zero_module(params: AlgebraParams) -> Module:
    return Module(params, {}, {}, {}, labels={})


def _assemble(params: AlgebraParams, elements: list[tuple[str, int, int, int]],
              a1_arrows: dict, a2_arrows: dict) -> Module:
    """Build a module from labeled basis elements and unit-coefficient arrows.

    elements: (label, degree, layer, index) with layer 0 = bottoms, 1 = tops;
    arrows map source label -> target label.
    """
    order = sorted(elements, key=lambda e: (e[1], e[2], e[3]))
    by_degree: dict[int, list[str]] = {}
    position: dict[str, tuple[int, int]] = {}
    for label, degree, _, _ in order:
        slot = by_degree.setdefault(degree, [])
        position[label] = (degree, len(slot))
        slot.append(label)
    dims = {d: len(ls) for d, ls in by_degree.items()}
    field = params.field

    def build(arrows: dict, step: int) -> dict[int, Matrix]:
        mats: dict[int, list[list]] = {}
        for src, tgt in arrows.items():
            d, j = position[src]
            td, i = position[tgt]
            if td != d + step:
                raise AssertionError("arrow degree mismatch in constructor")
            rows = mats.setdefault(d, [[field.zero] * dims[d]
                                       for _ in range(dims.get(d + step, 0))])
            rows[i][j] = field.one
        return {d: Matrix(field, tuple(tuple(r) for r in rows),
                          ncols=dims[d], _raw=True)
                for d, rows in mats.items()}

    labels = {d: tuple(ls) for d, ls in by_degree.items()}
    return Module(params, dims, build(a1_arrows, params.deg_e1),
                  build(a2_arrows, params.deg_e2), labels=labels)


def _top_label(i: int) -> str:
    return f"y{i}" if i >= 0 else "ym1"


def make_flash(shape: FlashShape, params: AlgebraParams) -> Module:
    """The canonical string module of a finite shape.

    Basis x_0..x_{b-1} (bottoms) and y_i (tops) with e1 x_{i+1} = e2 x_i = y_i,
    a dangling y_{-1} = e1 x_0 when the left end is a top, and e2 x_{b-1} =
    y_{b-1} exactly when the right end is one.
    """
    if shape.kind != "finite":
        raise ValueError("make_flash builds finite shapes; "
                         "truncate a right-infinite flash instead")
    tops = set(shape.top_indices())
    elements = [(f"x{i}", shape.bottom_degree(i, params), 0, i)
                for i in range(shape.bottoms)]
    elements += [(_top_label(i), shape.top_degree(i, params), 1, i) for i in sorted(tops)]
    a1 = {f"x{i}": _top_label(i - 1) for i in range(shape.bottoms) if i - 1 in tops}
    a2 = {f"x{i}": _top_label(i) for i in range(shape.bottoms) if i in tops}
    return _assemble(params, elements, a1, a2)


def make_free(gen_degree: int, params: AlgebraParams) -> Module:
    """The free cyclic module on one generator in the given degree (variant A).

    Over variant B the free module is the flash with one bottom and two tops.
    """
    if params.variant != "A":
        raise ValueError("free modules on four basis vectors exist over variant A; "
                         "use make_flash(FlashShape.finite(1, True, True)) over B")
    field = params.field
    d1, d2 = params.deg_e1, params.deg_e2
    d = gen_degree
    degs = [d, d + d1, d + d2, d + d1 + d2]
    dims = {deg: 1 for deg in degs}
    one = Matrix(field, ((field.one,),))
    a1 = {d: one, d + d2: one}
    a2 = {d: one, d + d1: Matrix(field, ((params.sigma,),))}
    labels = {d: ("g",), d + d1: ("e1g",), d + d2: ("e2g",), d + d1 + d2: ("e1e2g",)}
    return Module(params, dims, a1, a2, labels=labels)


def direct_sum(mods: list[Module], params: AlgebraParams | None = None) -> Module:
    """Block-diagonal direct sum; carrier dimensions add degreewise."""
    if not mods:
        if params is None:
            raise ValueError("empty direct sum needs explicit algebra parameters")
        return zero_module(params)
    params = mods[0].params
    if any(m.params != params for m in mods):
        raise ValueError("direct sum of modules over different algebras")
    if len(mods) == 1:
        return mods[0]
    dims: dict[int, int] = {}
    for m in mods:
        for d, n in m.dims_by_degree.items():
            dims[d] = dims.get(d, 0) + n
    field = params.field

    def block(which: str, step: int) -> dict[int, Matrix]:
        out = {}
        for d in dims:
            nrows = dims.get(d + step, 0)
            if nrows == 0:
                continue
            rows = [[field.zero] * dims[d] for _ in range(nrows)]
            roff = coff = 0
            for m in mods:
                a = m.action(which, d)
                for i in range(a.nrows):
                    for j in range(a.ncols):
                        if a[i, j]:
                            rows[roff + i][coff + j] = a[i, j]
                roff += m.dim(d + step)
                coff += m.dim(d)
            out[d] = Matrix(field, tuple(tuple(r) for r in rows), ncols=dims[d], _raw=True)
        return out

    labels = None
    if all(m.labels is not None for m in mods):
        labels = {}
        for d in dims:
            ls: list[str] = []
            for i, m in enumerate(mods):
                ls.extend(f"s{i}.{lab}" for lab in (m.labels or {}).get(d, ()))
            labels[d] = tuple(ls)
    return Module(params, dims, block(E1, params.deg_e1), block(E2, params.deg_e2),
                  labels=labels)


def shift(m: Module, d: int) -> Module:
    """Translate every degree by d."""
    return Module(m.params,
                  {deg + d: n for deg, n in m.dims_by_degree.items()},
                  {deg + d: mat for deg, mat in m.action_items(E1).items()},
                  {deg + d: mat for deg, mat in m.action_items(E2).items()},
                  labels=None if m.labels is None
                  else {deg + d: ls for deg, ls in m.labels.items()})


def truncate_above(m: Module, max_degree: int) -> Module:
    """Quotient by the span of all degrees above the cutoff.

    That span is a submodule because both actions raise degree, so the induced
    maps are just the surviving blocks.
    """
    dims = {d: n for d, n in m.dims_by_degree.items() if d <= max_degree}

    def cut(which: str, step: int) -> dict[int, Matrix]:
        return {d: mat for d, mat in m.action_items(which).items()
                if d <= max_degree and d + step <= max_degree}

    labels = None
    if m.labels is not None:
        labels = {d: ls for d, ls in m.labels.items() if d <= max_degree}
    return Module(m.params, dims, cut(E1, m.params.deg_e1), cut(E2, m.params.deg_e2),
                  labels=labels)


def counterexample_stage(n_max: int, params: AlgebraParams) -> Module:
    """The finite stage: the direct sum of the closed flashes L(n,0,1), n <= n_max."""
    if n_max < 0:
        raise ValueError("stage size must be non-negative")
    return direct_sum([make_flash(FlashShape.l(n, 0, 1), params)
                       for n in range(n_max + 1)])


class TruncatedFlash(NamedTuple):
    """A truncation of a right-infinite flash plus the shapes it realizes."""

    module: Module
    realized: tuple[FlashShape, ...]


def truncated_infinite_flash(left_top: bool, max_degree: int,
                             params: AlgebraParams) -> TruncatedFlash:
    """Quotient of the right-infinite flash by all degrees above the cutoff.

    The result is always finite; ``realized`` records its structure: one main
    flash containing x_0 plus isolated simples for any bottoms whose
    connecting tops were cut away.
    """
    if max_degree < 0:
        return TruncatedFlash(zero_module(params), ())
    g, d1, d2 = params.gap, params.deg_e1, params.deg_e2
    m_x = max_degree // g
    m_y = (max_degree - d2) // g if max_degree >= d2 else -1
    lt_eff = left_top and d1 <= max_degree

    tops = set(range(0, m_y + 1))
    if lt_eff:
        tops.add(-1)
    elements = [(f"x{i}", i * g, 0, i) for i in range(m_x + 1)]
    elements += [(_top_label(i), i * g + d2, 1, i) for i in sorted(tops)]
    a1 = {f"x{i}": _top_label(i - 1) for i in range(m_x + 1) if i - 1 in tops}
    a2 = {f"x{i}": _top_label(i) for i in range(m_x + 1) if i in tops}
    mod = _assemble(params, elements, a1, a2)

    b_main = min(m_x, m_y + 1) + 1
    shapes = [FlashShape.finite(b_main, lt_eff, False)]
    shapes += [FlashShape.simple(j * g) for j in range(m_y + 2, m_x + 1)]
    return TruncatedFlash(mod, tuple(shapes))


def _random_invertible(field: Field, n: int, rng: random.Random) -> Matrix:
    p = field.characteristic
    for _ in range(10000):
        if p:
            rows = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
        else:
            rows = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        mat = Matrix(field, rows)
        if mat.rank() == n:
            return mat
    raise RuntimeError("failed to sample an invertible matrix")


def random_basis_change(m: Module, seed: int) -> Module:
    """Conjugate all actions by a seeded random degreewise change of basis.

    The result is isomorphic to the input; labels are dropped because the
    canonical basis no longer means anything.
    """
    rng = random.Random(seed)
    change = {d: _random_invertible(m.field, n, rng)
              for d, n in m.dims_by_degree.items()}
    inverse = {d: c.inverse() for d, c in change.items()}

    def conj(which: str, step: int) -> dict[int, Matrix]:
        out = {}
        for d in m.degrees:
            if m.dim(d + step) == 0:
                continue
            out[d] = inverse[d + step] @ m.action(which, d) @ change[d]
        return out

    return Module(m.params, dict(m.dims_by_degree),
                  conj(E1, m.params.deg_e1), conj(E2, m.params.deg_e2), labels=None)


def with_variant(m: Module, variant: str) -> Module:
    """Reinterpret the same action data over the other algebra variant.

    Going to variant B demands that both composites e1e2 and e2e1 already act
    as zero; going to A is always legal for a valid B-module.
    """
    out = Module(m.params.with_variant(variant), dict(m.dims_by_degree),
                 m.action_items(E1), m.action_items(E2), labels=m.labels)
    bad = validate(out)
    if bad:
        raise ValueError(f"module is not valid over variant {variant}: "
                         + "; ".join(map(str, bad)))
    return out
