"""Constructive direct-sum decomposition into lightning flashes.

Over variant B (where both composites of the generators act as zero) a module
splits canonically into a socle layer W and a complement layer V, and the two
actions become a pair of degree-shifting maps V -> W.  Because the shifts
differ, that pair falls apart into independent alternating chains

    T_{k-1}   T_k   T_{k+1}
        \\    /  \\   /
         B_k     B_{k+1}        B_k = V in degree r + k*gap,
                                T_k = W in degree r + k*gap + |e2|,

one chain per residue class r of the degree mod gap = |e2| - |e1|.  Each
chain is reduced left to right by exact elimination.  Partially built
summands ("strands") grow one vertex at a time; when several strands compete
for a pivot, entries may only be cleared in directions that an automorphism
of the already-processed part can compensate.  That admissibility is a total
order on the open ends: a strand whose left end is a dangling top beats every
bottom-ended strand, longer beats shorter among bottom-ended ones and shorter
beats longer among top-ended ones.  Every clearing updates the strand's
realization vectors, so the finished strands are an explicit certified basis
of the module and each strand reads off directly as one flash summand.

The idempotent oracle is an independent second route used for
cross-validation: it knows nothing about strings and splits along Fitting
decompositions of graded endomorphisms found by exact linear algebra.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass

from .linalg import (Field, Matrix, SubspaceBasis, image, intersect, kernel,
                     standard_complement, sum_space)
from .modules import (E1, E2, FlashShape, Module, direct_sum, make_free,
                      validate, zero_module)
from .operators import (action_kernel, degree_part, filtration, socle,
                        stable_intersection)


# ---------------------------------------------------------------------------
# result types


@dataclass(frozen=True)
class Summand:
    """One flash summand with its realization inside the parent module.

    ``bottoms[i]`` is the carrier vector playing x_i; ``tops`` holds pairs
    (index, vector) with index -1 for a dangling left top.
    """

    shape: FlashShape
    bottoms: tuple[tuple, ...]
    tops: tuple[tuple[int, tuple], ...]

    def labeled_vectors(self, params) -> list[tuple[str, int, tuple]]:
        out = [(f"x{i}", self.shape.bottom_degree(i, params), v)
               for i, v in enumerate(self.bottoms)]
        out += [(f"y{i}" if i >= 0 else "ym1", self.shape.top_degree(i, params), v)
                for i, v in self.tops]
        return out


@dataclass(frozen=True)
class Decomposition:
    summands: tuple[Summand, ...]
    residual: tuple = ()

    def multiset(self) -> Counter:
        return Counter(s.shape for s in self.summands)

    def format(self) -> str:
        counts = self.multiset()
        if not counts:
            return "zero module"
        return "\n".join(f"{shape} x{mult}"
                         for shape, mult in sorted(counts.items()))


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    problems: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def _summand_sort_key(s: Summand):
    sh = s.shape
    return (sh.shift, sh.bottoms, sh.left_top, sh.right_top)


# ---------------------------------------------------------------------------
# vector helpers (carrier coordinates as tuples)


def _add_scaled(field: Field, a: tuple, b: tuple, c) -> tuple:
    p = field.characteristic
    if p:
        return tuple((x + c * y) % p for x, y in zip(a, b))
    return tuple(x + c * y for x, y in zip(a, b))


def _scale(field: Field, a: tuple, c) -> tuple:
    p = field.characteristic
    if p:
        return tuple((c * x) % p for x in a)
    return tuple(c * x for x in a)


# ---------------------------------------------------------------------------
# the chain sweep


class _Strand:
    """A summand under construction: a contiguous run of chain positions.

    Even positions 2k are bottoms B_k, odd positions 2k+1 are tops T_k.
    ``strength`` is the admissibility class of the open strand: who may
    absorb whom during elimination.
    """

    __slots__ = ("left_pos", "left_is_top", "right_pos", "vectors")

    def __init__(self, pos: int, is_top: bool, vector: tuple):
        self.left_pos = pos
        self.left_is_top = is_top
        self.right_pos = pos
        self.vectors = {pos: vector}

    @property
    def strength(self) -> tuple[int, int]:
        # dangling-top left ends beat bottom ends; among tops the later start
        # wins, among bottoms the earlier one does
        if self.left_is_top:
            return (1, self.left_pos)
        return (0, -self.left_pos)

    def extend(self, pos: int, vector: tuple) -> None:
        assert pos == self.right_pos + 1
        self.vectors[pos] = vector
        self.right_pos = pos

    def absorb(self, other: "_Strand", c, field: Field) -> None:
        """Add c times the other strand's realization along the overlap."""
        assert self.right_pos == other.right_pos
        assert self.strength >= other.strength, "inadmissible elimination"
        for pos in range(max(self.left_pos, other.left_pos), self.right_pos + 1):
            self.vectors[pos] = _add_scaled(field, self.vectors[pos],
                                            other.vectors[pos], c)


def _alpha_step(field: Field, rows: list[_Strand], top_pos: int,
                cols: list[tuple], act: Matrix) -> list[tuple[_Strand | None, tuple]]:
    """Match fresh bottom vectors against open tops through the e1 action.

    Returns, per column in order, the strand it extends (or None when its
    image was eliminated to zero, so a new strand starts there).
    """
    cols = [tuple(v) for v in cols]
    if not cols:
        return []
    if not rows:
        for v in cols:
            assert not any(act.apply(v)), "action image escapes the socle layer"
        return [(None, v) for v in cols]
    tmat = Matrix.from_cols(field, [s.vectors[top_pos] for s in rows],
                            nrows=act.nrows)
    imgs = Matrix.from_cols(field, [act.apply(v) for v in cols], nrows=act.nrows)
    coeff = tmat.solve(imgs)
    assert coeff is not None, "socle coordinates must exist"
    a = [list(coeff.row(i)) for i in range(len(rows))]
    matched: list[_Strand | None] = [None] * len(cols)
    open_cols = list(range(len(cols)))
    active = [True] * len(rows)
    for strength in sorted({s.strength for s in rows}, reverse=True):
        class_rows = [ri for ri in range(len(rows))
                      if active[ri] and rows[ri].strength == strength]
        for ci in list(open_cols):
            pr = next((ri for ri in class_rows if a[ri][ci]), None)
            if pr is None:
                continue
            if a[pr][ci] != field.one:
                inv = field.inv(a[pr][ci])
                cols[ci] = _scale(field, cols[ci], inv)
                for ri in range(len(rows)):
                    a[ri][ci] = field.mul(a[ri][ci], inv)
            pivot = rows[pr]
            for ri in range(len(rows)):
                c = a[ri][ci]
                if ri != pr and c:
                    # pivot's basis vector soaks up the cleared row's
                    pivot.absorb(rows[ri], c, field)
                    prow = a[pr]
                    a[ri] = [field.sub(x, field.mul(c, y))
                             for x, y in zip(a[ri], prow)]
            for cj in range(len(cols)):
                c2 = a[pr][cj]
                if cj != ci and c2:
                    cols[cj] = _add_scaled(field, cols[cj], cols[ci],
                                           field.neg(c2))
                    for ri in range(len(rows)):
                        a[ri][cj] = field.sub(a[ri][cj],
                                              field.mul(c2, a[ri][ci]))
            matched[ci] = pivot
            open_cols.remove(ci)
            active[pr] = False
            class_rows.remove(pr)
    for ci in open_cols:
        assert not any(a[ri][ci] for ri in range(len(rows)))
    return list(zip(matched, cols))


def _beta_step(field: Field, col_strands: list[_Strand], bottom_pos: int,
               fresh_rows: list[tuple], act: Matrix) -> list[tuple[_Strand | None, tuple]]:
    """Match open bottoms against a fresh socle layer through the e2 action.

    Returns, per fresh row in order, the strand that claimed it (or None for
    a row left untouched, which starts a dangling-top strand).
    """
    rows = [tuple(v) for v in fresh_rows]
    if not rows:
        for s in col_strands:
            assert not any(act.apply(s.vectors[bottom_pos]))
        return []
    if not col_strands:
        return [(None, v) for v in rows]
    rmat = Matrix.from_cols(field, rows, nrows=act.nrows)
    imgs = Matrix.from_cols(field,
                            [act.apply(s.vectors[bottom_pos]) for s in col_strands],
                            nrows=act.nrows)
    coeff = rmat.solve(imgs)
    assert coeff is not None, "socle coordinates must exist"
    b = [list(coeff.row(i)) for i in range(len(rows))]
    claimed: list[_Strand | None] = [None] * len(rows)
    open_rows = list(range(len(rows)))
    done_col = [False] * len(col_strands)
    for strength in sorted({s.strength for s in col_strands}):
        class_cols = [ci for ci in range(len(col_strands))
                      if not done_col[ci] and col_strands[ci].strength == strength]
        for ci in class_cols:
            pr = next((ri for ri in open_rows if b[ri][ci]), None)
            if pr is None:
                continue
            e = b[pr][ci]
            if e != field.one:
                rows[pr] = _scale(field, rows[pr], e)
                inv = field.inv(e)
                b[pr] = [field.mul(x, inv) for x in b[pr]]
            for ri in list(open_rows):
                c = b[ri][ci]
                if ri != pr and c:
                    # fold the other fresh row into the pivot's basis vector
                    rows[pr] = _add_scaled(field, rows[pr], rows[ri], c)
                    prow = b[pr]
                    b[ri] = [field.sub(x, field.mul(c, y))
                             for x, y in zip(b[ri], prow)]
            for cj in range(len(col_strands)):
                c2 = b[pr][cj]
                if cj != ci and c2:
                    col_strands[cj].absorb(col_strands[ci], field.neg(c2), field)
                    for ri in range(len(rows)):
                        b[ri][cj] = field.sub(b[ri][cj],
                                              field.mul(c2, b[ri][ci]))
            col_strands[ci].extend(bottom_pos + 1, rows[pr])
            claimed[pr] = col_strands[ci]
            open_rows.remove(pr)
            done_col[ci] = True
    for ci in range(len(col_strands)):
        if not done_col[ci]:
            assert not any(b[ri][ci] for ri in range(len(rows)))
    return list(zip(claimed, rows))


def _sweep_chain(m: Module, residue: int, bvecs: dict[int, list[tuple]],
                 tvecs: dict[int, list[tuple]]) -> list[Summand]:
    params = m.params
    field = m.field
    g = params.gap
    ks = sorted(set(bvecs) | set(tvecs))
    strands: list[_Strand] = []
    open_tops: dict[int, list[_Strand]] = {}
    for k in range(ks[0], ks[-1] + 1):
        bdeg = residue + k * g
        # alpha: e1 connects B_k down-left to T_{k-1}
        assigned = _alpha_step(field, open_tops.pop(k - 1, []), 2 * k - 1,
                               bvecs.get(k, []), m.action(E1, bdeg))
        open_bottoms: list[_Strand] = []
        for strand, vec in assigned:
            if strand is None:
                strand = _Strand(2 * k, False, vec)
                strands.append(strand)
            else:
                strand.extend(2 * k, vec)
            open_bottoms.append(strand)
        # beta: e2 connects B_k up-right to T_k
        claimed = _beta_step(field, open_bottoms, 2 * k,
                             tvecs.get(k, []), m.action(E2, bdeg))
        nxt: list[_Strand] = []
        for strand, vec in claimed:
            if strand is None:
                strand = _Strand(2 * k + 1, True, vec)
                strands.append(strand)
            nxt.append(strand)
        if nxt:
            open_tops[k] = nxt
    return [_summand_from_strand(s, residue, params) for s in strands]


def _summand_from_strand(strand: _Strand, residue: int, params) -> Summand:
    evens = sorted(p for p in strand.vectors if p % 2 == 0)
    odds = sorted(p for p in strand.vectors if p % 2)

    def bottom_deg(pos: int) -> int:
        return residue + (pos // 2) * params.gap

    def top_deg(pos: int) -> int:
        return residue + ((pos - 1) // 2) * params.gap + params.deg_e2

    if not evens:
        # a socle vector nothing maps onto: a simple summand
        (pos,) = odds
        return Summand(FlashShape.simple(top_deg(pos)),
                       (strand.vectors[pos],), ())
    k0 = evens[0] // 2
    shape = FlashShape.finite(len(evens),
                              left_top=strand.left_is_top,
                              right_top=strand.right_pos % 2 == 1,
                              shift=bottom_deg(evens[0]))
    bottoms = tuple(strand.vectors[p] for p in evens)
    tops = tuple(((p - 1) // 2 - k0, strand.vectors[p]) for p in odds)
    return Summand(shape, bottoms, tops)


def decompose(m: Module) -> Decomposition:
    """Split a valid finite variant-B module into lightning flashes.

    The returned multiset of shapes is an isomorphism invariant; the summand
    vectors are an explicit basis realization checkable with
    :func:`verify_decomposition`.
    """
    if m.params.variant != "B":
        raise ValueError("decompose works over variant B; run split_free first")
    bad = validate(m)
    if bad:
        raise ValueError("invalid module: " + "; ".join(map(str, bad)))
    if m.total_dim == 0:
        return Decomposition(())
    g = m.params.gap
    soc = socle(m)
    chains: dict[int, tuple[dict, dict]] = {}
    for d in m.degrees:
        bott = standard_complement(soc.spaces[d])
        if bott:
            r = d % g
            chains.setdefault(r, ({}, {}))[0][(d - r) // g] = bott
        tops = soc.spaces[d].vectors()
        if tops:
            r = (d - m.params.deg_e2) % g
            chains.setdefault(r, ({}, {}))[1][(d - m.params.deg_e2 - r) // g] = tops
    summands: list[Summand] = []
    for r in sorted(chains):
        summands.extend(_sweep_chain(m, r, *chains[r]))
    return Decomposition(tuple(sorted(summands, key=_summand_sort_key)))


def multiplicities(m: Module) -> Counter:
    """The multiset of flash shapes (with shifts) of a variant-B module."""
    return decompose(m).multiset()


def verify_decomposition(m: Module, dec: Decomposition) -> VerifyResult:
    """Certificate check: degreewise basis plus the exact flash relations."""
    params = m.params
    problems: list[str] = []
    by_degree: dict[int, list[tuple]] = {d: [] for d in m.degrees}

    def put(tag: str, deg: int, vec: tuple) -> None:
        if m.dim(deg) != len(vec) or m.dim(deg) == 0:
            problems.append(f"{tag}: vector does not fit degree {deg}")
        else:
            by_degree[deg].append(vec)

    if dec.residual:
        problems.append("decomposition carries a non-empty residual")
    for si, s in enumerate(dec.summands):
        sh = s.shape
        if sh.kind != "finite":
            problems.append(f"summand {si}: non-finite shape {sh}")
            continue
        if len(s.bottoms) != sh.bottoms or sorted(i for i, _ in s.tops) != sh.top_indices():
            problems.append(f"summand {si}: vector count does not match {sh}")
            continue
        for i, v in enumerate(s.bottoms):
            put(f"summand {si} x{i}", sh.bottom_degree(i, params), v)
        for i, v in s.tops:
            put(f"summand {si} y{i}", sh.top_degree(i, params), v)
    for d, vecs in by_degree.items():
        if len(vecs) != m.dim(d):
            problems.append(f"degree {d}: {len(vecs)} vectors for dimension {m.dim(d)}")
        elif Matrix.from_cols(m.field, vecs, nrows=m.dim(d)).rank() != m.dim(d):
            problems.append(f"degree {d}: realization vectors are dependent")
    for si, s in enumerate(dec.summands):
        sh = s.shape
        if sh.kind != "finite" or len(s.bottoms) != sh.bottoms:
            continue
        tops = dict(s.tops)
        for i, x in enumerate(s.bottoms):
            d = sh.bottom_degree(i, params)
            for which, ti in ((E1, i - 1), (E2, i)):
                got = m.action(which, d).apply(x)
                want = tops.get(ti)
                if want is None:
                    if any(got):
                        problems.append(f"summand {si}: {which} x{i} should vanish")
                elif tuple(got) != tuple(want):
                    problems.append(f"summand {si}: {which} x{i} != y{ti}")
        for ti, y in s.tops:
            d = sh.top_degree(ti, params)
            if any(m.action(E1, d).apply(y)) or any(m.action(E2, d).apply(y)):
                problems.append(f"summand {si}: y{ti} is not in the socle")
    return VerifyResult(not problems, tuple(problems))


def flash_multiplicity_at_degree(m: Module, d: int, n: int) -> int:
    """Multiplicity of the closed flash L(n,0,1) based at degree d.

    Valid when only such flashes touch degree d; the two exclusion probes are
    checked first and reported on failure.
    """
    if not m.action(E1, d).is_zero():
        raise ValueError(f"exclusion failed: e1 does not vanish on degree {d}")
    if degree_part(stable_intersection(m), d).dim:
        raise ValueError("exclusion failed: the stable filtration intersection "
                         f"is nonzero at degree {d}")
    ker1 = action_kernel(m, E1)
    hi = intersect(degree_part(filtration(m, n), d), degree_part(ker1, d)).dim
    lo = intersect(degree_part(filtration(m, n + 1), d), degree_part(ker1, d)).dim
    return hi - lo


# ---------------------------------------------------------------------------
# the independent idempotent oracle


def endomorphism_basis(m: Module) -> list[dict[int, Matrix]]:
    """A basis of the space of degree-0 graded module endomorphisms."""
    field = m.field
    degrees = [d for d in m.degrees]
    sizes = {d: m.dim(d) for d in degrees}
    offsets = {}
    nvars = 0
    for d in degrees:
        offsets[d] = nvars
        nvars += sizes[d] * sizes[d]
    rows: list[list] = []
    for d in degrees:
        nd = sizes[d]
        for which in (E1, E2):
            t = d + m.params.action_degree(which)
            nt = sizes.get(t, 0)
            if nt == 0:
                continue
            act = m.action(which, d)
            if act.is_zero():
                continue
            for i in range(nt):
                for j in range(nd):
                    row = [field.zero] * nvars
                    for k in range(nt):
                        if act[k, j]:
                            idx = offsets[t] + i * nt + k
                            row[idx] = field.add(row[idx], act[k, j])
                    for k in range(nd):
                        if act[i, k]:
                            idx = offsets[d] + k * nd + j
                            row[idx] = field.sub(row[idx], act[i, k])
                    rows.append(row)
    if rows:
        ker = Matrix(field, rows, ncols=nvars).kernel_matrix()
    else:
        ker = Matrix.identity(field, nvars)
    basis = []
    for col in ker.cols():
        phi = {}
        for d in degrees:
            nd = sizes[d]
            chunk = col[offsets[d]:offsets[d] + nd * nd]
            phi[d] = Matrix(field,
                            tuple(tuple(chunk[i * nd:(i + 1) * nd]) for i in range(nd)),
                            ncols=nd, _raw=True)
        basis.append(phi)
    return basis


def _phi_combine(field: Field, terms: list[tuple[object, dict]]) -> dict[int, Matrix]:
    out: dict[int, Matrix] = {}
    for c, phi in terms:
        for d, mat in phi.items():
            scaled = mat.scaled(c)
            out[d] = scaled if d not in out else out[d] + scaled
    return out


def _fitting_split(m: Module, phi: dict[int, Matrix]):
    """Split M = ker(phi^N) + im(phi^N) when both sides are proper."""
    n_total = m.total_dim
    kspaces, ispaces = {}, {}
    kdim = 0
    for d, n in m.dims_by_degree.items():
        power = phi[d].power(n_total)
        k, i = kernel(power), image(power)
        if k.dim + i.dim != n or sum_space(k, i).dim != n:
            raise AssertionError("Fitting decomposition failed to be direct")
        kspaces[d], ispaces[d] = k, i
        kdim += k.dim
    if kdim == 0 or kdim == n_total:
        return None
    return kspaces, ispaces


def _module_from_subspace(m: Module, spaces: dict[int, SubspaceBasis]):
    """A submodule presented on its own basis, plus the embedding matrices."""
    dims = {d: s.dim for d, s in spaces.items() if s.dim}
    emb = {d: spaces[d].basis_matrix() for d in dims}

    def induced(which: str) -> dict[int, Matrix]:
        step = m.params.action_degree(which)
        out = {}
        for d in dims:
            if dims.get(d + step, 0) == 0:
                continue
            sol = emb[d + step].solve(m.action(which, d) @ emb[d])
            if sol is None:
                raise AssertionError("subspace is not closed under the actions")
            out[d] = sol
        return out

    return Module(m.params, dims, induced(E1), induced(E2)), emb


def _split_candidates(m: Module, endos: list[dict[int, Matrix]],
                      rng: random.Random):
    field = m.field
    p = field.characteristic
    yield from endos
    for i in range(len(endos)):
        for j in range(i + 1, len(endos)):
            yield _phi_combine(field, [(field.one, endos[i]), (field.one, endos[j])])
    for i in range(len(endos)):
        for j in range(len(endos)):
            if i != j:
                yield {d: endos[i][d] @ endos[j][d] for d in endos[i]}
    r = len(endos)
    if p and p ** r <= 4096:
        for coeffs in itertools.product(range(p), repeat=r):
            if any(coeffs):
                yield _phi_combine(field, list(zip(coeffs, endos)))
        return
    for _ in range(200):
        coeffs = [rng.randrange(p) if p else rng.randint(-2, 2) for _ in range(r)]
        if any(coeffs):
            yield _phi_combine(field, list(zip(coeffs, endos)))


def _canonical_leaf(cur: Module, emb: dict[int, Matrix]) -> Summand:
    """Read the flash shape off an indecomposable and pick canonical vectors."""
    params = cur.params
    if cur.total_dim == 1:
        (d,) = cur.degrees
        return Summand(FlashShape.simple(d), (emb[d].col(0),), ())
    soc = socle(cur)
    bdegs = [d for d in cur.degrees if soc.spaces[d].dim < cur.dim(d)]
    if not bdegs:
        raise AssertionError("socle-only module of dimension > 1 is decomposable")
    g = params.gap
    shift = min(bdegs)
    b = sum(cur.dim(d) - soc.spaces[d].dim for d in bdegs)
    if bdegs != [shift + i * g for i in range(b)]:
        raise AssertionError("leaf generators do not sit on a single ladder")
    left_top = not cur.action(E1, shift).is_zero()
    right_top = not cur.action(E2, shift + (b - 1) * g).is_zero()
    shape = FlashShape.finite(b, left_top, right_top, shift)
    if shape.dims(params) != cur.dims_by_degree:
        raise AssertionError(f"leaf dimensions do not match shape {shape}")
    xs = [standard_complement(soc.spaces[shift])[0]]
    tops: dict[int, tuple] = {}
    if left_top:
        tops[-1] = cur.action(E1, shift).apply(xs[0])
    for i in range(b):
        d = shift + i * g
        y = cur.action(E2, d).apply(xs[i])
        if i < b - 1:
            if not any(y):
                raise AssertionError("flash walk broke at a middle top")
            tops[i] = y
            nxt = cur.action(E1, d + g).solve_vector(y)
            if nxt is None:
                raise AssertionError("flash walk has no next bottom")
            xs.append(nxt)
        elif right_top:
            tops[i] = y
    bottoms = tuple(emb[shape.bottom_degree(i, params)].apply(x)
                    for i, x in enumerate(xs))
    top_vecs = tuple((i, emb[shape.top_degree(i, params)].apply(v))
                     for i, v in sorted(tops.items()))
    return Summand(shape, bottoms, top_vecs)


def idempotent_oracle(m: Module, max_total_dim: int = 12, seed: int = 0) -> Decomposition:
    """Brute-force decomposition through graded endomorphisms.

    Independent of the string-specific sweep: splits along Fitting
    decompositions of endomorphisms (exhaustively enumerated over small
    coefficient spaces, otherwise sampled), recursing until no candidate
    splits.  The result is verified before it is returned.
    """
    if m.params.variant != "B":
        raise ValueError("the oracle works over variant B")
    if m.total_dim > max_total_dim:
        raise ValueError(f"oracle bound exceeded: dimension {m.total_dim} > "
                         f"{max_total_dim}")
    bad = validate(m)
    if bad:
        raise ValueError("invalid module: " + "; ".join(map(str, bad)))
    rng = random.Random(seed)
    out: list[Summand] = []

    def rec(cur: Module, emb: dict[int, Matrix]) -> None:
        if cur.total_dim == 0:
            return
        endos = endomorphism_basis(cur)
        for phi in _split_candidates(cur, endos, rng):
            split = _fitting_split(cur, phi)
            if split is None:
                continue
            for spaces in split:
                sub, sub_emb = _module_from_subspace(cur, spaces)
                rec(sub, {d: emb[d] @ sub_emb[d] for d in sub.dims_by_degree})
            return
        out.append(_canonical_leaf(cur, emb))

    rec(m, {d: Matrix.identity(m.field, n) for d, n in m.dims_by_degree.items()})
    dec = Decomposition(tuple(sorted(out, key=_summand_sort_key)))
    check = verify_decomposition(m, dec)
    if not check:
        raise AssertionError("oracle certificate failed: " + "; ".join(check.problems))
    return dec


# ---------------------------------------------------------------------------
# free-summand splitting (variant A)


@dataclass(frozen=True)
class FreeSplit:
    """A free direct summand with an explicit complement.

    ``free_ranks[d]`` counts free generators in degree d; the embeddings give
    per-degree column matrices realizing both summands inside the input.
    """

    free_ranks: dict[int, int]
    generators: tuple[tuple[int, tuple], ...]
    free_part: Module
    free_embedding: dict[int, Matrix]
    complement: Module
    complement_embedding: dict[int, Matrix]


def _solve_retraction(m: Module, fmod: Module,
                      iota: dict[int, Matrix]) -> dict[int, Matrix]:
    field = m.field
    sizes = {d: (fmod.dim(d), m.dim(d)) for d in m.degrees}
    offsets = {}
    nvars = 0
    for d in m.degrees:
        offsets[d] = nvars
        fd, nd = sizes[d]
        nvars += fd * nd
    rows: list[list] = []
    rhs: list = []

    def var(d: int, i: int, k: int) -> int:
        return offsets[d] + i * sizes[d][1] + k

    for d in m.degrees:
        fd, nd = sizes[d]
        for which in (E1, E2):
            t = d + m.params.action_degree(which)
            ft, nt = sizes.get(t, (0, 0))
            if ft == 0 or nd == 0:
                # r_t A = A_F r_d still constrains r_d when ft == 0 only if
                # A_F has rows there, which it cannot
                continue
            am = m.action(which, d)
            af = fmod.action(which, d)
            for i in range(ft):
                for j in range(nd):
                    row = [field.zero] * nvars
                    for k in range(nt):
                        if am[k, j]:
                            idx = var(t, i, k)
                            row[idx] = field.add(row[idx], am[k, j])
                    for k in range(fd):
                        if af[i, k]:
                            idx = var(d, k, j)
                            row[idx] = field.sub(row[idx], af[i, k])
                    rows.append(row)
                    rhs.append(field.zero)
        if fd == 0:
            continue
        im = iota[d]
        for i in range(fd):
            for j in range(fd):
                row = [field.zero] * nvars
                for k in range(nd):
                    if im[k, j]:
                        idx = var(d, i, k)
                        row[idx] = field.add(row[idx], im[k, j])
                rows.append(row)
                rhs.append(field.one if i == j else field.zero)
    if not rows:
        return {d: Matrix.zeros(field, sizes[d][0], sizes[d][1]) for d in m.degrees}
    sol = Matrix(field, rows, ncols=nvars).solve(
        Matrix.from_cols(field, [tuple(rhs)]))
    if sol is None:
        raise AssertionError("no retraction onto the free part exists")
    flat = sol.col(0)
    out = {}
    for d in m.degrees:
        fd, nd = sizes[d]
        out[d] = Matrix(field,
                        tuple(tuple(flat[var(d, i, 0):var(d, i, 0) + nd])
                              for i in range(fd)),
                        ncols=nd, _raw=True)
    return out


def split_free(m: Module) -> FreeSplit:
    """Split a variant-A module as free part plus an e1e2-killed complement.

    Generators are lifted from the image of the composite e1 e2; the free
    submodule they span is split off by solving for an exact module
    retraction, whose kernel is the complement.
    """
    if m.params.variant != "A":
        raise ValueError("split_free expects a variant-A module")
    bad = validate(m)
    if bad:
        raise ValueError("invalid module: " + "; ".join(map(str, bad)))
    params = m.params
    field = m.field
    d1, d2 = params.deg_e1, params.deg_e2
    gens: list[tuple[int, tuple]] = []
    for d in m.degrees:
        composite = m.action(E1, d + d2) @ m.action(E2, d)
        for target in image(composite).vectors():
            lift = composite.solve_vector(target)
            gens.append((d, lift))
    if not gens:
        ident = {d: Matrix.identity(field, n) for d, n in m.dims_by_degree.items()}
        return FreeSplit({}, (), zero_module(params), {}, m, ident)
    free_part = direct_sum([make_free(d, params) for d, _ in gens])
    iota_cols: dict[int, list[tuple]] = {}
    for d, gv in gens:
        e1v = m.action(E1, d).apply(gv)
        e2v = m.action(E2, d).apply(gv)
        zv = m.action(E1, d + d2).apply(e2v)
        for deg, vec in ((d, gv), (d + d1, e1v), (d + d2, e2v), (d + d1 + d2, zv)):
            iota_cols.setdefault(deg, []).append(vec)
    iota = {d: Matrix.from_cols(field, iota_cols.get(d, []), nrows=m.dim(d))
            for d in m.degrees}
    for d in free_part.degrees:
        assert iota[d].ncols == free_part.dim(d)
    retraction = _solve_retraction(m, free_part, iota)
    comp_spaces = {d: kernel(retraction[d]) for d in m.degrees}
    complement, comp_emb = _module_from_subspace(m, comp_spaces)
    ranks: dict[int, int] = {}
    for d, _ in gens:
        ranks[d] = ranks.get(d, 0) + 1
    return FreeSplit(ranks, tuple(gens), free_part,
                     {d: iota[d] for d in m.degrees if iota[d].ncols},
                     complement, comp_emb)


def verify_split_free(m: Module, fs: FreeSplit) -> VerifyResult:
    """Certificate check for a free splitting."""
    problems: list[str] = []
    field = m.field
    params = m.params
    for d in m.degrees:
        free_cols = fs.free_embedding.get(d)
        cols = (free_cols.cols() if free_cols is not None else [])
        comp = fs.complement_embedding.get(d)
        cols = cols + (comp.cols() if comp is not None else [])
        if len(cols) != m.dim(d):
            problems.append(f"degree {d}: {len(cols)} vectors for dimension {m.dim(d)}")
        elif Matrix.from_cols(field, cols, nrows=m.dim(d)).rank() != m.dim(d):
            problems.append(f"degree {d}: free + complement is not a direct sum")
    for which in (E1, E2):
        step = params.action_degree(which)
        for d in fs.free_part.degrees:
            lhs = m.action(which, d) @ fs.free_embedding.get(
                d, Matrix.zeros(field, m.dim(d), 0))
            target = fs.free_embedding.get(
                d + step, Matrix.zeros(field, m.dim(d + step), fs.free_part.dim(d + step)))
            rhs = target @ fs.free_part.action(which, d)
            if lhs != rhs:
                problems.append(f"free embedding does not commute with {which} at {d}")
    d1, d2 = params.deg_e1, params.deg_e2
    for d in fs.complement.degrees:
        comp = fs.complement_embedding[d]
        if not (m.action(E1, d + d2) @ m.action(E2, d) @ comp).is_zero():
            problems.append(f"complement is not killed by e1e2 at degree {d}")
    for d in set(fs.free_ranks) | set(_composite_image_dims(m)):
        want = _composite_image_dims(m).get(d, 0)
        if fs.free_ranks.get(d, 0) != want:
            problems.append(f"free rank at degree {d} is {fs.free_ranks.get(d, 0)}, "
                            f"expected {want}")
    return VerifyResult(not problems, tuple(problems))


def _composite_image_dims(m: Module) -> dict[int, int]:
    """dim of the e1e2-image, indexed by the degree of the free generator."""
    out = {}
    for d in m.degrees:
        r = (m.action(E1, d + m.params.deg_e2) @ m.action(E2, d)).rank()
        if r:
            out[d] = r
    return out
