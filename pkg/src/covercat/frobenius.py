"""Discrete model of the twisted circle cover and its matrix factorizations.

Points live on a double cover of a circle of circumference two (in
half-turn units) with ``n`` sheets permuted by the holonomy; morphisms
are rational-weight arcs with coefficients in K[[u]], t = u**2.  Matrix
factorizations of t over this category form a Frobenius category whose
stable category is triangulated; distinguished triangles are computed as
concrete pushouts of universal exact sequences.

All coordinates are rationals measured in half-turn units: the value
``x`` stands for the real point ``x*pi``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Optional, Sequence

from .cn import Autoequivalence, MonomialLift, NaturalIso, commutes, project_lift
from .scalars import (
    CYC_ONE,
    Cyclotomic,
    MonomialCoefficient,
    RootOfUnity,
)

# ---------------------------------------------------------------------------
# permutation helpers on 1-based tables


def _apply(table: Sequence[int], i: int) -> int:
    return table[i - 1]


def _inverse_table(table: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(table)
    for i, v in enumerate(table, start=1):
        inv[v - 1] = i
    return tuple(inv)


def _perm_power(table: Sequence[int], k: int, i: int) -> int:
    if k < 0:
        table = _inverse_table(table)
        k = -k
    for _ in range(k):
        i = table[i - 1]
    return i


def _sigma(lift: MonomialLift, i: int) -> int:
    return lift.perm[i - 1]


def _sigma_inv(lift: MonomialLift, i: int) -> int:
    return _inverse_table(lift.perm)[i - 1]


def _c(lift: MonomialLift, i: int) -> RootOfUnity:
    return lift.diag[i - 1]


def _d2(lift: MonomialLift, j: int) -> RootOfUnity:
    """Scalar of the square lift along sheet j: c_{sigma(j)} * c_j."""
    return _c(lift, _sigma(lift, j)) * _c(lift, j)


def _b2(lift: MonomialLift, j: int, i: int) -> RootOfUnity:
    """Transition coefficient of the squared holonomy."""
    return _d2(lift, j) / _d2(lift, i)


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class CoverPoint:
    """A point [x, sheet, sign] of the double cover.

    The identification [x+1, i, e] = [x, sigma(i), -e] makes every point
    equivalent to a positive one; canonical representatives have sign +
    and x in [0, 2).
    """

    x: Fraction
    sheet: int
    sign: int = 1

    def __repr__(self) -> str:
        s = "+" if self.sign > 0 else "-"
        return f"[{self.x},{self.sheet},{s}]"


def canonical_point(p: CoverPoint, lift: MonomialLift) -> CoverPoint:
    x, i = Fraction(p.x), p.sheet
    if p.sign < 0:
        x, i = x - 1, _sigma(lift, i)
    k = floor(x / 2)
    x -= 2 * k
    i = _perm_power(lift.perm, 2 * k, i)
    return CoverPoint(x, i, 1)


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True)
class CoverMorphism:
    """coeff * f_{yx} (x) x_{ji} between canonical positive points.

    The raw target coordinate is determined by the two canonical points:
    it is the unique lift of the target into [source.x, source.x + 2).
    Full turns are extracted into the coefficient as factors d_j * t.
    """

    source: CoverPoint
    target: CoverPoint
    coeff: MonomialCoefficient

    def is_zero(self) -> bool:
        return self.coeff.is_zero()

    def __repr__(self) -> str:
        return f"{self.source}->{self.target} * {self.coeff!r}"


def raw_target(
    m: CoverMorphism, lift: MonomialLift
) -> tuple[Fraction, int]:
    """The target representative lying in [source.x, source.x + 2)."""
    k = 0 if m.target.x >= m.source.x else 1
    return m.target.x + 2 * k, _perm_power(lift.perm, -2 * k, m.target.sheet)


def weight(m: CoverMorphism) -> Fraction:
    k = 0 if m.target.x >= m.source.x else 1
    return m.target.x + 2 * k - m.source.x


def total_weight(m: CoverMorphism) -> Fraction:
    """Arc length including extracted full turns (u-power units)."""
    return weight(m) + m.coeff.upower


def cover_morphism(
    lift: MonomialLift,
    sx: Fraction,
    si: int,
    tx: Fraction,
    ti: int,
    coeff: MonomialCoefficient | None = None,
    ssign: int = 1,
    tsign: int = 1,
) -> CoverMorphism:
    """Build and canonicalize a morphism from raw coordinates."""
    sx, tx = Fraction(sx), Fraction(tx)
    if coeff is None:
        coeff = MonomialCoefficient.one()
    if ssign < 0:
        sx, si = sx - 1, _sigma(lift, si)
    if tsign < 0:
        tx, ti = tx - 1, _sigma(lift, ti)
    if tx < sx:
        raise ValueError("morphisms only run forward along the cover")
    # translate the whole arc so the source lands in [0, 2)
    while sx >= 2:
        coeff = coeff.scale(Cyclotomic.from_root(_b2(lift, ti, si)))
        si = _perm_power(lift.perm, 2, si)
        ti = _perm_power(lift.perm, 2, ti)
        sx, tx = sx - 2, tx - 2
    while sx < 0:
        si = _perm_power(lift.perm, -2, si)
        ti = _perm_power(lift.perm, -2, ti)
        coeff = coeff.scale(
            Cyclotomic.from_root(_b2(lift, ti, si).inverse())
        )
        sx, tx = sx + 2, tx + 2
    # extract full turns from the far end
    while tx >= sx + 2:
        coeff = coeff * MonomialCoefficient(
            Cyclotomic.from_root(_d2(lift, ti)), 2
        )
        ti = _perm_power(lift.perm, 2, ti)
        tx -= 2
    source = CoverPoint(sx, si)
    target = canonical_point(CoverPoint(tx, ti), lift)
    return CoverMorphism(source, target, coeff)


def cover_identity(p: CoverPoint) -> CoverMorphism:
    return CoverMorphism(p, p, MonomialCoefficient.one())


def cover_compose(
    g: CoverMorphism, f: CoverMorphism, lift: MonomialLift
) -> CoverMorphism:
    """g after f; endpoints must agree as points of the cover."""
    if g.source != f.target:
        raise ValueError(
            f"composition endpoints differ: {f.target} vs {g.source}"
        )
    fx, fj = raw_target(f, lift)
    delta = fx - g.source.x
    if delta % 2 != 0 or delta < 0:
        raise AssertionError("endpoint lift mismatch")
    gsx, gsi = g.source.x, g.source.sheet
    gtx, gtj = raw_target(g, lift)
    gcoeff = g.coeff
    for _ in range(int(delta) // 2):
        gsi = _perm_power(lift.perm, -2, gsi)
        gtj = _perm_power(lift.perm, -2, gtj)
        gcoeff = gcoeff.scale(
            Cyclotomic.from_root(_b2(lift, gtj, gsi).inverse())
        )
        gsx, gtx = gsx + 2, gtx + 2
    if gsx != fx or gsi != fj:
        raise AssertionError("endpoint alignment failed")
    return cover_morphism(
        lift, f.source.x, f.source.sheet, gtx, gtj, f.coeff * gcoeff
    )


def basic_between(
    p: CoverPoint, q: CoverPoint, lift: MonomialLift
) -> CoverMorphism:
    """The minimal-weight basic morphism p -> q (coefficient 1)."""
    if q.x >= p.x:
        rx, rj = q.x, q.sheet
    else:
        rx, rj = q.x + 2, _perm_power(lift.perm, -2, q.sheet)
    return cover_morphism(lift, p.x, p.sheet, rx, rj)


def divide_t(m: CoverMorphism) -> CoverMorphism:
    if m.coeff.upower < 2:
        raise ValueError("morphism is not divisible by t")
    return CoverMorphism(
        m.source,
        m.target,
        MonomialCoefficient(m.coeff.scalar, m.coeff.upower - 2),
    )


def _merge_terms(
    terms: Sequence[CoverMorphism],
) -> tuple[CoverMorphism, ...]:
    by_power: dict[int, CoverMorphism] = {}
    for t in terms:
        if t.is_zero():
            continue
        k = t.coeff.upower
        if k in by_power:
            prev = by_power[k]
            if (prev.source, prev.target) != (t.source, t.target):
                raise AssertionError("merging terms with different arcs")
            by_power[k] = CoverMorphism(
                t.source, t.target, prev.coeff + t.coeff
            )
        else:
            by_power[k] = t
    return tuple(
        by_power[k] for k in sorted(by_power) if not by_power[k].is_zero()
    )


# ---------------------------------------------------------------------------
# end matrices (morphisms between formal sums of points)


class EndMatrix:
    """Sparse matrix of K[[u]]-combinations of basic arcs between points."""

    __slots__ = ("rows", "cols", "data")

    def __init__(
        self,
        rows: Sequence[CoverPoint],
        cols: Sequence[CoverPoint],
        data: dict,
    ):
        self.rows = tuple(rows)
        self.cols = tuple(cols)
        clean: dict = {}
        for (r, c), terms in data.items():
            if isinstance(terms, CoverMorphism):
                terms = (terms,)
            merged = _merge_terms(terms)
            if merged:
                for t in merged:
                    if t.source != self.cols[c] or t.target != self.rows[r]:
                        raise AssertionError("entry endpoints disagree")
                clean[(r, c)] = merged
        self.data = clean

    @classmethod
    def identity(cls, points: Sequence[CoverPoint]) -> "EndMatrix":
        return cls(
            points,
            points,
            {(k, k): cover_identity(p) for k, p in enumerate(points)},
        )

    @classmethod
    def zero(cls, rows, cols) -> "EndMatrix":
        return cls(rows, cols, {})

    def entry(self, r: int, c: int) -> tuple[CoverMorphism, ...]:
        return self.data.get((r, c), ())

    def compose(self, other: "EndMatrix", lift: MonomialLift) -> "EndMatrix":
        if self.cols != other.rows:
            raise ValueError("matrix shapes do not line up")
        acc: dict = {}
        for (r, k), terms in self.data.items():
            for (k2, c), terms2 in other.data.items():
                if k2 != k:
                    continue
                prods = [
                    cover_compose(a, b, lift)
                    for a in terms
                    for b in terms2
                ]
                acc.setdefault((r, c), []).extend(prods)
        return EndMatrix(self.rows, other.cols, acc)

    def add(self, other: "EndMatrix") -> "EndMatrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("matrix shapes differ")
        acc: dict = {k: list(v) for k, v in self.data.items()}
        for k, v in other.data.items():
            acc.setdefault(k, []).extend(v)
        return EndMatrix(self.rows, self.cols, acc)

    def scale_root(self, root: RootOfUnity) -> "EndMatrix":
        cy = Cyclotomic.from_root(root)
        return EndMatrix(
            self.rows,
            self.cols,
            {
                k: tuple(
                    CoverMorphism(t.source, t.target, t.coeff.scale(cy))
                    for t in v
                )
                for k, v in self.data.items()
            },
        )

    def __neg__(self) -> "EndMatrix":
        return self.scale_root(RootOfUnity(Fraction(1, 2)))

    def is_zero(self) -> bool:
        return not self.data

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EndMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __repr__(self) -> str:
        return (
            f"EndMatrix({len(self.rows)}x{len(self.cols)}, "
            f"{len(self.data)} entries)"
        )


# ---------------------------------------------------------------------------
# matrix factorizations


class MFObject:
    """M(x, y, i) = ([x,i,-] (+) [y,i,+], d) with |y - x| <= 1.

    The stored coordinates are one representative; the identification
    M(x,y,i) = M(y-1, x-1, sigma(i)) makes representatives with
    x in [0,1) canonical (ties broken towards the larger y).
    """

    __slots__ = ("x", "y", "sheet", "lift")

    def __init__(
        self, x: Fraction, y: Fraction, sheet: int, lift: MonomialLift
    ):
        x, y = Fraction(x), Fraction(y)
        if abs(y - x) > 1:
            raise ValueError("object coordinates must satisfy |y - x| <= 1")
        n = len(lift.perm)
        if not 1 <= sheet <= n:
            raise ValueError("sheet index out of range")
        self.x = x
        self.y = y
        self.sheet = sheet
        self.lift = lift

    def neg_end(self) -> CoverPoint:
        return canonical_point(
            CoverPoint(self.x, self.sheet, -1), self.lift
        )

    def pos_end(self) -> CoverPoint:
        return canonical_point(CoverPoint(self.y, self.sheet, 1), self.lift)

    def ends(self) -> tuple[CoverPoint, CoverPoint]:
        return (self.neg_end(), self.pos_end())

    def is_projective_injective(self) -> bool:
        return abs(self.y - self.x) == 1

    def flipped(self) -> "MFObject":
        return MFObject(
            self.y - 1, self.x - 1, _sigma(self.lift, self.sheet), self.lift
        )

    def canonical(self) -> "MFObject":
        candidates = []
        for rep in (self, self.flipped()):
            k = floor(rep.x / 2)
            candidates.append(
                MFObject(
                    rep.x - 2 * k,
                    rep.y - 2 * k,
                    _perm_power(self.lift.perm, 2 * k, rep.sheet),
                    self.lift,
                )
            )
        # smaller starting coordinate wins; for the two representatives
        # of a projective-injective the upper interval is preferred
        return min(candidates, key=lambda m: (m.x, -m.y))

    def d_minus(self) -> CoverMorphism:
        i = self.sheet
        return cover_morphism(
            self.lift,
            self.x - 1,
            _sigma(self.lift, i),
            self.y,
            i,
            MonomialCoefficient.from_root(_c(self.lift, i).inverse()),
        )

    def d_plus(self) -> CoverMorphism:
        i = self.sheet
        si = _sigma_inv(self.lift, i)
        return cover_morphism(
            self.lift,
            self.y,
            i,
            self.x + 1,
            si,
            MonomialCoefficient.from_root(_c(self.lift, si).inverse()),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MFObject):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return (
            (a.x, a.y, a.sheet) == (b.x, b.y, b.sheet)
            and self.lift.perm == other.lift.perm
            and tuple(self.lift.diag) == tuple(other.lift.diag)
        )

    def __hash__(self) -> int:
        a = self.canonical()
        return hash((a.x, a.y, a.sheet, self.lift.perm))

    def __repr__(self) -> str:
        return f"M({self.x},{self.y},{self.sheet})"

    def to_json(self) -> dict:
        a = self.canonical()
        return {"x": str(a.x), "y": str(a.y), "sheet": a.sheet}

    @classmethod
    def from_json(cls, data: dict, lift: MonomialLift) -> "MFObject":
        return cls(
            Fraction(data["x"]), Fraction(data["y"]), data["sheet"], lift
        )


def mf_canonicalize(M: MFObject) -> MFObject:
    return M.canonical()


def mf_equal(M: MFObject, N: MFObject) -> bool:
    return M == N


def _t_times_identity(p: CoverPoint) -> CoverMorphism:
    return CoverMorphism(p, p, MonomialCoefficient.t())


def make_mf(
    x: Fraction, y: Fraction, i: int, lift: MonomialLift
) -> MFObject:
    """Construct M(x,y,i) and verify both composites equal t times id."""
    M = MFObject(x, y, i, lift)
    dm, dp = M.d_minus(), M.d_plus()
    if cover_compose(dp, dm, lift) != _t_times_identity(M.neg_end()):
        raise AssertionError("d_+ d_- is not t times the identity")
    if cover_compose(dm, dp, lift) != _t_times_identity(M.pos_end()):
        raise AssertionError("d_- d_+ is not t times the identity")
    return M


def apply_sheet_functor(F: Autoequivalence, m, lift: MonomialLift | None = None):
    """Relabel sheets by a functor commuting with the holonomy."""
    if isinstance(m, MFObject):
        lift = m.lift
    if lift is None:
        raise ValueError("a holonomy lift is required")
    if not commutes(project_lift(lift), F):
        raise ValueError("the functor must commute with the holonomy")
    if isinstance(m, CoverPoint):
        p = canonical_point(m, lift)
        return CoverPoint(p.x, _apply(F.object_map, p.sheet), 1)
    if isinstance(m, CoverMorphism):
        rx, rj = raw_target(m, lift)
        coeff = m.coeff.scale(
            Cyclotomic.from_root(F.a(rj, m.source.sheet))
        )
        return cover_morphism(
            lift,
            m.source.x,
            _apply(F.object_map, m.source.sheet),
            rx,
            _apply(F.object_map, rj),
            coeff,
        )
    if isinstance(m, MFObject):
        return MFObject(m.x, m.y, _apply(F.object_map, m.sheet), lift)
    raise TypeError(f"cannot relabel {type(m).__name__}")


# ---------------------------------------------------------------------------
# morphisms of matrix factorizations


def _object_ends(objs: Sequence[MFObject]) -> tuple[CoverPoint, ...]:
    pts: list[CoverPoint] = []
    for o in objs:
        pts.extend(o.ends())
    return tuple(pts)


def d_matrix(objs: Sequence[MFObject], lift: MonomialLift) -> EndMatrix:
    pts = _object_ends(objs)
    data: dict = {}
    for k, o in enumerate(objs):
        data[(2 * k + 1, 2 * k)] = o.d_minus()
        data[(2 * k, 2 * k + 1)] = o.d_plus()
    return EndMatrix(pts, pts, data)


class MFMorphism:
    """A matrix of end components between sums of matrix factorizations."""

    __slots__ = ("source", "target", "matrix", "grade")

    def __init__(
        self,
        source: Sequence[MFObject],
        target: Sequence[MFObject],
        matrix: EndMatrix,
        grade: int | None = None,
    ):
        self.source = tuple(source)
        self.target = tuple(target)
        if matrix.cols != _object_ends(self.source) or matrix.rows != (
            _object_ends(self.target)
        ):
            raise ValueError("matrix does not match the object ends")
        self.matrix = matrix
        self.grade = grade

    @classmethod
    def zero(cls, source, target) -> "MFMorphism":
        return cls(
            source,
            target,
            EndMatrix.zero(_object_ends(target), _object_ends(source)),
        )

    @classmethod
    def identity(cls, objs) -> "MFMorphism":
        return cls(objs, objs, EndMatrix.identity(_object_ends(objs)))

    def lift_ctx(self) -> MonomialLift:
        return (self.source + self.target)[0].lift

    def compose(self, other: "MFMorphism") -> "MFMorphism":
        lift = self.lift_ctx()
        if _object_ends(other.target) != _object_ends(self.source):
            raise ValueError("composition objects do not match")
        return MFMorphism(
            other.source,
            self.target,
            self.matrix.compose(other.matrix, lift),
        )

    def add(self, other: "MFMorphism") -> "MFMorphism":
        return MFMorphism(
            self.source, self.target, self.matrix.add(other.matrix)
        )

    def __neg__(self) -> "MFMorphism":
        return MFMorphism(self.source, self.target, -self.matrix)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def commutes_with_d(self) -> bool:
        lift = self.lift_ctx()
        ds = d_matrix(self.source, lift)
        dt = d_matrix(self.target, lift)
        return self.matrix.compose(ds, lift) == dt.compose(
            self.matrix, lift
        )

    def block(self, ti: int, si: int) -> dict:
        out = {}
        for (a, b) in ((0, 0), (0, 1), (1, 0), (1, 1)):
            terms = self.matrix.entry(2 * ti + a, 2 * si + b)
            if terms:
                out[(a, b)] = terms
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MFMorphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.matrix == other.matrix
        )

    def to_json(self) -> dict:
        comps = []
        for (r, c), terms in sorted(self.matrix.data.items()):
            for t in terms:
                comps.append(
                    [c, r, t.coeff.scalar.serialize(), t.coeff.upower]
                )
        return {
            "source": [o.to_json() for o in self.source],
            "target": [o.to_json() for o in self.target],
            "components": comps,
        }

    def __repr__(self) -> str:
        return (
            f"MFMorphism({list(self.source)} -> {list(self.target)}, "
            f"{len(self.matrix.data)} entries)"
        )


def mf_functor_morphism(F: Autoequivalence, m: MFMorphism) -> MFMorphism:
    lift = m.lift_ctx()
    src = [apply_sheet_functor(F, o) for o in m.source]
    tgt = [apply_sheet_functor(F, o) for o in m.target]
    data: dict = {}
    for key, terms in m.matrix.data.items():
        data[key] = tuple(
            apply_sheet_functor(F, t, lift) for t in terms
        )
    mat = EndMatrix(_object_ends(tgt), _object_ends(src), data)
    return MFMorphism(src, tgt, mat)


# ---------------------------------------------------------------------------
# hom computation


def _hom_generator(M: MFObject, N: MFObject, parity: int) -> MFMorphism:
    lift = M.lift
    mn, mp = M.ends()
    nn, np_ = N.ends()
    if parity == 0:
        try:
            f22 = basic_between(mp, np_, lift)
            f11 = divide_t(
                cover_compose(
                    N.d_plus(),
                    cover_compose(f22, M.d_minus(), lift),
                    lift,
                )
            )
        except ValueError:
            f11 = basic_between(mn, nn, lift)
            f22 = divide_t(
                cover_compose(
                    N.d_minus(),
                    cover_compose(f11, M.d_plus(), lift),
                    lift,
                )
            )
        data = {(0, 0): f11, (1, 1): f22}
        grade = min(f11.coeff.upower, f22.coeff.upower)
    else:
        try:
            f12 = basic_between(mp, nn, lift)
            f21 = divide_t(
                cover_compose(
                    N.d_minus(),
                    cover_compose(f12, M.d_minus(), lift),
                    lift,
                )
            )
        except ValueError:
            f21 = basic_between(mn, np_, lift)
            f12 = divide_t(
                cover_compose(
                    N.d_plus(),
                    cover_compose(f21, M.d_plus(), lift),
                    lift,
                )
            )
        data = {(0, 1): f12, (1, 0): f21}
        grade = min(f12.coeff.upower, f21.coeff.upower)
    mat = EndMatrix(_object_ends([N]), _object_ends([M]), data)
    gen = MFMorphism([M], [N], mat, grade=grade)
    if not gen.commutes_with_d():
        raise AssertionError("constructed hom generator does not commute")
    return gen


def hom_mf(M: MFObject, N: MFObject) -> list[MFMorphism]:
    """The two K[[t]]-module generators of Hom(M, N), graded by u-power."""
    return [_hom_generator(M, N, 0), _hom_generator(M, N, 1)]


# ---------------------------------------------------------------------------
# universal exact sequences


@dataclass
class UniversalSequence:
    source: MFObject
    middle: tuple[MFObject, MFObject]
    target: MFObject
    j: MFMorphism
    p: MFMorphism
    retraction: MFMorphism
    section: MFMorphism
    # rows of the middle carrying the unit entries of j (negative column
    # of the source first), and the columns where p is invertible
    mono_unit_rows: tuple[int, int] = (0, 3)
    iso_cols: tuple[int, int] = (1, 2)


def _orientation_matches(stored: MFObject, x, y, sheet) -> bool:
    """Whether the stored representative has the orientation of (x, y, sheet)."""
    k = floor(Fraction(x) / 2)
    return (stored.x, stored.y, stored.sheet) == (
        x - 2 * k,
        y - 2 * k,
        _perm_power(stored.lift.perm, 2 * k, sheet),
    )


def _validate_triple(
    lift: MonomialLift, tau: Autoequivalence, phi: NaturalIso
) -> Autoequivalence:
    from .cn import check_skew_continuity, is_anti_compatible

    sigma = phi.source
    if project_lift(lift) != sigma:
        raise ValueError("the lift does not present the holonomy of phi")
    if phi.target != tau:
        raise ValueError("phi must target the shift functor")
    if not commutes(sigma, tau):
        raise ValueError("shift functor must commute with the holonomy")
    if not is_anti_compatible(sigma, tau):
        raise ValueError("the pair must be anti-compatible")
    if not check_skew_continuity(phi):
        raise ValueError("phi must be skew-continuous")
    return sigma


def universal_sequence(
    M: MFObject, tau: Autoequivalence, phi: NaturalIso
) -> UniversalSequence:
    """M -> I_{sigma(i)}(x-1) (+) I_i(y) -> F_tau M, split exact."""
    lift = M.lift
    sigma = _validate_triple(lift, tau, phi)
    x, y, i = M.x, M.y, M.sheet
    # the middle and the target are stored canonically so the sequence
    # does not depend on the chosen representative of M
    I1 = MFObject(x, x + 1, i, lift).canonical()
    I2 = MFObject(y + 1, y, i, lift).canonical()
    TM = MFObject(x, y, _apply(tau.object_map, i), lift).canonical()
    # canonical projective-injectives always use the upper interval, so
    # relative to the construction coordinates the slots of I2 swap
    # (its negative slot is the point [y, i], the positive one [y, s(i)])
    if not _orientation_matches(I1, x, x + 1, i):
        raise AssertionError("unexpected orientation of the first middle")
    if _orientation_matches(I2, y + 1, y, i):
        raise AssertionError("unexpected orientation of the second middle")
    first = (I1.x, I1.y, I1.sheet) <= (I2.x, I2.y, I2.sheet)
    mid = (I1, I2) if first else (I2, I1)
    o1, o2 = (0, 2) if first else (2, 0)
    mid_ends = _object_ends(mid)
    m_ends = _object_ends([M])
    si = _sigma(lift, i)

    j_data = {
        (o1 + 0, 0): cover_identity(M.neg_end()),
        (o1 + 1, 1): cover_morphism(lift, y, i, x + 1, i),
        (o2 + 1, 0): cover_morphism(lift, x - 1, si, y, si),
        (o2 + 0, 1): cover_identity(M.pos_end()),
    }
    j = MFMorphism([M], list(mid), EndMatrix(mid_ends, m_ends, j_data))

    # q = (-q_1, q_2) into the shifted object M(y+1, x+1, i), whose ends
    # coincide with those of M(x, y, sigma(i)); then the components of
    # phi carry it to F_tau M.
    s_neg = canonical_point(CoverPoint(y + 1, i, -1), lift)  # = [y, s(i)]
    s_pos = canonical_point(CoverPoint(x + 1, i, 1), lift)
    minus = MonomialCoefficient.from_root(RootOfUnity(Fraction(1, 2)))
    q_data = {
        (0, o1 + 0): cover_morphism(lift, x - 1, si, y, si, minus),
        (1, o1 + 1): CoverMorphism(s_pos, s_pos, minus),
        (0, o2 + 1): cover_identity(s_neg),
        (1, o2 + 0): cover_morphism(lift, y, i, x + 1, i),
    }
    q = EndMatrix((s_neg, s_pos), mid_ends, q_data)

    ci = phi.c[i - 1]
    a_ts = sigma.a(_apply(tau.object_map, i), _apply(sigma.object_map, i))
    tm_row_pos = 1 if _orientation_matches(TM, x, y, _apply(tau.object_map, i)) else 0
    phi_data = {
        # positive ends: c_i at coordinate y
        (tm_row_pos, 0): cover_morphism(
            lift,
            y,
            si,
            y,
            _apply(tau.object_map, i),
            MonomialCoefficient.from_root(ci),
        ),
        # negative ends, translated to positive representatives
        (1 - tm_row_pos, 1): cover_morphism(
            lift,
            x - 1,
            _perm_power(lift.perm, 2, i),
            x - 1,
            _sigma(lift, _apply(tau.object_map, i)),
            MonomialCoefficient.from_root(ci * a_ts),
        ),
    }
    phi_cols = (s_neg, s_pos)
    phi_m = EndMatrix(_object_ends([TM]), phi_cols, phi_data)
    p = MFMorphism(list(mid), [TM], phi_m.compose(q, lift))

    if not p.compose(j).is_zero():
        raise AssertionError("p after j must vanish")

    r_data = {
        (0, o1 + 0): cover_identity(M.neg_end()),
        (1, o2 + 0): cover_identity(M.pos_end()),
    }
    retraction = MFMorphism(
        list(mid), [M], EndMatrix(m_ends, mid_ends, r_data)
    )
    if retraction.compose(j) != MFMorphism.identity([M]):
        raise AssertionError("retraction must split j")

    # section of p: invert the isomorphism components
    iso_cols = (o1 + 1, o2 + 1)
    sec_data: dict = {}
    for (r, c), terms in p.matrix.data.items():
        if len(terms) != 1:
            continue
        t = terms[0]
        if t.coeff.upower != 0 or weight(t) != 0:
            continue
        if c in iso_cols and (c, r) not in sec_data:
            sec_data[(c, r)] = CoverMorphism(
                t.target, t.source, t.coeff.inverse_unit()
            )
    section = MFMorphism(
        [TM], list(mid), EndMatrix(mid_ends, _object_ends([TM]), sec_data)
    )
    if p.compose(section) != MFMorphism.identity([TM]):
        raise AssertionError("section must split p")

    return UniversalSequence(
        M,
        mid,
        TM,
        j,
        p,
        retraction,
        section,
        mono_unit_rows=(o1 + 0, o2 + 0),
        iso_cols=iso_cols,
    )


# ---------------------------------------------------------------------------
# stable reduction


def _part_survives(
    src: MFObject, e_diag_neg, e_diag_pos
) -> Optional[tuple]:
    """Keep the u-power-0 part of a diagonal pair inside the support window."""
    neg0 = tuple(t for t in e_diag_neg if t.coeff.upower == 0)
    pos0 = tuple(t for t in e_diag_pos if t.coeff.upower == 0)
    if not neg0 or not pos0:
        return None
    val11 = weight(neg0[0])
    val22 = weight(pos0[0])
    if val11 >= src.y - src.x + 1:
        return None
    if val22 >= src.x - src.y + 1:
        return None
    return neg0, pos0


def stable_reduce(m: MFMorphism) -> MFMorphism:
    """Project to the stable category.

    Deletes projective-injective summands and zeroes components that are
    divisible by u or whose endpoints leave the support window.
    """
    keep_s = [
        k for k, o in enumerate(m.source) if not o.is_projective_injective()
    ]
    keep_t = [
        k for k, o in enumerate(m.target) if not o.is_projective_injective()
    ]
    src = [m.source[k] for k in keep_s]
    tgt = [m.target[k] for k in keep_t]
    data: dict = {}
    for new_s, ks in enumerate(keep_s):
        for new_t, kt in enumerate(keep_t):
            block = m.block(kt, ks)
            # even part: negative->negative and positive->positive
            even = _part_survives(
                m.source[ks], block.get((0, 0), ()), block.get((1, 1), ())
            )
            if even:
                data[(2 * new_t, 2 * new_s)] = even[0]
                data[(2 * new_t + 1, 2 * new_s + 1)] = even[1]
            # odd part: measured against the flipped source representative,
            # whose negative slot is the stored positive one
            odd = _part_survives(
                m.source[ks].flipped(),
                block.get((0, 1), ()),
                block.get((1, 0), ()),
            )
            if odd:
                data[(2 * new_t, 2 * new_s + 1)] = odd[0]
                data[(2 * new_t + 1, 2 * new_s)] = odd[1]
    mat = EndMatrix(_object_ends(tgt), _object_ends(src), data)
    return MFMorphism(src, tgt, mat)


# ---------------------------------------------------------------------------
# pushout triangles


@dataclass
class Triangle:
    """A distinguished triangle X -> Y -> Z -> F_tau X (stable maps)."""

    X: tuple[MFObject, ...]
    Y: tuple[MFObject, ...]
    Z: tuple[MFObject, ...]
    f: MFMorphism
    g: MFMorphism
    h: MFMorphism
    tau: Autoequivalence
    phi: NaturalIso
    unstable: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "X": [o.to_json() for o in self.X],
            "Y": [o.to_json() for o in self.Y],
            "Z": [o.to_json() for o in self.Z],
            "f": self.f.to_json(),
            "g": self.g.to_json(),
            "h": self.h.to_json(),
            "shift": self.tau.to_json(),
        }


def _min_val_entry(terms) -> Fraction:
    return min(total_weight(t) for t in terms)


def _divide_terms(target_terms, pivot_terms, lift, side):
    """Solve lam with lam o pivot = target ('left') or pivot o lam ('right')."""
    if len(pivot_terms) != 1:
        return None
    piv = pivot_terms[0]
    if not piv.coeff.scalar.is_monomial():
        return None
    lam = []
    for t in target_terms:
        if side == "left":
            base = basic_between(piv.target, t.target, lift)
            comp = cover_compose(base, piv, lift)
        else:
            base = basic_between(t.source, piv.source, lift)
            comp = cover_compose(piv, base, lift)
        m = t.coeff.upower - comp.coeff.upower
        if m < 0 or m % 2 != 0:
            return None
        scalar = t.coeff.scalar * comp.coeff.scalar.inverse()
        lam.append(
            CoverMorphism(
                base.source,
                base.target,
                MonomialCoefficient(scalar, base.coeff.upower + m),
            )
        )
    return tuple(lam)


def _elementary(points, b, a, lam_terms) -> tuple[EndMatrix, EndMatrix]:
    """U = I + E_{b,a} lam and its inverse (a != b)."""
    base = {(k, k): cover_identity(p) for k, p in enumerate(points)}
    u = dict(base)
    u[(b, a)] = lam_terms
    inv = dict(base)
    inv[(b, a)] = tuple(
        CoverMorphism(t.source, t.target, -t.coeff) for t in lam_terms
    )
    return (
        EndMatrix(points, points, u),
        EndMatrix(points, points, inv),
    )


def _split_matrix_factorization(dZ: EndMatrix, lift: MonomialLift):
    """Conjugate d into paired (one entry per row/column) form.

    Returns (d', B, Binv) with d' = B d Binv.  Strategy: repeatedly take
    the entry of globally minimal value (weight plus u-power) among the
    still-active ends as a pivot and clear its entire row and column.
    Minimality guarantees every required division succeeds, and d^2 = t
    then forces the pivot pair to decouple completely.
    """
    points = dZ.rows
    B = EndMatrix.identity(points)
    Binv = EndMatrix.identity(points)
    d = dZ
    active = set(range(len(points)))

    def conjugate(U, Uinv):
        nonlocal d, B, Binv
        d = U.compose(d, lift).compose(Uinv, lift)
        B = U.compose(B, lift)
        Binv = Binv.compose(Uinv, lift)

    def clear_column(r0, c0):
        for _ in range(4 * len(points)):
            others = [r for (r, c) in d.data if c == c0 and r != r0]
            if not others:
                return
            r = others[0]
            lam = _divide_terms(
                d.entry(r, c0), d.entry(r0, c0), lift, "left"
            )
            if lam is None:
                raise AssertionError("column clearing division failed")
            neg = tuple(
                CoverMorphism(t.source, t.target, -t.coeff) for t in lam
            )
            conjugate(*_elementary(points, r, r0, neg))
        raise AssertionError("column clearing did not terminate")

    def clear_row(r0, c0):
        for _ in range(4 * len(points)):
            others = [c for (r, c) in d.data if r == r0 and c != c0]
            if not others:
                return
            c = others[0]
            lam = _divide_terms(
                d.entry(r0, c), d.entry(r0, c0), lift, "right"
            )
            if lam is None:
                raise AssertionError("row clearing division failed")
            conjugate(*_elementary(points, c0, c, lam))
        raise AssertionError("row clearing did not terminate")

    while active:
        candidates = sorted(
            (
                (_min_val_entry(terms), r, c)
                for (r, c), terms in d.data.items()
                if r in active and c in active
            ),
        )
        if not candidates:
            raise AssertionError("active ends carry no differential")
        pivot = next(
            (
                (r, c)
                for _, r, c in candidates
                if len(d.entry(r, c)) == 1
                and d.entry(r, c)[0].coeff.scalar.is_monomial()
            ),
            None,
        )
        if pivot is None:
            raise AssertionError("no usable pivot entry")
        r0, c0 = pivot
        clear_column(r0, c0)
        clear_row(r0, c0)
        # d^2 = t makes the complementary entry the only one left in
        # its row and column; enforce that exactly
        clear_column(c0, r0)
        clear_row(c0, r0)
        for (r, c) in d.data:
            if (r in (r0, c0)) != (c in (r0, c0)):
                raise AssertionError("pivot pair did not decouple")
        active -= {r0, c0}
    return d, B, Binv


def _recognize_component(
    d: EndMatrix, a: int, b: int, lift: MonomialLift
) -> Optional[tuple]:
    """Interpret the end pair (a, b) of a paired d as a standard M(x,y,i).

    The negative end is allowed to sit on the wrong sheet (all sheets
    are isomorphic); the returned data includes the replacement point.
    Returns (M, neg_idx, pos_idx, new_neg_point, scale_at_pos) or None.
    """
    points = d.rows
    for neg, pos in ((a, b), (b, a)):
        dm_terms = d.entry(pos, neg)
        dp_terms = d.entry(neg, pos)
        if len(dm_terms) != 1 or len(dp_terms) != 1:
            continue
        dm_e, dp_e = dm_terms[0], dp_terms[0]
        ppos = points[pos]
        i, y = ppos.sheet, ppos.x
        for x in (points[neg].x + 1, points[neg].x - 1):
            if abs(y - x) > 1:
                continue
            M = MFObject(x, y, i, lift)
            np_ = M.neg_end()
            if np_.x != points[neg].x or M.pos_end() != ppos:
                continue
            # move the negative end onto the sheet of the standard form
            dm_eff = cover_compose(
                dm_e, basic_between(np_, points[neg], lift), lift
            )
            dp_eff = cover_compose(
                basic_between(points[neg], np_, lift), dp_e, lift
            )
            dm_std, dp_std = M.d_minus(), M.d_plus()
            if (
                dm_eff.coeff.upower != dm_std.coeff.upower
                or dp_eff.coeff.upower != dp_std.coeff.upower
            ):
                continue
            if not (
                dm_eff.coeff.scalar.is_monomial()
                and dp_eff.coeff.scalar.is_monomial()
            ):
                continue
            alpha = dm_eff.coeff.scalar * dm_std.coeff.scalar.inverse()
            beta = dp_eff.coeff.scalar * dp_std.coeff.scalar.inverse()
            if not (alpha * beta == CYC_ONE):
                continue
            return M, neg, pos, np_, alpha
    return None


def triangle_from(
    f: MFMorphism, tau: Autoequivalence, phi: NaturalIso
) -> Triangle:
    """The distinguished triangle on f, via the universal-sequence pushout."""
    X, Y = f.source, f.target
    lift = f.lift_ctx()
    seqs = [universal_sequence(M, tau, phi) for M in X]
    IX: list[MFObject] = []
    for s in seqs:
        IX.extend(s.middle)
    TX = [s.target for s in seqs]
    ix_ends = _object_ends(IX)
    y_ends = _object_ends(Y)
    x_ends = _object_ends(X)
    tx_ends = _object_ends(TX)
    n_ix = len(ix_ends)
    E = ix_ends + y_ends

    # block-diagonal J and P
    j_data: dict = {}
    p_data: dict = {}
    for k, s in enumerate(seqs):
        for (r, c), terms in s.j.matrix.data.items():
            j_data[(4 * k + r, 2 * k + c)] = terms
        for (r, c), terms in s.p.matrix.data.items():
            p_data[(2 * k + r, 4 * k + c)] = terms
    J = EndMatrix(ix_ends, x_ends, j_data)
    P = EndMatrix(tx_ends, ix_ends, p_data)

    # columns of the admissible mono (j, -f), and unit pivots
    v_data: dict = dict(j_data)
    for (r, c), terms in f.matrix.data.items():
        v_data[(n_ix + r, c)] = tuple(
            CoverMorphism(t.source, t.target, -t.coeff) for t in terms
        )
    V = EndMatrix(E, x_ends, v_data)
    pivot_of_col = {}
    for k, s in enumerate(seqs):
        neg_row, pos_row = s.mono_unit_rows
        pivot_of_col[2 * k] = 4 * k + neg_row
        pivot_of_col[2 * k + 1] = 4 * k + pos_row
    pivot_rows = set(pivot_of_col.values())
    z_rows = [r for r in range(len(E)) if r not in pivot_rows]
    z_points = tuple(E[r] for r in z_rows)
    z_index = {r: k for k, r in enumerate(z_rows)}

    proj_data: dict = {}
    for k, r in enumerate(z_rows):
        proj_data[(k, r)] = cover_identity(E[r])
    for col, prow in pivot_of_col.items():
        for (r, c), terms in V.data.items():
            if c != col or r == prow:
                continue
            proj_data.setdefault((z_index[r], prow), [])
            proj_data[(z_index[r], prow)] = tuple(
                CoverMorphism(t.source, t.target, -t.coeff) for t in terms
            )
    proj = EndMatrix(z_points, E, proj_data)
    incl = EndMatrix(
        E,
        z_points,
        {(r, k): cover_identity(E[r]) for k, r in enumerate(z_rows)},
    )

    dE_data: dict = {}
    for k, o in enumerate(IX + list(Y)):
        dE_data[(2 * k + 1, 2 * k)] = o.d_minus()
        dE_data[(2 * k, 2 * k + 1)] = o.d_plus()
    dE = EndMatrix(E, E, dE_data)
    dZ = proj.compose(dE, lift).compose(incl, lift)
    if dZ.compose(dZ, lift) != EndMatrix(
        z_points,
        z_points,
        {(k, k): _t_times_identity(p) for k, p in enumerate(z_points)},
    ):
        raise AssertionError("induced differential does not square to t")

    d_split, B, Binv = _split_matrix_factorization(dZ, lift)

    # read off the components and normalize their differentials
    used = set()
    pairs = []
    for (r, c) in d_split.data:
        if r in used or c in used:
            continue
        if (c, r) not in d_split.data:
            raise AssertionError("paired differential is not symmetric")
        used.update((r, c))
        rec = _recognize_component(d_split, r, c, lift)
        if rec is None:
            raise AssertionError("could not recognize a component of Z")
        pairs.append(rec)
    if len(used) != len(z_points):
        raise AssertionError("unpaired ends remain in Z")

    # move negative ends onto the standard sheets and rescale each
    # positive end so the differential is standard
    z2 = list(z_points)
    d_entries = {}
    dinv_entries = {}
    for k, p in enumerate(z_points):
        d_entries[k] = cover_identity(p)
        dinv_entries[k] = cover_identity(p)
    for M, neg, pos, new_neg, alpha in pairs:
        z2[neg] = new_neg
        d_entries[neg] = basic_between(z_points[neg], new_neg, lift)
        dinv_entries[neg] = basic_between(new_neg, z_points[neg], lift)
        d_entries[pos] = CoverMorphism(
            z_points[pos],
            z_points[pos],
            MonomialCoefficient(alpha.inverse()),
        )
        dinv_entries[pos] = CoverMorphism(
            z_points[pos], z_points[pos], MonomialCoefficient(alpha)
        )
    z2 = tuple(z2)
    D = EndMatrix(
        z2, z_points, {(k, k): v for k, v in d_entries.items()}
    )
    Dinv = EndMatrix(
        z_points, z2, {(k, k): v for k, v in dinv_entries.items()}
    )
    B = D.compose(B, lift)
    Binv = Binv.compose(Dinv, lift)

    # order the components deterministically
    pairs.sort(
        key=lambda rec: (
            rec[0].canonical().x,
            rec[0].canonical().y,
            rec[0].canonical().sheet,
        )
    )
    Zobjs = [rec[0] for rec in pairs]
    new_order = []
    for M, neg, pos, _, _ in pairs:
        new_order.extend((neg, pos))
    perm_data = {
        (new_pos, old): cover_identity(z2[old])
        for new_pos, old in enumerate(new_order)
    }
    perm_inv_data = {
        (old, new_pos): cover_identity(z2[old])
        for new_pos, old in enumerate(new_order)
    }
    z_ordered = tuple(z2[old] for old in new_order)
    Pm = EndMatrix(z_ordered, z2, perm_data)
    Pminv = EndMatrix(z2, z_ordered, perm_inv_data)
    B = Pm.compose(B, lift)
    Binv = Binv.compose(Pminv, lift)

    if _object_ends(Zobjs) != z_ordered:
        raise AssertionError("component ends disagree with the basis")
    if B.compose(dZ, lift).compose(Binv, lift) != d_matrix(Zobjs, lift):
        raise AssertionError("differential of Z is not in standard form")

    # structure maps
    full_proj = B.compose(proj, lift)
    g_mat = EndMatrix(
        z_ordered,
        y_ends,
        {
            (r, c - n_ix): terms
            for (r, c), terms in full_proj.data.items()
            if c >= n_ix
        },
    )
    g0 = MFMorphism(list(Y), Zobjs, g_mat)
    h0_data = {}
    P_ext = EndMatrix(
        tx_ends,
        E,
        {(r, c): terms for (r, c), terms in P.data.items()},
    )
    h_mat = P_ext.compose(incl, lift).compose(Binv, lift)
    h0 = MFMorphism(Zobjs, TX, h_mat)

    ix_to_z = MFMorphism(
        IX,
        Zobjs,
        EndMatrix(
            z_ordered,
            ix_ends,
            {
                (r, c): terms
                for (r, c), terms in full_proj.data.items()
                if c < n_ix
            },
        ),
    )
    Jm = MFMorphism(list(X), IX, J)
    if ix_to_z.compose(Jm) != g0.compose(f):
        raise AssertionError("pushout square does not commute")
    if not h0.compose(g0).is_zero():
        raise AssertionError("h after g must vanish before reduction")
    Pmf = MFMorphism(IX, TX, P)
    if h0.compose(ix_to_z) != Pmf:
        raise AssertionError("h does not extend the universal projection")
    if not g0.commutes_with_d() or not h0.commutes_with_d():
        raise AssertionError("structure maps must commute with d")

    fs = stable_reduce(f)
    gs = stable_reduce(g0)
    hs = stable_reduce(h0)
    if not stable_reduce(g0.compose(f)).is_zero():
        raise AssertionError("g after f must be stably zero")
    return Triangle(
        X=tuple(o for o in X if not o.is_projective_injective()),
        Y=tuple(o for o in Y if not o.is_projective_injective()),
        Z=tuple(o for o in Zobjs if not o.is_projective_injective()),
        f=fs,
        g=gs,
        h=hs,
        tau=tau,
        phi=phi,
        unstable={
            "X": tuple(X),
            "Y": tuple(Y),
            "Z": tuple(Zobjs),
            "f": f,
            "g": g0,
            "h": h0,
            "proj": full_proj,
            "incl_cols": z_rows,
            "n_ix": n_ix,
            "IX": tuple(IX),
            "Binv": Binv,
        },
    )


def rotate_triangle(T: Triangle) -> Triangle:
    """(X,Y,Z,f,g,h) -> (Y, Z, F_tau X, g, h, -F_tau f)."""
    u = T.unstable
    rot_f = -mf_functor_morphism(T.tau, u["f"])
    return Triangle(
        X=T.Y,
        Y=T.Z,
        Z=tuple(
            apply_sheet_functor(T.tau, o)
            for o in u["X"]
            if not o.is_projective_injective()
        ),
        f=T.g,
        g=T.h,
        h=stable_reduce(rot_f),
        tau=T.tau,
        phi=T.phi,
        unstable={
            "X": u["Y"],
            "Y": u["Z"],
            "Z": tuple(apply_sheet_functor(T.tau, o) for o in u["X"]),
            "f": u["g"],
            "g": u["h"],
            "h": rot_f,
        },
        notes=dict(T.notes),
    )


def universal_virtual_triangle(
    M: MFObject,
    eps1: Fraction,
    eps2: Fraction,
    tau: Autoequivalence,
    phi: NaturalIso,
) -> Triangle:
    """X -> I1 X (+) I2 X -> Y -> F_tau X with scalars ((1,1),(-1,1),-c_i)."""
    lift = M.lift
    _validate_triple(lift, tau, phi)
    x, y, i = M.x, M.y, M.sheet
    eps1, eps2 = Fraction(eps1), Fraction(eps2)
    if abs(y - x) >= 1:
        raise ValueError("the source must not be projective-injective")
    if not 0 < eps1 < y + 1 - x:
        raise ValueError("eps1 out of the admissible range")
    if not 0 < eps2 < x + 1 - y:
        raise ValueError("eps2 out of the admissible range")
    I1 = make_mf(y + 1 - eps1, y, i, lift)
    I2 = make_mf(x, x + 1 - eps2, i, lift)
    mid = [I1, I2]
    f_data = {
        (0, 0): cover_morphism(
            lift, x - 1, _sigma(lift, i), y - eps1, _sigma(lift, i)
        ),
        (1, 1): cover_identity(M.pos_end()),
        (2, 0): cover_identity(M.neg_end()),
        (3, 1): cover_morphism(lift, y, i, x + 1 - eps2, i),
    }
    fm = MFMorphism(
        [M],
        mid,
        EndMatrix(_object_ends(mid), _object_ends([M]), f_data),
    )
    if not fm.commutes_with_d():
        raise AssertionError("the universal mono must commute with d")
    T = triangle_from(fm, tau, phi)
    expected_Z = MFObject(y + 1 - eps1, x + 1 - eps2, i, lift)
    if list(T.Z) != [expected_Z]:
        raise AssertionError("unexpected cone of the universal mono")
    ci = phi.c[i - 1]
    # scalars are read against the positive ends of the construction
    # representatives, which pins their signs
    tx_pos = canonical_point(
        CoverPoint(y, _apply(tau.object_map, i)), lift
    )
    h_scalar = _block_scalar_at(T.h, 0, 0, tx_pos)
    if h_scalar != Cyclotomic.from_root(-ci):
        raise AssertionError("the connecting scalar must be -c_i")
    for k in range(2):
        if _stable_block_scalar(fm, k, 0) != CYC_ONE:
            raise AssertionError("the first map must have scalars (1, 1)")
    z_pos = canonical_point(CoverPoint(x + 1 - eps2, i), lift)
    g1 = _block_scalar_at(T.g, 0, 0, z_pos)
    g2 = _block_scalar_at(T.g, 0, 1, z_pos)
    if {g1, g2} != {CYC_ONE, -CYC_ONE}:
        raise AssertionError(
            "the middle map must carry scalars 1 and -1"
        )
    T.notes["sign_equivalent_to"] = (
        "the (1,1), (-1,1), -c_i normal form: flip the sign of the "
        "middle map"
    )
    return T


def _stable_block_scalar(m: MFMorphism, ti: int, si: int):
    """The scalar of a surviving block: its minimal-weight u-power-0 term.

    This is only well defined up to sign (the two end components of a
    stable map can carry opposite scalars), which is all the sampling
    checks need.  Use _block_scalar_at to read a scalar against a
    specific end point when the sign matters.
    """
    block = m.block(ti, si)
    best = None
    for terms in block.values():
        for t in terms:
            if t.coeff.upower != 0:
                continue
            if best is None or weight(t) < weight(best):
                best = t
    return None if best is None else best.coeff.scalar


def _block_scalar_at(
    m: MFMorphism, ti: int, si: int, point: CoverPoint
):
    """The scalar of the u-power-0 block term landing on the given end.

    End points of an object do not depend on the chosen representative,
    so anchoring the scalar at a point fixes the sign unambiguously.
    """
    for terms in m.block(ti, si).values():
        for t in terms:
            if t.coeff.upower == 0 and t.target == point:
                return t.coeff.scalar
    return None


# ---------------------------------------------------------------------------
# axiom sampling


def _random_coord(rng: random.Random) -> Fraction:
    return Fraction(rng.randrange(0, 48), 48)


def _random_object(rng: random.Random, lift: MonomialLift) -> MFObject:
    n = len(lift.perm)
    while True:
        x = _random_coord(rng)
        y = x + Fraction(rng.randrange(-47, 48), 48)
        if abs(y - x) < 1:
            return MFObject(x, y, rng.randrange(1, n + 1), lift)


def _generic_partner(
    rng: random.Random, X: MFObject
) -> Optional[MFObject]:
    """A target strictly inside the support window, sharing no ends."""
    n = len(X.lift.perm)
    for _ in range(50):
        dx = Fraction(rng.randrange(1, 48), 48)
        dy = Fraction(rng.randrange(1, 48), 48)
        x2, y2 = X.x + dx, X.y + dy
        if not (X.x < x2 < X.y + 1 and X.y < y2 < X.x + 1):
            continue
        if abs(y2 - x2) >= 1:
            continue
        Y = MFObject(x2, y2, rng.randrange(1, n + 1), X.lift)
        ends = {p.x for p in X.ends()}
        if ends & {p.x for p in Y.ends()}:
            continue
        return Y
    return None


def _end_coordinates(objs: Sequence[MFObject]) -> list[Fraction]:
    return sorted(p.x for o in objs for p in o.ends())


def verify_axiom_samples(
    triple, sample_size: int = 50, seed: int = 0
) -> dict:
    """Sampled checks of the triangulated structure.

    Verifies component counting for generic cones, component drop at
    shared ends, rotation closure against the pushout oracle, and
    completion of commuting squares to morphisms of triangles.
    """
    lift = triple.lift
    tau, phi = triple.tau, triple.phi
    rng = random.Random(seed)
    report = {
        "generic_cones": 0,
        "shared_end_cones": 0,
        "rotations": 0,
        "square_completions": 0,
        "failures": [],
    }

    def run(label, fn):
        try:
            fn()
            report[label] += 1
        except AssertionError as exc:  # pragma: no cover
            report["failures"].append(f"{label}: {exc}")

    squares_done = 0
    attempts = 0
    while (
        report["generic_cones"] < sample_size or squares_done < sample_size
    ) and attempts < 40 * sample_size:
        attempts += 1
        X = _random_object(rng, lift)
        Y = _generic_partner(rng, X)
        if Y is None:
            continue
        gen = hom_mf(X, Y)[0]
        if gen.grade != 0:
            continue

        T = triangle_from(gen, tau, phi)

        def check_generic():
            assert len(T.Z) == 2, "generic cone must keep all components"
            assert _end_coordinates(T.Z) == _end_coordinates(
                list(T.X) + list(T.Y)
            ), "triangles must be exact on ends"

        run("generic_cones", check_generic)

        def check_shared():
            Ys = MFObject(
                X.x, Y.y, Y.sheet, lift
            )  # shares the negative end with X
            gen_s = hom_mf(X, Ys)[0]
            Ts = triangle_from(gen_s, tau, phi)
            assert (
                len(Ts.Z) == 1
            ), "a shared end must drop one stable component"

        run("shared_end_cones", check_shared)

        def check_rotation():
            R = rotate_triangle(T)
            T2 = triangle_from(R.unstable["f"], tau, phi)
            # sheets are all isomorphic in the cover category, so the
            # cone is pinned down by its interval coordinates only
            assert sorted(
                (o.canonical().x, o.canonical().y) for o in T2.Z
            ) == sorted(
                (o.canonical().x, o.canonical().y) for o in R.Z
            ), "rotated cone has the wrong components"
            for a, b in ((0, 0), (0, 1), (1, 0)):
                s1 = _stable_block_scalar(T2.h, a, b)
                s2 = _stable_block_scalar(R.h, a, b)
                if s1 is None or s2 is None:
                    assert s1 is None and s2 is None
                else:
                    assert s1 == s2 or s1 == -s2, (
                        "rotation scalars differ beyond a sign"
                    )

        run("rotations", check_rotation)

        if squares_done < sample_size:
            Y2 = _generic_partner(rng, Y)
            if Y2 is not None:
                v = hom_mf(Y, Y2)[0]
                f2 = v.compose(gen)
                T2 = triangle_from(f2, tau, phi)

                def check_square():
                    w = _complete_square(T, T2, v)
                    assert w.compose(T.unstable["g"]) == T2.unstable[
                        "g"
                    ].compose(v), "completed square g-side mismatch"
                    assert T2.unstable["h"].compose(w) == T.unstable[
                        "h"
                    ], "completed square h-side mismatch"

                run("square_completions", check_square)
                squares_done += 1

    report["all_passed"] = not report["failures"] and (
        report["generic_cones"] >= sample_size
        and report["square_completions"] >= sample_size
    )
    return report


def _complete_square(
    T: Triangle, T2: Triangle, v: MFMorphism
) -> MFMorphism:
    """The induced map of cones for a square with identity on the source."""
    lift = v.lift_ctx()
    u, u2 = T.unstable, T2.unstable
    IX = u["IX"]
    ix_ends = _object_ends(IX)
    y_ends = _object_ends(u["Y"])
    y2_ends = _object_ends(u2["Y"])
    E2 = ix_ends + y2_ends
    n_ix = u["n_ix"]
    block_data: dict = {
        (k, k): cover_identity(p) for k, p in enumerate(ix_ends)
    }
    for (r, c), terms in v.matrix.data.items():
        block_data[(n_ix + r, n_ix + c)] = terms
    blk = EndMatrix(E2, ix_ends + y_ends, block_data)
    incl = EndMatrix(
        ix_ends + y_ends,
        _object_ends(u["Z"]),
        {},
    )
    # lift of Z into E: inverse basis change then inclusion of non-pivot rows
    lift_data: dict = {}
    for (r, c), terms in u["Binv"].data.items():
        lift_data[(u["incl_cols"][r], c)] = terms
    lift_m = EndMatrix(
        ix_ends + y_ends, _object_ends(u["Z"]), lift_data
    )
    w_mat = u2["proj"].compose(blk, lift).compose(lift_m, lift)
    return MFMorphism(list(u["Z"]), list(u2["Z"]), w_mat)
