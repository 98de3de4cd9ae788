"""The finite category with one-dimensional hom sets and its symmetries.

The category has objects 1..n and, for every ordered pair, a basis
morphism ``x[i,j] : j -> i`` subject to ``x[i,j] x[j,k] = x[i,k]``.  An
autoequivalence is determined by a map on objects together with a
multiplicative system ``a_ij`` of scalars, which always takes the
fraction form ``a_ij = c_i / c_j``; we store the normalized vector ``c``
with ``c_1 = 1``.

Everything here is an immutable value; object indices are 1-based
throughout, matching the JSON interchange format.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .scalars import (
    CYC_ONE,
    MINUS_ONE,
    ONE,
    Cyclotomic,
    RootOfUnity,
)


class BasicMorphismCn:
    """A scalar multiple of the basis morphism ``x[target, source]``.

    The zero scalar is allowed, so composition and functor application
    are total.
    """

    __slots__ = ("source", "target", "scalar")

    def __init__(self, source: int, target: int, scalar: Cyclotomic = CYC_ONE):
        self.source = int(source)
        self.target = int(target)
        self.scalar = scalar

    def is_zero(self) -> bool:
        return self.scalar.is_zero()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BasicMorphismCn):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.scalar == other.scalar
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.scalar))

    def __repr__(self) -> str:
        return (
            f"BasicMorphismCn({self.source} -> {self.target}, "
            f"{self.scalar!r})"
        )


def compose_basic(g: BasicMorphismCn, f: BasicMorphismCn) -> BasicMorphismCn:
    """Compose ``g`` after ``f``: scalars multiply, endpoints chain."""
    if f.target != g.source:
        raise ValueError(
            f"cannot compose: inner endpoints differ "
            f"({f.target} != {g.source})"
        )
    return BasicMorphismCn(f.source, g.target, g.scalar * f.scalar)


class Autoequivalence:
    """An endofunctor given by an object map and transition coefficients.

    ``object_map`` is a 1-based table (``object_map[i-1]`` is the image
    of object ``i``); it need not be a bijection.  The action on basis
    morphisms is ``x[i,j] -> a_ij * x[F(i), F(j)]`` with
    ``a_ij = coeff[i-1] / coeff[j-1]``, which makes the cocycle identity
    ``a_ij * a_jk = a_ik`` automatic.  The coefficient vector is
    normalized so its first entry is 1; this is the unique such
    representative.
    """

    __slots__ = ("n", "object_map", "coeff")

    def __init__(
        self,
        n: int,
        object_map: Sequence[int],
        coeff: Sequence[RootOfUnity] | None = None,
    ):
        if n < 1:
            raise ValueError("n must be positive")
        object_map = tuple(int(v) for v in object_map)
        if len(object_map) != n or not all(1 <= v <= n for v in object_map):
            raise ValueError("object map must send [n] into [n]")
        if coeff is None:
            coeff = (ONE,) * n
        else:
            coeff = tuple(coeff)
            if len(coeff) != n:
                raise ValueError("coefficient vector must have length n")
            # normalize the representative: divide through by c_1
            if not coeff[0].is_one():
                c1 = coeff[0]
                coeff = tuple(c / c1 for c in coeff)
        self.n = n
        self.object_map = object_map
        self.coeff = coeff

    @classmethod
    def identity(cls, n: int) -> "Autoequivalence":
        return cls(n, range(1, n + 1))

    def is_automorphism(self) -> bool:
        return len(set(self.object_map)) == self.n

    def __call__(self, i: int) -> int:
        """Image of object ``i`` (1-based)."""
        return self.object_map[i - 1]

    def a(self, i: int, j: int) -> RootOfUnity:
        """Transition coefficient ``a_ij = c_i / c_j``."""
        return self.coeff[i - 1] / self.coeff[j - 1]

    def compose(self, other: "Autoequivalence") -> "Autoequivalence":
        """The composite ``self after other`` (same action order as maps)."""
        if self.n != other.n:
            raise ValueError("cannot compose functors on different sizes")
        object_map = [self(other(i)) for i in range(1, self.n + 1)]
        coeff = [
            other.coeff[i] * self.coeff[other.object_map[i] - 1]
            for i in range(self.n)
        ]
        return Autoequivalence(self.n, object_map, coeff)

    def inverse(self) -> "Autoequivalence":
        if not self.is_automorphism():
            raise ValueError("only automorphisms are invertible")
        inv_map = [0] * self.n
        for i in range(1, self.n + 1):
            inv_map[self(i) - 1] = i
        coeff = [self.coeff[inv_map[i] - 1].inverse() for i in range(self.n)]
        return Autoequivalence(self.n, inv_map, coeff)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Autoequivalence):
            return NotImplemented
        return (
            self.n == other.n
            and self.object_map == other.object_map
            and self.coeff == other.coeff
        )

    def __hash__(self) -> int:
        return hash((self.n, self.object_map, self.coeff))

    def __repr__(self) -> str:
        coeffs = ", ".join(str(c) for c in self.coeff)
        return f"Autoequivalence(n={self.n}, map={self.object_map}, c=[{coeffs}])"

    # -- JSON interchange ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "object_map": list(self.object_map),
            "coeff": [str(c) for c in self.coeff],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Autoequivalence":
        return cls(
            int(data["n"]),
            data["object_map"],
            [RootOfUnity.from_string(s) for s in data["coeff"]],
        )


def apply_functor(F: Autoequivalence, m: BasicMorphismCn) -> BasicMorphismCn:
    """Image of a morphism: endpoints mapped, scalar multiplied by ``a_ij``."""
    factor = F.a(m.target, m.source)
    return BasicMorphismCn(
        F(m.source), F(m.target), m.scalar * Cyclotomic.from_root(factor)
    )


def commutes(s: Autoequivalence, t: Autoequivalence) -> bool:
    """Whether two endofunctors commute on the nose.

    The object maps must commute pointwise and the coefficient systems
    must satisfy ``a[t(i),t(j)] * b[i,j] == a[i,j] * b[s(i),s(j)]`` for
    all pairs, where ``a`` and ``b`` belong to ``s`` and ``t``.
    """
    if s.n != t.n:
        raise ValueError("sizes differ")
    n = s.n
    for i in range(1, n + 1):
        if s(t(i)) != t(s(i)):
            return False
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            lhs = s.a(t(i), t(j)) * t.a(i, j)
            rhs = s.a(i, j) * t.a(s(i), s(j))
            if lhs != rhs:
                return False
    return True


class NaturalIso:
    """A natural isomorphism between two autoequivalences.

    Component ``i`` is ``c[i-1] * x[t(i), s(i)]``.  Naturality means
    ``c_j * a_ji == b_ji * c_i`` for all ``i, j`` where ``a`` belongs to
    the source functor and ``b`` to the target one.
    """

    __slots__ = ("source", "target", "c")

    def __init__(
        self,
        source: Autoequivalence,
        target: Autoequivalence,
        c: Sequence[RootOfUnity],
    ):
        if source.n != target.n:
            raise ValueError("sizes differ")
        self.source = source
        self.target = target
        self.c = tuple(c)
        if len(self.c) != source.n:
            raise ValueError("component vector must have length n")

    def component(self, i: int) -> BasicMorphismCn:
        return BasicMorphismCn(
            self.source(i),
            self.target(i),
            Cyclotomic.from_root(self.c[i - 1]),
        )

    def is_natural(self) -> bool:
        n = self.source.n
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if (
                    self.c[j - 1] * self.source.a(j, i)
                    != self.target.a(j, i) * self.c[i - 1]
                ):
                    return False
        return True

    def __repr__(self) -> str:
        return f"NaturalIso(c=[{', '.join(str(x) for x in self.c)}])"


def natural_iso(s: Autoequivalence, t: Autoequivalence) -> NaturalIso:
    """The canonical natural isomorphism between two autoequivalences.

    With both coefficient vectors normalized at the first object, the
    component scalars come out as ``c_i = a_1i * b_i1`` and the
    naturality squares close automatically.
    """
    if s.n != t.n:
        raise ValueError("sizes differ")
    c = [
        s.a(1, i) * t.a(i, 1)
        for i in range(1, s.n + 1)
    ]
    phi = NaturalIso(s, t, c)
    assert phi.is_natural()
    return phi


def continuity_factor(s: Autoequivalence, t: Autoequivalence) -> RootOfUnity:
    """The obstruction scalar pairing a commuting pair of symmetries.

    For a commuting pair with ``s`` invertible, the quantity
    ``a[t(i), s(i)] * c_i / c_{s(i)}`` built from any natural
    isomorphism between the functors is independent of ``i`` and of the
    isomorphism's rescaling; that common value is returned.  The pair is
    called compatible when it is 1 and anti-compatible when it is -1.
    """
    if not s.is_automorphism():
        raise ValueError("first argument must be an automorphism")
    if not commutes(s, t):
        raise ValueError("functors do not commute")
    phi = natural_iso(s, t)
    values = {
        s.a(t(i), s(i)) * phi.c[i - 1] / phi.c[s(i) - 1]
        for i in range(1, s.n + 1)
    }
    if len(values) != 1:
        raise AssertionError(
            "continuity factor is not constant across objects: "
            f"{sorted(str(v) for v in values)}"
        )
    return values.pop()


def is_anti_compatible(s: Autoequivalence, t: Autoequivalence) -> bool:
    """Whether the continuity factor of the commuting pair equals -1."""
    return continuity_factor(s, t) == MINUS_ONE


def check_skew_continuity(phi: NaturalIso) -> bool:
    """Test the sign-twisted continuity equation on every component.

    Returns true iff ``c_{s(i)} == -c_i * a[t(i), s(i)]`` for all ``i``,
    where ``s`` is the source object map and ``a`` its coefficients.
    """
    s, t = phi.source, phi.target
    for i in range(1, s.n + 1):
        if phi.c[s(i) - 1] != -(phi.c[i - 1] * s.a(t(i), s(i))):
            return False
    return True


def conjugate_pair(
    rho: Autoequivalence, s: Autoequivalence, t: Autoequivalence
) -> tuple[Autoequivalence, Autoequivalence]:
    """Simultaneous conjugation of a pair by an automorphism.

    Preserves commutation and the continuity factor, so it acts on
    isomorphism classes of pairs.
    """
    if not rho.is_automorphism():
        raise ValueError("conjugator must be an automorphism")
    rho_inv = rho.inverse()
    return (
        rho.compose(s).compose(rho_inv),
        rho.compose(t).compose(rho_inv),
    )


class MonomialLift:
    """A permutation together with a diagonal of roots of unity.

    Elements ``P * D`` of the monomial matrix group; two lifts project
    onto the same automorphism exactly when they differ by a global
    scalar.
    """

    __slots__ = ("perm", "diag")

    def __init__(self, perm: Sequence[int], diag: Sequence[RootOfUnity]):
        self.perm = tuple(int(v) for v in perm)
        self.diag = tuple(diag)
        n = len(self.perm)
        if sorted(self.perm) != list(range(1, n + 1)):
            raise ValueError("perm must be a permutation of 1..n")
        if len(self.diag) != n:
            raise ValueError("diag must have length n")

    def __repr__(self) -> str:
        return (
            f"MonomialLift(perm={self.perm}, "
            f"diag=[{', '.join(str(d) for d in self.diag)}])"
        )


def lift_to_monomial(s: Autoequivalence) -> MonomialLift:
    """A monomial-matrix representative of an automorphism."""
    if not s.is_automorphism():
        raise ValueError("only automorphisms lift to monomial matrices")
    return MonomialLift(s.object_map, s.coeff)


def project_lift(m: MonomialLift) -> Autoequivalence:
    """The automorphism presented by a monomial matrix.

    The diagonal enters only through the ratios ``d_i / d_j``, so a
    global scalar is forgotten; the constructor renormalizes.
    """
    return Autoequivalence(len(m.perm), m.perm, m.diag)
