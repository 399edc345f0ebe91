"""Local obstruction classes, the mod-8 residue filtration, the
change-of-variables / spin pipeline over Z[i], and the quaternary form
attached to a bend vector, with its discriminant, definiteness,
isotropy, and local residue classes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Set, Tuple

from .config import BendVector
from .groups import GroupElement, IntRows, _rows
from .ring import Mat


# ---------------------------------------------------------------------------
# local obstruction mod 4


@dataclass(frozen=True)
class ObstructionClass:
    """epsilon in {+1, -1}; bends never hit -epsilon mod 4."""

    epsilon: int

    def __post_init__(self):
        if self.epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")

    @property
    def forbidden_residue(self) -> int:
        return (-self.epsilon) % 4

    def admits(self, n: int) -> bool:
        return n % 4 != self.forbidden_residue


def _canonical_pairs_mod(tup8: Sequence[int], mod: int) -> Tuple[int, ...]:
    """Canonical form of an 8-tuple under signed permutations: sort each
    disjoint pair (b_k, b_{k+4}), then sort the four pairs."""
    pairs = sorted(tuple(sorted((tup8[k] % mod, tup8[k + 4] % mod)))
                   for k in range(4))
    return tuple(p[0] for p in pairs) + tuple(p[1] for p in pairs)


_PATTERN_PLUS = _canonical_pairs_mod((0, 0, 1, 1, 2, 2, 1, 1), 4)
_PATTERN_MINUS = _canonical_pairs_mod((0, 0, 3, 3, 2, 2, 3, 3), 4)


def epsilon_of(bends8: Sequence[int]) -> ObstructionClass:
    """The unique epsilon whose mod-4 pattern (0,0,eps,eps,2,2,eps,eps)
    matches the eight bends up to admissible reordering."""
    if len(bends8) != 8:
        raise ValueError("epsilon_of takes the eight bends of a configuration")
    canon = _canonical_pairs_mod([int(b) for b in bends8], 4)
    if canon == _PATTERN_PLUS:
        return ObstructionClass(1)
    if canon == _PATTERN_MINUS:
        return ObstructionClass(-1)
    raise ValueError(
        f"no valid epsilon: bends {tuple(bends8)} do not reduce to a "
        "primitive configuration pattern mod 4"
    )


def epsilon_of_bend_vector(bv: BendVector) -> ObstructionClass:
    return epsilon_of([int(b) for b in bv.bends8()])


# ---------------------------------------------------------------------------
# mod-8 enumeration


@dataclass(frozen=True)
class FiltrationReport:
    solutions_mod8: int
    tuples8: int
    after_even_removal: int
    after_pair_ordering: int
    representatives: Tuple[Tuple[int, ...], ...]
    mod4_classes: Tuple[Tuple[int, ...], ...]

    @property
    def after_full_ordering(self) -> int:
        return len(self.representatives)


def _descartes_int(b1: int, b2: int, b3: int, b4: int, mu: int) -> int:
    return 2 * mu * mu - 2 * mu * (b1 + b2 + b3 + b4) + (
        b1 * b1 + b2 * b2 + b3 * b3 + b4 * b4)


def enumerate_mod8() -> FiltrationReport:
    """Brute-force the Descartes cone over Z/8 and filter down to the two
    mod-4 classes behind the local obstruction.

    Stages: all 5-vectors mod 8 on the cone; expansion to 8-tuples via
    complements (two mu per doubled value collapse); removal of all-even
    tuples; one representative per pair ordering b_k <= b_{k+4}; then
    per full ordering b_1 <= ... <= b_4; finally reduction mod 4 with
    signed-permutation dedupe.
    """
    sols5 = [v for v in itertools.product(range(8), repeat=5)
             if _descartes_int(*v) % 8 == 0]
    tuples8 = set()
    for b1, b2, b3, b4, mu in sols5:
        two_mu = 2 * mu
        tuples8.add((b1, b2, b3, b4,
                     (two_mu - b1) % 8, (two_mu - b2) % 8,
                     (two_mu - b3) % 8, (two_mu - b4) % 8))
    not_even = {t for t in tuples8 if any(x % 2 for x in t)}
    pair_ordered = {t for t in not_even
                    if all(t[k] <= t[k + 4] for k in range(4))}
    reps = tuple(sorted(t for t in pair_ordered
                        if t[0] <= t[1] <= t[2] <= t[3]))
    mod4 = tuple(sorted({_canonical_pairs_mod(t, 4) for t in reps}))
    return FiltrationReport(
        solutions_mod8=len(sols5),
        tuples8=len(tuples8),
        after_even_removal=len(not_even),
        after_pair_ordering=len(pair_ordered),
        representatives=reps,
        mod4_classes=mod4,
    )


# ---------------------------------------------------------------------------
# Gaussian integers and the spin pipeline


class GaussianInt:
    """An element of Z[i] with arbitrary-precision components."""

    __slots__ = ("re", "im")

    def __init__(self, re: int = 0, im: int = 0):
        object.__setattr__(self, "re", int(re))
        object.__setattr__(self, "im", int(im))

    def __setattr__(self, *a):
        raise AttributeError("GaussianInt is immutable")

    @classmethod
    def coerce(cls, x) -> "GaussianInt":
        if isinstance(x, GaussianInt):
            return x
        if isinstance(x, int):
            return cls(x, 0)
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussianInt")

    def __eq__(self, other) -> bool:
        other = GaussianInt.coerce(other) if isinstance(other, int) else other
        if not isinstance(other, GaussianInt):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re or self.im)

    def __add__(self, other):
        other = GaussianInt.coerce(other)
        return GaussianInt(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianInt(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianInt.coerce(other))

    def __rsub__(self, other):
        return (-self) + GaussianInt.coerce(other)

    def __mul__(self, other):
        other = GaussianInt.coerce(other)
        return GaussianInt(self.re * other.re - self.im * other.im,
                           self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def conj(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def is_unit(self) -> bool:
        return self.norm() == 1

    def __divmod__(self, other: "GaussianInt"):
        other = GaussianInt.coerce(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("Gaussian division by zero")
        num = self * other.conj()

        def nearest(a: int) -> int:  # floor(a/n + 1/2)
            return (2 * a + n) // (2 * n)

        q = GaussianInt(nearest(num.re), nearest(num.im))
        return q, self - q * other

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        return f"{self.re}{self.im:+}i"

    def __repr__(self):
        return f"GaussianInt({self.re}, {self.im})"


GI_ZERO = GaussianInt(0, 0)
GI_ONE = GaussianInt(1, 0)
GI_I = GaussianInt(0, 1)


def gaussian_xgcd(a: GaussianInt, b: GaussianInt):
    """(g, u, v) with u*a + v*b = g, via the nearest-rounding Euclid."""
    r0, r1 = a, b
    u0, u1 = GI_ONE, GI_ZERO
    v0, v1 = GI_ZERO, GI_ONE
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    return r0, u0, v0


@dataclass(frozen=True)
class MobiusPair:
    """A unimodular 2x2 matrix over Z[i], identified with its negation."""

    alpha: GaussianInt
    beta: GaussianInt
    gamma: GaussianInt
    delta: GaussianInt

    def __post_init__(self):
        for f in ("alpha", "beta", "gamma", "delta"):
            object.__setattr__(self, f, GaussianInt.coerce(getattr(self, f)))
        if self.alpha * self.delta - self.beta * self.gamma != GI_ONE:
            raise ValueError("Moebius pair must have determinant 1")

    def __mul__(self, other: "MobiusPair") -> "MobiusPair":
        a, b, c, d = self.alpha, self.beta, self.gamma, self.delta
        e, f, g, h = other.alpha, other.beta, other.gamma, other.delta
        return MobiusPair(a * e + b * g, a * f + b * h,
                          c * e + d * g, c * f + d * h)

    def neg(self) -> "MobiusPair":
        return MobiusPair(-self.alpha, -self.beta, -self.gamma, -self.delta)

    def inverse(self) -> "MobiusPair":
        return MobiusPair(self.delta, -self.beta, -self.gamma, self.alpha)

    def entries(self) -> Tuple[GaussianInt, ...]:
        return (self.alpha, self.beta, self.gamma, self.delta)

    def projectively_equals(self, other: "MobiusPair") -> bool:
        return self == other or self == other.neg()


def _mod2_class(z: GaussianInt) -> Tuple[int, int]:
    return (z.re % 2, z.im % 2)


def in_level2_subgroup(m: MobiusPair) -> bool:
    """Membership in the level-2 congruence subgroup: congruent mod 2 to
    a diagonal matrix diag(1,1) or diag(i,i), projectively."""
    if _mod2_class(m.beta) != (0, 0) or _mod2_class(m.gamma) != (0, 0):
        return False
    a, d = _mod2_class(m.alpha), _mod2_class(m.delta)
    return (a == d == (1, 0)) or (a == d == (0, 1))


def _alpha_parity_ok(alpha: GaussianInt) -> bool:
    return (alpha.re + alpha.im) % 2 == 1


def _beta_even(beta: GaussianInt) -> bool:
    return beta.re % 2 == 0 and beta.im % 2 == 0


def complete_pair(alpha: GaussianInt, beta: GaussianInt) -> MobiusPair:
    """Extend (alpha, beta) meeting the level-2 congruences to a full
    element of the congruence subgroup."""
    alpha, beta = GaussianInt.coerce(alpha), GaussianInt.coerce(beta)
    if not (_alpha_parity_ok(alpha) and _beta_even(beta)):
        raise ValueError("pair violates the congruence alpha = 1 or i, "
                         "beta = 0 (mod 2)")
    g, u, v = gaussian_xgcd(alpha, beta)
    if not g.is_unit():
        raise ValueError(f"gcd({alpha}, {beta}) is not a unit; "
                         "no unimodular completion exists")
    ginv = g.conj()  # inverse of a unit
    delta, gamma = u * ginv, -(v * ginv)
    # shift rows by t*(alpha, beta) to force gamma even; alpha is its own
    # inverse mod 2, so t = gamma * alpha works
    t = GaussianInt((gamma * alpha).re % 2, (gamma * alpha).im % 2)
    gamma = gamma - t * alpha
    delta = delta - t * beta
    pair = MobiusPair(alpha, beta, gamma, delta)
    if not in_level2_subgroup(pair):
        raise ValueError("completion left the congruence subgroup")
    return pair


def spin(m: MobiusPair) -> IntRows:
    """The spin image: a 5x5 integer matrix acting on (b, A, B, C, D),
    fixing the bend coordinate and preserving the discriminant form."""
    a, b, c, d = m.alpha, m.beta, m.gamma, m.delta
    ac, bc, cc, dc = a.conj(), b.conj(), c.conj(), d.conj()
    row1 = (0, (ac * a).re, 2 * (bc * a).re, 2 * (bc * a).im, (bc * b).re)
    row2 = (0, (ac * c).re, (bc * c + dc * a).re, (dc * a + bc * c).im,
            (bc * d).re)
    row3 = (0, (ac * c).im, (bc * c - dc * a).im, (dc * a - bc * c).re,
            (bc * d).im)
    row4 = (0, (cc * c).re, 2 * (dc * c).re, 2 * (dc * c).im, (dc * d).re)
    return _rows((1, 0, 0, 0, 0), row1, row2, row3, row4)


J_CHANGE_OF_VARIABLES = Mat.from_rows([
    [1, 0, 0, 0, 0],
    [1, 1, 0, 0, 0],
    [Fraction(-1, 2), Fraction(-1, 2), Fraction(-1, 2), Fraction(-1, 2), 1],
    [Fraction(-1, 2), Fraction(-1, 2), Fraction(-1, 2), Fraction(1, 2), 0],
    [1, 0, 1, 0, 0],
])

# Gram matrix of 2*b^2 + 2*(B^2 + C^2 - A*D) on (b, A, B, C, D)
DISCRIMINANT_FORM = Mat.from_rows([
    [2, 0, 0, 0, 0],
    [0, 0, 0, 0, -1],
    [0, 0, 2, 0, 0],
    [0, 0, 0, 2, 0],
    [0, -1, 0, 0, 0],
])


def conjugate_by_J(g) -> IntRows:
    """J g J^-1 for a stabilizer element; integer by construction, and a
    non-integer result signals that g was outside the oriented stabilizer."""
    if isinstance(g, GroupElement):
        gm = g.mat()
    elif isinstance(g, Mat):
        gm = g
    else:
        gm = Mat.from_rows(g)
    res = J_CHANGE_OF_VARIABLES * gm * J_CHANGE_OF_VARIABLES.inverse()
    if not res.is_integer():
        raise ValueError("conjugation by J left the integers; the element "
                         "is outside the oriented sphere stabilizer")
    return _rows(*res.to_int_rows())


def stabilizer_from_spin(m: MobiusPair) -> IntRows:
    """Pull a spin image back to a sphere-stabilizer matrix: J^-1 rho(m) J.

    Integral exactly when m lies in the level-2 congruence subgroup."""
    rho = Mat.from_rows(spin(m))
    res = J_CHANGE_OF_VARIABLES.inverse() * rho * J_CHANGE_OF_VARIABLES
    if not res.is_integer():
        raise ValueError("spin image does not descend to an integral "
                         "stabilizer element; m is outside the congruence "
                         "subgroup")
    return _rows(*res.to_int_rows())


# ---------------------------------------------------------------------------
# the quaternary form of a bend vector


@dataclass(frozen=True)
class QuaternaryForm:
    """Coefficients (A, B, C, D) of the hermitian/quaternary form tied to
    a bend vector with first bend ``shift_b``."""

    A: int
    B: int
    C: int
    D: int
    shift_b: int

    def __post_init__(self):
        if (self.B * self.B + self.C * self.C - self.A * self.D
                != -self.shift_b * self.shift_b):
            raise ValueError("coefficients violate the discriminant identity "
                             "B^2 + C^2 - A*D = -b^2")

    def matrix(self) -> Tuple[Tuple[int, ...], ...]:
        a, b, c, d = self.A, self.B, self.C, self.D
        return ((a, 0, b, -c), (0, a, c, b), (b, c, d, 0), (-c, b, 0, d))

    def value(self, eta: Sequence[int]) -> int:
        a1, a2, b1, b2 = (int(x) for x in eta)
        return (self.A * (a1 * a1 + a2 * a2)
                + 2 * self.B * (a1 * b1 + a2 * b2)
                + 2 * self.C * (a2 * b1 - a1 * b2)
                + self.D * (b1 * b1 + b2 * b2))


def qform_from_bend_vector(bv: BendVector) -> QuaternaryForm:
    """The substitution A = b+b2, B = -(b+b2+b3+b4-2*b_mu)/2,
    C = -(b+b2+b3-b4)/2, D = b+b3."""
    if not bv.is_integral():
        raise ValueError("quaternary form needs an integral bend vector")
    b, b2, b3, b4, mu = bv.as_ints()
    if (b + b2 + b3 + b4) % 2:
        raise ValueError("not a bend vector: b1+b2+b3+b4 is odd")
    return QuaternaryForm(
        A=b + b2,
        B=-(b + b2 + b3 + b4 - 2 * mu) // 2,
        C=-(b + b2 + b3 - b4) // 2,
        D=b + b3,
        shift_b=b,
    )


def _det4(m: Sequence[Sequence[int]]) -> int:
    def det3(a):
        return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))

    total = 0
    for j in range(4):
        minor = [[m[i][k] for k in range(4) if k != j] for i in range(1, 4)]
        total += (-1) ** j * m[0][j] * det3(minor)
    return total


def discriminant(q: QuaternaryForm) -> int:
    """2^4 det(Q_b), which equals (2b)^4."""
    return 16 * _det4(q.matrix())


def is_positive_definite(q: QuaternaryForm) -> bool:
    m = q.matrix()
    minors = [
        m[0][0],
        _det4([[m[0][0], m[0][1], 0, 0], [m[1][0], m[1][1], 0, 0],
               [0, 0, 1, 0], [0, 0, 0, 1]]),
        _det4([[m[0][0], m[0][1], m[0][2], 0], [m[1][0], m[1][1], m[1][2], 0],
               [m[2][0], m[2][1], m[2][2], 0], [0, 0, 0, 1]]),
        _det4(m),
    ]
    return all(x > 0 for x in minors)


def degenerate_eigenvectors(q: QuaternaryForm) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """(C,-B,0,A) and (-B,-C,A,0); kernel vectors when shift_b = 0."""
    return (q.C, -q.B, 0, q.A), (-q.B, -q.C, q.A, 0)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def is_isotropic_at(q: QuaternaryForm, p: int) -> Tuple[bool, Optional[Tuple[int, ...]]]:
    """Whether the form has a nonzero root mod p, with a verified witness.

    For p dividing b the degenerate eigenvectors reduce to roots; away
    from the discriminant a root is assembled by completing the square in
    the hermitian picture.
    """
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")

    def ok(w) -> Optional[Tuple[int, ...]]:
        w = tuple(x % p for x in w)
        if any(w) and q.value(w) % p == 0:
            return w
        return None

    if p == 2:
        for w in ((1, 0, 0, 0), (0, 0, 1, 0), (1, 0, 1, 0), (0, 1, 0, 1),
                  (1, 1, 0, 0), (0, 0, 1, 1), (1, 1, 1, 1)):
            got = ok(w)
            if got:
                return True, got
        return False, None

    if q.A % p == 0:
        return True, (1, 0, 0, 0)

    if q.shift_b % p == 0:
        for w in degenerate_eigenvectors(q):
            got = ok(w)
            if got:
                return True, got
        # eigenvectors vanished mod p, i.e. A = B = C = 0; but A was a unit
        # above, so this point is unreachable for genuine bend forms
        got = ok((1, 0, 0, 0))
        return (True, got) if got else (False, None)

    # p coprime to 2b: A*Q = |A*alpha + (B+iC)*beta|^2 + b^2*|beta|^2, so
    # pick beta = 1 and solve u1^2 + u2^2 = -b^2 (mod p) by table lookup
    m = (q.A * q.D - q.B * q.B - q.C * q.C) % p  # = b^2 mod p
    squares: Dict[int, int] = {}
    for u in range(p):
        squares.setdefault(u * u % p, u)
    for u1 in range(p):
        rhs = (-m - u1 * u1) % p
        if rhs in squares:
            u2 = squares[rhs]
            ainv = pow(q.A, -1, p)
            alpha_re = (u1 - q.B) * ainv % p
            alpha_im = (u2 - q.C) * ainv % p
            got = ok((alpha_re, alpha_im, 1, 0))
            if got:
                return True, got
    return False, None


def exhaustive_isotropy(q: QuaternaryForm, p: int) -> Tuple[bool, Optional[Tuple[int, ...]]]:
    """Independent oracle: scan (Z/p)^4 for a nonzero root, first hit wins."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    import numpy as np

    rng = np.arange(p, dtype=np.int64)
    a2, b1, b2 = np.meshgrid(rng, rng, rng, indexing="ij")
    for a1 in range(p):
        vals = (q.A * (a1 * a1 + a2 * a2)
                + 2 * q.B * (a1 * b1 + a2 * b2)
                + 2 * q.C * (a2 * b1 - a1 * b2)
                + q.D * (b1 * b1 + b2 * b2)) % p
        hit = np.argwhere(vals == 0)
        for h in hit:
            w = (a1, int(h[0]), int(h[1]), int(h[2]))
            if any(w):
                return True, w
    return False, None


def bend_from_xi(bv: BendVector, alpha: GaussianInt, beta: GaussianInt) -> int:
    """The bend contributed by a congruence-subgroup column (alpha, beta):
    the explicit linear combination of the bend vector, which must agree
    with Q_b(eta) - b."""
    alpha, beta = GaussianInt.coerce(alpha), GaussianInt.coerce(beta)
    if not (_alpha_parity_ok(alpha) and _beta_even(beta)):
        raise ValueError("pair violates the congruence alpha = 1 or i, "
                         "beta = 0 (mod 2)")
    if not bv.is_integral():
        raise ValueError("bend_from_xi needs an integral bend vector")
    b, b2, b3, b4, mu = bv.as_ints()
    re_ab = (alpha.conj() * beta).re
    im_ba = (beta.conj() * alpha).im
    na, nb = alpha.norm(), beta.norm()
    direct = ((na - re_ab - im_ba + nb - 1) * b
              + (na - re_ab - im_ba) * b2
              + (-re_ab - im_ba + nb) * b3
              + (-re_ab + im_ba) * b4
              + 2 * re_ab * mu)
    q = qform_from_bend_vector(bv)
    eta = (alpha.re, alpha.im, beta.re, beta.im)
    via_form = q.value(eta) - b
    if direct != via_form:
        raise AssertionError("dual-route bend computation disagrees")
    return direct


def local_classes(q: QuaternaryForm, restricted: bool = True) -> Set[int]:
    """Values of the form mod 4 over eta mod 4; with the congruence
    lattice restriction this collapses to the single class b + b2."""
    out: Set[int] = set()
    for a1, a2, b1, b2 in itertools.product(range(4), repeat=4):
        if restricted:
            if (a1 + a2) % 2 == 0:
                continue
            if b1 % 2 or b2 % 2:
                continue
        out.add(q.value((a1, a2, b1, b2)) % 4)
    return out
