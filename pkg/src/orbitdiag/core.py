"""Base layer: root positions, pattern ideals, structure constants, forms.

Everything here works over exact rationals (`fractions.Fraction`), so all
downstream checks are equality checks, never tolerance checks.

The algebra under study is the space of strictly lower-triangular n x n
matrices with the commutator bracket.  A basis vector ``y[i,j]`` sits at
row i, column j (i > j); the set of all such positions is ``A``.  A
*pattern ideal* is the span of the basis vectors indexed by a lower-left
closed subset M of A; the quotient by it is the algebra whose coadjoint
geometry the rest of the package computes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple

__all__ = [
    "Pair",
    "PatternIdeal",
    "QuotientAlgebra",
    "LinearForm",
    "UnipotentElement",
    "SignedTerm",
    "OutOfRangeError",
    "NotAnIdealError",
    "DimensionMismatchError",
    "all_pairs",
    "succ_key",
    "order_gt",
    "validate_pattern_ideal",
    "bracket",
    "coadjoint_act",
    "random_form",
    "random_unipotent",
    "enumerate_pattern_ideals",
    "sample_pattern_ideals",
    "counter_rand",
]


class Pair(NamedTuple):
    """A strictly lower-triangular matrix position (row > col)."""

    row: int
    col: int


class OutOfRangeError(ValueError):
    """A pair is not a strictly lower-triangular position within n."""

    def __init__(self, pair: Pair, n: int):
        self.pair = pair
        self.n = n
        super().__init__(f"pair {tuple(pair)} is not strictly lower-triangular in size {n}")


class NotAnIdealError(ValueError):
    """The given position set is not lower-left closed."""

    def __init__(self, pair: Pair, missing: Pair):
        self.pair = pair
        self.missing = missing
        super().__init__(
            f"set is not an ideal: {tuple(pair)} present but closure requires {tuple(missing)}"
        )


class DimensionMismatchError(ValueError):
    pass


def all_pairs(n: int) -> list[Pair]:
    """All positions of A for size n, greatest first in the column order."""
    return sorted((Pair(i, j) for j in range(1, n) for i in range(j + 1, n + 1)), key=succ_key)


def succ_key(pair: Pair) -> tuple[int, int]:
    """Sort key under which ascending order lists A from greatest to least.

    The total order: positions in an earlier column are greater; within a
    column the larger row is greater.  So (n,1) > (n-1,1) > ... > (2,1) >
    (n,2) > ... > (n,n-1).
    """
    return (pair.col, -pair.row)


def order_gt(a: Pair, b: Pair) -> bool:
    """True iff position a is strictly greater than b in the column order."""
    return succ_key(a) < succ_key(b)


@dataclass(frozen=True)
class PatternIdeal:
    """A validated lower-left closed subset M of A (use validate_pattern_ideal)."""

    n: int
    members: frozenset[Pair]

    def __contains__(self, pair: Pair) -> bool:
        return pair in self.members

    @property
    def dim_quotient(self) -> int:
        return self.n * (self.n - 1) // 2 - len(self.members)


def validate_pattern_ideal(n: int, pairs: Iterable[Pair]) -> PatternIdeal:
    """Check bounds and lower-left closure; return the validated ideal.

    Closure: every member must also have its lower neighbour (row+1, col)
    and its left neighbour (row, col-1) in the set, whenever those stay
    inside A.  This is exactly the condition for the spanned subspace to
    be an ideal of the full lower-triangular algebra.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    members = frozenset(Pair(*p) for p in pairs)
    for p in members:
        if not (1 <= p.col < p.row <= n):
            raise OutOfRangeError(p, n)
    for p in sorted(members):
        if p.row + 1 <= n and Pair(p.row + 1, p.col) not in members:
            raise NotAnIdealError(p, Pair(p.row + 1, p.col))
        if p.col - 1 >= 1 and Pair(p.row, p.col - 1) not in members:
            raise NotAnIdealError(p, Pair(p.row, p.col - 1))
    return PatternIdeal(n, members)


@dataclass(frozen=True)
class QuotientAlgebra:
    """The quotient algebra: its basis is A minus M, listed greatest first."""

    ideal: PatternIdeal
    basis: tuple[Pair, ...]

    @classmethod
    def from_ideal(cls, ideal: PatternIdeal) -> "QuotientAlgebra":
        basis = tuple(p for p in all_pairs(ideal.n) if p not in ideal.members)
        return cls(ideal, basis)

    @property
    def n(self) -> int:
        return self.ideal.n

    @property
    def dim(self) -> int:
        return len(self.basis)


class SignedTerm(NamedTuple):
    """A bracket value: coefficient * basis vector, or zero (pair is None)."""

    coefficient: Fraction
    pair: Pair | None


ZERO_TERM = SignedTerm(Fraction(0), None)


def bracket(a: Pair, b: Pair, ideal: PatternIdeal) -> SignedTerm:
    """Commutator of two basis vectors, reduced modulo the pattern ideal.

    For elementary matrices [E_ab, E_cd] = delta(b,c) E_ad - delta(d,a) E_cb;
    at most one delta fires for lower-triangular positions.  Any result
    landing in M is zero in the quotient.
    """
    if a.col == b.row:
        result = Pair(a.row, b.col)
        sign = 1
    elif b.col == a.row:
        result = Pair(b.row, a.col)
        sign = -1
    else:
        return ZERO_TERM
    if result in ideal.members:
        return ZERO_TERM
    return SignedTerm(Fraction(sign), result)


@dataclass(frozen=True)
class LinearForm:
    """A point of the dual space: one rational value per basis position.

    Stored sparsely; a missing key means value 0.  Keys outside the basis
    are rejected (the form must annihilate the ideal).
    """

    algebra: QuotientAlgebra
    values: tuple[tuple[Pair, Fraction], ...]

    @classmethod
    def from_dict(cls, algebra: QuotientAlgebra, values: dict[Pair, Fraction]) -> "LinearForm":
        basis = set(algebra.basis)
        cleaned = {}
        for pair, value in values.items():
            pair = Pair(*pair)
            if pair not in basis:
                raise OutOfRangeError(pair, algebra.n)
            value = Fraction(value)
            if value:
                cleaned[pair] = value
        return cls(algebra, tuple(sorted(cleaned.items())))

    def __call__(self, pair: Pair) -> Fraction:
        if pair not in set(self.algebra.basis):
            raise OutOfRangeError(pair, self.algebra.n)
        return dict(self.values).get(pair, Fraction(0))

    def as_dict(self) -> dict[Pair, Fraction]:
        return dict(self.values)


def _is_unit_lower(entries: tuple[tuple[Fraction, ...], ...]) -> bool:
    n = len(entries)
    for i in range(n):
        if len(entries[i]) != n or entries[i][i] != 1:
            return False
        if any(entries[i][j] != 0 for j in range(i + 1, n)):
            return False
    return True


@dataclass(frozen=True)
class UnipotentElement:
    """A lower-triangular matrix with unit diagonal, exact entries."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not _is_unit_lower(self.entries):
            raise ValueError("entries must be lower triangular with unit diagonal")

    @classmethod
    def identity(cls, n: int) -> "UnipotentElement":
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @classmethod
    def from_strict_lower(cls, n: int, coeffs: dict[Pair, Fraction]) -> "UnipotentElement":
        rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        for pair, value in coeffs.items():
            pair = Pair(*pair)
            if not (1 <= pair.col < pair.row <= n):
                raise OutOfRangeError(pair, n)
            rows[pair.row - 1][pair.col - 1] = Fraction(value)
        return cls(tuple(tuple(row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __mul__(self, other: "UnipotentElement") -> "UnipotentElement":
        if self.n != other.n:
            raise DimensionMismatchError(f"sizes {self.n} and {other.n} differ")
        return UnipotentElement(_mat_mul(self.entries, other.entries))

    def inverse(self) -> "UnipotentElement":
        # g = I + X with X strictly lower nilpotent, so the Neumann series
        # I - X + X^2 - ... terminates after n terms.
        n = self.n
        x = tuple(
            tuple(self.entries[i][j] - (1 if i == j else 0) for j in range(n)) for i in range(n)
        )
        acc = UnipotentElement.identity(n).entries
        power = UnipotentElement.identity(n).entries
        sign = 1
        for _ in range(n - 1):
            power = _mat_mul(power, x)
            sign = -sign
            acc = tuple(
                tuple(acc[i][j] + sign * power[i][j] for j in range(n)) for i in range(n)
            )
        return UnipotentElement(acc)


def _mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n))
        for i in range(n)
    )


def coadjoint_act(g: UnipotentElement, f: LinearForm, ideal: PatternIdeal) -> LinearForm:
    """Move a linear form by the group element, exactly.

    Under the trace pairing the form becomes the upper-triangular matrix b
    with b[col, row] = f(y[row, col]); the action conjugates by g and
    projects back onto the strictly upper-triangular part.  Positions of M
    must come back zero (the annihilator of an ideal is stable), which is
    asserted rather than silently dropped.
    """
    n = ideal.n
    if g.n != n or f.algebra.ideal != ideal:
        raise DimensionMismatchError("group element, form and ideal must share the same size")
    b = [[Fraction(0)] * n for _ in range(n)]
    for pair, value in f.values:
        b[pair.col - 1][pair.row - 1] = value
    moved = _mat_mul(_mat_mul(g.entries, tuple(tuple(row) for row in b)), g.inverse().entries)
    for pair in ideal.members:
        assert moved[pair.col - 1][pair.row - 1] == 0, (
            f"coadjoint action left the annihilator of the ideal at {tuple(pair)}"
        )
    values = {}
    for pair in f.algebra.basis:
        value = moved[pair.col - 1][pair.row - 1]
        if value:
            values[pair] = value
    return LinearForm.from_dict(f.algebra, values)


# --- deterministic pseudo-randomness -------------------------------------
#
# A counter-based mixer (splitmix64 core) keyed by (seed, indices...) so the
# same seed reproduces the same stream on any platform, with no hidden state.

_MASK = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def counter_rand(seed: int, *indices: int) -> int:
    """Deterministic 64-bit value keyed by a seed and a counter tuple."""
    state = _splitmix64(seed & _MASK)
    for index in indices:
        state = _splitmix64(state ^ ((index + 0x632BE59BD9B4E019) & _MASK))
    return state


def _rand_in(seed: int, lo: int, hi: int, *indices: int) -> int:
    return lo + counter_rand(seed, *indices) % (hi - lo + 1)


def random_form(algebra: QuotientAlgebra, bound: int, seed: int) -> LinearForm:
    """A reproducible form with integer values in [-bound, bound]."""
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    values = {
        pair: Fraction(_rand_in(seed, -bound, bound, index))
        for index, pair in enumerate(algebra.basis)
    }
    return LinearForm.from_dict(algebra, values)


def random_unipotent(n: int, bound: int, seed: int) -> UnipotentElement:
    """A reproducible unit lower-triangular matrix with entries in [-bound, bound]."""
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    coeffs = {
        pair: Fraction(_rand_in(seed, -bound, bound, index + 1_000_003))
        for index, pair in enumerate(all_pairs(n))
    }
    return UnipotentElement.from_strict_lower(n, coeffs)


# --- enumeration of pattern ideals ----------------------------------------
#
# A lower-left closed set is determined by one threshold per column: the
# first row belonging to M in that column (n+1 when the column is empty).
# Closure is equivalent to the thresholds being weakly increasing, so the
# whole family is walked by enumerating those staircase sequences.


def _ideal_from_thresholds(n: int, thresholds: tuple[int, ...]) -> PatternIdeal:
    members = frozenset(
        Pair(i, j + 1)
        for j, r in enumerate(thresholds)
        for i in range(r, n + 1)
    )
    return PatternIdeal(n, members)


def _threshold_vectors(n: int) -> Iterator[tuple[int, ...]]:
    def extend(prefix: tuple[int, ...], col: int) -> Iterator[tuple[int, ...]]:
        if col == n:
            yield prefix
            return
        lo = max(col + 1, prefix[-1] if prefix else 2)
        for r in range(n + 1, lo - 1, -1):
            yield from extend(prefix + (r,), col + 1)

    yield from extend((), 1)


def enumerate_pattern_ideals(n: int) -> Iterator[PatternIdeal]:
    """Every lower-left closed subset of A, each exactly once, empty set first."""
    if not 1 <= n <= 8:
        raise ValueError(f"enumeration supported for 1 <= n <= 8, got {n}")
    for thresholds in _threshold_vectors(n):
        yield _ideal_from_thresholds(n, thresholds)


def sample_pattern_ideals(n: int, count: int, seed: int) -> list[PatternIdeal]:
    """A deterministic pseudo-random subset of the full enumeration."""
    ideals = list(enumerate_pattern_ideals(n))
    if count > len(ideals):
        raise ValueError(f"only {len(ideals)} pattern ideals exist for n={n}")
    order = sorted(range(len(ideals)), key=lambda i: counter_rand(seed, n, i))
    return [ideals[i] for i in order[:count]]
