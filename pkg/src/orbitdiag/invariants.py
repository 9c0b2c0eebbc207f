"""Step-by-step construction of the coadjoint invariants z_1..z_s.

After each cross placement the coordinate ring splits off one Weyl pair
per minus/plus couple plus a central Laurent variable; what survives is a
copy of the smaller quotient's ring embedded along new coordinates.  The
embedding only changes coordinates of classes 1.1 and 3:

    class 1.1:  Y[a,b] - Y[a,t] * Y[k,b] / Z
    class 3:    ( Y[a,k] * Z + sum_j Y[a,j] * Y[j,t] ) / Z
                    over middles t < j < k with (j,t) still unfilled,
                    dropping terms whose (a,j) lies in the ideal

with Z the previous image of the cross position (k,t).  The invariant
z_i is the bare numerator of Z — kept exactly as produced, since the
no-cancellation arithmetic may leave factors of earlier z's in it.

Each z is checked two ways: it Poisson-commutes with every coordinate,
and it has the staircase shape z = y_xi * Q + P with Q an exact product
of earlier z's and P supported on strictly greater variables.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Pair, PatternIdeal, all_pairs, bracket, order_gt
from .diagram import Diagram, b_set, classify_step
from .polyring import (
    LocalizedElement,
    Polynomial,
    exact_divide,
    loc_add,
    loc_divide,
    loc_equal,
    loc_mul,
    loc_poisson_bracket,
    loc_scale,
    loc_sub,
    partial_derivative,
    poisson_bracket,
)

__all__ = [
    "ThetaState",
    "WeylPairs",
    "RelationReport",
    "InconsistentStateError",
    "NotTriangularError",
    "CentralityError",
    "initial_state",
    "theta_step",
    "build_invariants",
    "triangular_decompose",
    "verify_centrality",
    "weyl_pairs",
    "verify_relations",
]


class InconsistentStateError(RuntimeError):
    pass


class CentralityError(ValueError):
    pass


class NotTriangularError(ValueError):
    """The staircase-shape check failed; carries which check and a witness."""

    def __init__(self, reason: str, witness):
        self.reason = reason
        self.witness = witness
        super().__init__(f"{reason}: {witness}")


@dataclass
class ThetaState:
    """Composite images of the surviving coordinates after `step` steps.

    images[(a,b)] is the original-variable expression of the step-level
    coordinate y[a,b]; keys are exactly the unfilled set B_step.  z_list
    holds the numerators extracted so far (z_1..z_step), which is also the
    table the formal denominators refer to.
    """

    step: int
    images: dict[Pair, LocalizedElement]
    z_list: tuple[Polynomial, ...]


@dataclass
class WeylPairs:
    """The canonically conjugate pairs split off at one step.

    p[j] is the previous image of (k,j) for each minus cell, q[j] the
    previous image of (j,t) divided by Z for each plus cell; the key sets
    coincide (the couples share their middle index j).
    """

    step: int
    p: dict[int, LocalizedElement]
    q: dict[int, LocalizedElement]


@dataclass
class RelationReport:
    step: int
    checked: int
    passed: bool
    counterexample: str | None = None


def initial_state(d: Diagram) -> ThetaState:
    images = {
        pair: LocalizedElement(Polynomial.variable(pair), {})
        for pair in b_set(d, 0)
    }
    return ThetaState(0, images, ())


def theta_step(prev: ThetaState, d: Diagram, i: int) -> ThetaState:
    if prev.step != i - 1:
        raise InconsistentStateError(f"state is at step {prev.step}, expected {i - 1}")
    if set(prev.images) != set(b_set(d, i - 1)):
        raise InconsistentStateError("image keys do not match the unfilled set")
    rec = d.steps[i - 1]
    k, t = rec.xi
    pivot = prev.images[rec.xi]
    z_table = (*prev.z_list, pivot.num)
    classes = classify_step(d, i)
    images: dict[Pair, LocalizedElement] = {}
    for pair in b_set(d, i):
        a, b = pair
        cls = classes[pair]
        if cls == "1.1":
            correction = loc_divide(
                loc_mul(prev.images[Pair(a, t)], prev.images[Pair(k, b)]),
                pivot,
                i,
                z_table,
            )
            images[pair] = loc_sub(prev.images[pair], correction, z_table)
        elif cls == "3":
            total = loc_mul(prev.images[pair], pivot)
            for j in range(t + 1, k):
                if Pair(j, t) not in prev.images:
                    continue
                aj = Pair(a, j)
                if aj in d.ideal.members:
                    continue
                if aj not in prev.images:
                    raise InconsistentStateError(
                        f"coordinate {tuple(aj)} should still be unfilled at step {i}"
                    )
                total = loc_add(
                    total, loc_mul(prev.images[aj], prev.images[Pair(j, t)]), z_table
                )
            images[pair] = loc_divide(total, pivot, i, z_table)
        else:
            images[pair] = prev.images[pair]
    return ThetaState(i, images, z_table)


def build_invariants(d: Diagram, check: bool = True) -> list[Polynomial]:
    """The invariants z_1..z_s as polynomials in the original variables.

    With check=True (the default) every z is put through the staircase
    decomposition and the centrality test before being returned.
    """
    state = initial_state(d)
    for i in range(1, d.s + 1):
        state = theta_step(state, d, i)
    zs = list(state.z_list)
    if check:
        for idx, z in enumerate(zs, start=1):
            triangular_decompose(z, d.steps[idx - 1].xi, zs[: idx - 1])
            if not verify_centrality(z, d.ideal):
                raise CentralityError(
                    f"z_{idx} does not commute with every coordinate"
                )
    return zs


def triangular_decompose(
    z: Polynomial, xi: Pair, earlier: list
) -> tuple[dict[int, int], Polynomial]:
    """Split z as y_xi * Q + P and certify the staircase shape.

    Checks, in order: z has degree exactly 1 in y_xi; Q = dz/dy_xi factors
    completely as a product of powers of the earlier z's (greedily, newest
    first, each divided out as often as possible, residual exactly 1); and
    P = z - y_xi*Q only involves variables strictly greater than xi.
    Returns the exponent map of Q and the remainder P.
    """
    xi = Pair(*xi)
    if z.degree_in(xi) != 1:
        raise NotTriangularError("degree in the pivot variable is not 1", (tuple(xi), z.degree_in(xi)))
    q = partial_derivative(z, xi)
    exponents: dict[int, int] = {}
    residual = q
    for j in range(len(earlier), 0, -1):
        while True:
            candidate = exact_divide(residual, earlier[j - 1])
            if candidate is None:
                break
            residual = candidate
            exponents[j] = exponents.get(j, 0) + 1
    if residual != Polynomial.constant(1):
        raise NotTriangularError("pivot coefficient is not a product of earlier invariants", residual)
    remainder = z - Polynomial.variable(xi) * q
    for v in sorted(remainder.variables()):
        if not order_gt(v, xi):
            raise NotTriangularError("remainder touches a variable not above the pivot", tuple(v))
    return exponents, remainder


def verify_centrality(z: Polynomial, ideal: PatternIdeal) -> bool:
    """Does z Poisson-commute with every coordinate of the quotient?"""
    return all(
        poisson_bracket(z, Polynomial.variable(eta), ideal).is_zero()
        for eta in all_pairs(ideal.n)
        if eta not in ideal.members
    )


def weyl_pairs(prev: ThetaState, d: Diagram, i: int) -> WeylPairs:
    if prev.step != i - 1:
        raise InconsistentStateError(f"state is at step {prev.step}, expected {i - 1}")
    rec = d.steps[i - 1]
    pivot = prev.images[rec.xi]
    z_table = (*prev.z_list, pivot.num)
    p = {pair.col: prev.images[pair] for pair in rec.minus}
    q = {
        pair.row: loc_divide(prev.images[pair], pivot, i, z_table)
        for pair in rec.plus
    }
    if set(p) != set(q):
        raise InconsistentStateError("minus and plus cells do not pair up by middle index")
    return WeylPairs(i, p, q)


def verify_relations(prev: ThetaState, d: Diagram, i: int) -> RelationReport:
    """Check every identity the step is supposed to satisfy.

    (a) the new images reproduce the bracket table of the smaller algebra,
    (b) the split-off pairs are canonical ({p_a,q_b} = delta, {p,p} = {q,q} = 0),
    (c) the three factors commute with one another: Z and the Weyl pairs,
        Z and the new images, Weyl pairs and the new images.
    Everything is compared by cross multiplication after the quotient-rule
    bracket; the first failure is reported verbatim.
    """
    state = theta_step(prev, d, i)
    pairs = weyl_pairs(prev, d, i)
    ideal = d.ideal
    z_table = state.z_list
    pivot = prev.images[d.steps[i - 1].xi]
    one = LocalizedElement(Polynomial.constant(1), {})
    zero = LocalizedElement(Polynomial.zero(), {})
    checked = 0

    def fail(message: str) -> RelationReport:
        return RelationReport(i, checked, False, message)

    survivors = b_set(d, i)
    for idx, alpha in enumerate(survivors):
        for beta in survivors[idx + 1 :]:
            lhs = loc_poisson_bracket(state.images[alpha], state.images[beta], ideal, z_table)
            term = bracket(alpha, beta, ideal)
            if term.pair is None:
                rhs = zero
            elif term.pair in state.images:
                rhs = loc_scale(state.images[term.pair], term.coefficient)
            else:
                raise InconsistentStateError(
                    f"bracket of {tuple(alpha)},{tuple(beta)} left the surviving set"
                )
            checked += 1
            if not loc_equal(lhs, rhs, z_table):
                return fail(
                    f"images of {tuple(alpha)}, {tuple(beta)} have the wrong bracket"
                )
    middles = sorted(pairs.p)
    for a in middles:
        for b in middles:
            expected = one if a == b else zero
            checked += 1
            if not loc_equal(
                loc_poisson_bracket(pairs.p[a], pairs.q[b], ideal, z_table), expected, z_table
            ):
                return fail(f"{{p_{a}, q_{b}}} is not {'1' if a == b else '0'}")
        for b in middles:
            if b <= a:
                continue
            checked += 2
            if not loc_equal(loc_poisson_bracket(pairs.p[a], pairs.p[b], ideal, z_table), zero, z_table):
                return fail(f"{{p_{a}, p_{b}}} is not 0")
            if not loc_equal(loc_poisson_bracket(pairs.q[a], pairs.q[b], ideal, z_table), zero, z_table):
                return fail(f"{{q_{a}, q_{b}}} is not 0")
    for j in middles:
        checked += 2
        if not loc_equal(loc_poisson_bracket(pivot, pairs.p[j], ideal, z_table), zero, z_table):
            return fail(f"Z does not commute with p_{j}")
        if not loc_equal(loc_poisson_bracket(pivot, pairs.q[j], ideal, z_table), zero, z_table):
            return fail(f"Z does not commute with q_{j}")
    for eta in survivors:
        image = state.images[eta]
        checked += 1
        if not loc_equal(loc_poisson_bracket(image, pivot, ideal, z_table), zero, z_table):
            return fail(f"image of {tuple(eta)} does not commute with Z")
        for j in middles:
            checked += 2
            if not loc_equal(loc_poisson_bracket(image, pairs.p[j], ideal, z_table), zero, z_table):
                return fail(f"image of {tuple(eta)} does not commute with p_{j}")
            if not loc_equal(loc_poisson_bracket(image, pairs.q[j], ideal, z_table), zero, z_table):
                return fail(f"image of {tuple(eta)} does not commute with q_{j}")
    return RelationReport(i, checked, True, None)
