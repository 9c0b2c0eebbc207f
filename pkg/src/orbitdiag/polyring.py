"""Sparse polynomials over exact rationals in the variables y[i,j].

Variables are lower-triangular positions outside the ideal; a monomial is
stored as a tuple of ((row,col), exponent) entries sorted by (row, col),
and a polynomial as a dict mapping monomials to nonzero Fractions.  On top
of the plain ring sit:

  * the Poisson bracket induced by the structure constants (images inside
    the ideal drop to zero),
  * localized elements numerator / prod z_j^{e_j} whose denominators are
    formal products of the invariants built so far — arithmetic takes
    common denominators by exponent max and never cancels,
  * a deterministic text form ("2*y[3,1]*y[4,2]^2 - y[2,1]") and a parser
    for it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import re

from .core import LinearForm, Pair, PatternIdeal, bracket, succ_key

__all__ = [
    "Monomial",
    "Polynomial",
    "LocalizedElement",
    "MissingCoordinateError",
    "PolynomialSyntaxError",
    "monomial_mul",
    "monomial_divide",
    "monomial_degree",
    "term_sort_key",
    "exact_divide",
    "poisson_bracket",
    "partial_derivative",
    "evaluate",
    "canonical_string",
    "parse_polynomial",
    "expand_denominator",
    "loc_add",
    "loc_sub",
    "loc_mul",
    "loc_divide",
    "loc_scale",
    "loc_equal",
    "loc_evaluate",
    "loc_poisson_bracket",
]

# A monomial: (((row, col), exponent), ...) with positions ascending by
# (row, col) and all exponents positive.  The empty tuple is the unit.
Monomial = tuple

ONE: Monomial = ()


class MissingCoordinateError(KeyError):
    def __init__(self, pair: Pair):
        self.pair = pair
        super().__init__(f"no coordinate y[{pair[0]},{pair[1]}] in the target algebra")


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} (at position {position})")


def monomial_from(exponents: dict) -> Monomial:
    return tuple(sorted((Pair(*p), e) for p, e in exponents.items() if e))


def monomial_mul(u: Monomial, v: Monomial) -> Monomial:
    if not u:
        return v
    if not v:
        return u
    merged = dict(u)
    for pair, e in v:
        merged[pair] = merged.get(pair, 0) + e
    return tuple(sorted(merged.items()))


def monomial_divide(u: Monomial, v: Monomial) -> Monomial | None:
    """u / v as a monomial, or None when some exponent would go negative."""
    left = dict(u)
    for pair, e in v:
        have = left.get(pair, 0) - e
        if have < 0:
            return None
        if have:
            left[pair] = have
        else:
            left.pop(pair, None)
    return tuple(sorted(left.items()))


def monomial_degree(u: Monomial) -> int:
    return sum(e for _, e in u)


def term_sort_key(u: Monomial):
    """Graded order, ties broken lexicographically with greater variables
    (in the column order on positions) weighted first.  Ascending sort by
    this key lists terms from greatest to least."""
    return (-monomial_degree(u), tuple((succ_key(p), -e) for p, e in sorted(u, key=lambda ve: succ_key(ve[0]))))


class Polynomial:
    """Immutable-by-convention sparse polynomial {monomial: coefficient}."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls()

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls({ONE: Fraction(c)})

    @classmethod
    def variable(cls, pair) -> "Polynomial":
        return cls({((Pair(*pair), 1),): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Polynomial.constant(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        total = dict(self.terms)
        for m, c in other.terms.items():
            total[m] = total.get(m, Fraction(0)) + c
        return Polynomial(total)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return Polynomial({m: c * other for m, c in self.terms.items()})
        total: dict = {}
        for mu, cu in self.terms.items():
            for mv, cv in other.terms.items():
                m = monomial_mul(mu, mv)
                total[m] = total.get(m, Fraction(0)) + cu * cv
        return Polynomial(total)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.constant(1)
        for _ in range(e):
            result = result * self
        return result

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(monomial_degree(m) for m in self.terms)

    def degree_in(self, pair) -> int:
        pair = Pair(*pair)
        best = 0
        for m in self.terms:
            for p, e in m:
                if p == pair:
                    best = max(best, e)
        return best

    def variables(self) -> set:
        return {p for m in self.terms for p, _ in m}

    def leading_term(self):
        m = min(self.terms, key=term_sort_key)
        return m, self.terms[m]

    def __repr__(self) -> str:
        return f"Polynomial({canonical_string(self)!r})"


def exact_divide(a: Polynomial, b: Polynomial) -> Polynomial | None:
    """Quotient q with a = q*b, or None when b does not divide a exactly."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if a.is_zero():
        return Polynomial.zero()
    lm_b, lc_b = b.leading_term()
    q_terms: dict = {}
    rest = a
    while rest:
        lm_r, lc_r = rest.leading_term()
        m = monomial_divide(lm_r, lm_b)
        if m is None:
            return None
        c = lc_r / lc_b
        q_terms[m] = q_terms.get(m, Fraction(0)) + c
        rest = rest - Polynomial({m: c}) * b
    q = Polynomial(q_terms)
    assert q * b == a
    return q


def partial_derivative(p: Polynomial, v) -> Polynomial:
    v = Pair(*v)
    total: dict = {}
    for m, c in p.terms.items():
        for pair, e in m:
            if pair == v:
                lowered = monomial_divide(m, ((pair, 1),))
                total[lowered] = total.get(lowered, Fraction(0)) + c * e
    return Polynomial(total)


def poisson_bracket(a: Polynomial, b: Polynomial, ideal: PatternIdeal) -> Polynomial:
    """Biderivation extension of the basis bracket; images in the ideal vanish."""
    total: dict = {}
    for mu, cu in a.terms.items():
        for mv, cv in b.terms.items():
            for alpha, ea in mu:
                rest_u = monomial_divide(mu, ((alpha, 1),))
                for beta, eb in mv:
                    term = bracket(alpha, beta, ideal)
                    if term.pair is None:
                        continue
                    rest_v = monomial_divide(mv, ((beta, 1),))
                    m = monomial_mul(
                        monomial_mul(rest_u, rest_v), ((term.pair, 1),)
                    )
                    coeff = cu * cv * ea * eb * term.coefficient
                    total[m] = total.get(m, Fraction(0)) + coeff
    return Polynomial(total)


def evaluate(p: Polynomial, f: LinearForm) -> Fraction:
    basis = set(f.algebra.basis)
    values = f.as_dict()
    total = Fraction(0)
    for m, c in p.terms.items():
        prod = c
        for pair, e in m:
            if pair not in basis:
                raise MissingCoordinateError(pair)
            prod *= values.get(pair, Fraction(0)) ** e
        total += prod
    return total


# --- text form -------------------------------------------------------------


def _coeff_string(c: Fraction) -> str:
    return str(c)


def canonical_string(p: Polynomial) -> str:
    """Deterministic rendering: greatest term first, "c*y[i,j]^e*..." pieces.

    Within one monomial the variables print in ascending (row, col) order;
    unit coefficients and unit exponents are omitted.
    """
    if p.is_zero():
        return "0"
    pieces: list[str] = []
    for m in sorted(p.terms, key=term_sort_key):
        c = p.terms[m]
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        factors = [
            f"y[{pair.row},{pair.col}]" + (f"^{e}" if e > 1 else "")
            for pair, e in m
        ]
        if not factors:
            body = _coeff_string(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_coeff_string(mag)] + factors)
        if not pieces:
            pieces.append(body if sign == "+" else "-" + body)
        else:
            pieces.append(f" {sign} {body}")
    return "".join(pieces)


_TOKEN = re.compile(
    r"\s*(?:(?P<var>y\[\s*(?P<row>\d+)\s*,\s*(?P<col>\d+)\s*\])"
    r"|(?P<num>\d+(?:/\d+)?)"
    r"|(?P<op>[+\-*^]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            rest = text[pos:]
            if rest.strip() == "":
                break
            raise PolynomialSyntaxError(
                "unexpected character", pos + len(rest) - len(rest.lstrip())
            )
        if match.group("var"):
            pair = Pair(int(match.group("row")), int(match.group("col")))
            tokens.append(("var", pair, match.start("var")))
        elif match.group("num"):
            tokens.append(("num", Fraction(match.group("num")), match.start("num")))
        else:
            tokens.append(("op", match.group("op"), match.start("op")))
        pos = match.end()
    return tokens


def parse_polynomial(text: str) -> Polynomial:
    """Inverse of canonical_string (tolerant about whitespace)."""
    tokens = _tokenize(text)
    if not tokens:
        raise PolynomialSyntaxError("empty input", 0)
    result = Polynomial.zero()
    i = 0
    first = True
    while i < len(tokens):
        sign = 1
        kind, value, pos = tokens[i]
        if kind == "op" and value in "+-":
            if first and value == "+":
                raise PolynomialSyntaxError("unexpected leading '+'", pos)
            sign = -1 if value == "-" else 1
            i += 1
        elif not first:
            raise PolynomialSyntaxError("expected '+' or '-' between terms", pos)
        first = False
        coeff = Fraction(sign)
        exponents: dict = {}
        expect_factor = True
        saw_factor = False
        while i < len(tokens):
            kind, value, pos = tokens[i]
            if not expect_factor:
                break
            if kind == "num":
                coeff *= value
            elif kind == "var":
                e = 1
                if i + 2 < len(tokens) and tokens[i + 1][:2] == ("op", "^"):
                    if tokens[i + 2][0] != "num" or tokens[i + 2][1].denominator != 1:
                        raise PolynomialSyntaxError("exponent must be an integer", tokens[i + 2][2])
                    e = int(tokens[i + 2][1])
                    i += 2
                elif i + 1 < len(tokens) and tokens[i + 1][:2] == ("op", "^"):
                    raise PolynomialSyntaxError("dangling '^'", tokens[i + 1][2])
                exponents[value] = exponents.get(value, 0) + e
            else:
                raise PolynomialSyntaxError(f"unexpected '{value}'", pos)
            saw_factor = True
            i += 1
            expect_factor = False
            if i < len(tokens) and tokens[i][:2] == ("op", "*"):
                i += 1
                expect_factor = True
        if expect_factor or not saw_factor:
            where = tokens[i][2] if i < len(tokens) else len(text)
            raise PolynomialSyntaxError("incomplete term", where)
        result = result + Polynomial({monomial_from(exponents): coeff})
    return result


# --- localized elements ----------------------------------------------------


@dataclass
class LocalizedElement:
    """numerator / prod z_j^{e_j}; the z's are supplied separately as a table.

    Exponent maps are kept as written — arithmetic never cancels common
    factors, so equality of representations is only sufficient, and
    loc_equal (cross multiplication) is the semantic test.
    """

    num: Polynomial
    den: dict = field(default_factory=dict)

    def __post_init__(self):
        self.den = {j: e for j, e in self.den.items() if e}

    def copy(self) -> "LocalizedElement":
        return LocalizedElement(self.num, dict(self.den))


def expand_denominator(den: dict, z_table) -> Polynomial:
    """The formal denominator as an explicit polynomial (z_table[j-1] = z_j)."""
    result = Polynomial.constant(1)
    for j in sorted(den):
        result = result * (z_table[j - 1] ** den[j])
    return result


def _den_max(a: dict, b: dict) -> dict:
    return {j: max(a.get(j, 0), b.get(j, 0)) for j in set(a) | set(b)}


def _den_diff(total: dict, part: dict) -> dict:
    return {j: total[j] - part.get(j, 0) for j in total if total[j] - part.get(j, 0)}


def loc_add(a: LocalizedElement, b: LocalizedElement, z_table) -> LocalizedElement:
    den = _den_max(a.den, b.den)
    num = a.num * expand_denominator(_den_diff(den, a.den), z_table) + b.num * expand_denominator(
        _den_diff(den, b.den), z_table
    )
    return LocalizedElement(num, den)


def loc_sub(a: LocalizedElement, b: LocalizedElement, z_table) -> LocalizedElement:
    return loc_add(a, loc_scale(b, -1), z_table)


def loc_mul(a: LocalizedElement, b: LocalizedElement) -> LocalizedElement:
    den = dict(a.den)
    for j, e in b.den.items():
        den[j] = den.get(j, 0) + e
    return LocalizedElement(a.num * b.num, den)


def loc_scale(a: LocalizedElement, c) -> LocalizedElement:
    return LocalizedElement(a.num * Fraction(c), dict(a.den))


def loc_divide(a: LocalizedElement, z: LocalizedElement, index: int, z_table) -> LocalizedElement:
    """Divide by the step pivot whose bare numerator defines z_table[index-1].

    (u / D) / (z_index / D_z)  =  u * D_z / (D * z_index): the numerator
    picks up the pivot's own formal denominator, expanded, and the z_index
    exponent grows by one.
    """
    assert z.num == z_table[index - 1]
    num = a.num * expand_denominator(z.den, z_table)
    den = dict(a.den)
    den[index] = den.get(index, 0) + 1
    return LocalizedElement(num, den)


def loc_equal(a: LocalizedElement, b: LocalizedElement, z_table) -> bool:
    """Semantic equality by cross multiplication (no cancellation needed)."""
    return a.num * expand_denominator(b.den, z_table) == b.num * expand_denominator(a.den, z_table)


def loc_evaluate(a: LocalizedElement, f: LinearForm, z_table) -> Fraction:
    bottom = evaluate(expand_denominator(a.den, z_table), f)
    if bottom == 0:
        raise ZeroDivisionError("denominator vanishes at the given form")
    return evaluate(a.num, f) / bottom


def loc_poisson_bracket(
    a: LocalizedElement, b: LocalizedElement, ideal: PatternIdeal, z_table
) -> LocalizedElement:
    """Bracket of u/v and w/x by the quotient rule, denominators kept formal:

    {u/v, w/x} = ({u,w}vx - {u,x}vw - {v,w}ux + {v,x}uw) / (v^2 x^2).
    """
    u, w = a.num, b.num
    v = expand_denominator(a.den, z_table)
    x = expand_denominator(b.den, z_table)
    num = (
        poisson_bracket(u, w, ideal) * v * x
        - poisson_bracket(u, x, ideal) * v * w
        - poisson_bracket(v, w, ideal) * u * x
        + poisson_bracket(v, x, ideal) * u * w
    )
    den: dict = {}
    for src in (a.den, b.den):
        for j, e in src.items():
            den[j] = den.get(j, 0) + 2 * e
    return LocalizedElement(num, den)
