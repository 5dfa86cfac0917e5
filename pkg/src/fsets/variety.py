"""Subvarieties of G_m^N x E_1 x ... x E_e given by explicit equations."""

from dataclasses import dataclass, field

from . import intlinalg
from .errors import InvalidArgument, ParseError, UnsupportedShape
from .parsing import evaluate, parse, variables
from .valuation import FactoredUnit


class LaurentPoly:
    """sum c_m x^m over integer exponent vectors m, coefficients in F_p."""

    __slots__ = ("terms", "nvars", "p")

    def __init__(self, terms, nvars, p):
        self.nvars = nvars
        self.p = p
        clean = {}
        for m, c in terms.items():
            c %= p
            if c:
                if len(m) != nvars:
                    raise InvalidArgument("exponent vector of the wrong length")
                clean[tuple(m)] = c
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def const(cls, c, nvars, p):
        return cls({(0,) * nvars: c}, nvars, p)

    @classmethod
    def var(cls, i, nvars, p):
        m = [0] * nvars
        m[i] = 1
        return cls({tuple(m): 1}, nvars, p)

    @classmethod
    def parse(cls, text, nvars, p):
        """Parse a string over x1..xN."""
        node = parse(text)
        names = {f"x{i + 1}": cls.var(i, nvars, p) for i in range(nvars)}
        unknown = variables(node) - set(names)
        if unknown:
            raise ParseError(f"unknown torus variable(s) {sorted(unknown)} in {text!r}")
        return evaluate(node, names, lambda c: cls.const(c, nvars, p))

    @property
    def is_zero(self):
        return not self.terms

    def support(self):
        return list(self.terms)

    def _lift(self, other):
        if isinstance(other, LaurentPoly):
            return other
        return LaurentPoly.const(int(other), self.nvars, self.p)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return LaurentPoly(out, self.nvars, self.p)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({m: -c for m, c in self.terms.items()}, self.nvars, self.p)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return LaurentPoly(out, self.nvars, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if len(other.terms) != 1:
            raise ParseError("only division by a monomial is allowed in torus equations")
        (m, c), = other.terms.items()
        inv = LaurentPoly({tuple(-a for a in m): pow(c, -1, self.p)}, self.nvars, self.p)
        return self * inv

    def __pow__(self, e):
        if e < 0:
            return LaurentPoly.const(1, self.nvars, self.p) / (self ** (-e))
        out = LaurentPoly.const(1, self.nvars, self.p)
        for _ in range(e):
            out = out * self
        return out

    def monomial_multiple(self, m, c=1):
        return self * LaurentPoly({tuple(m): c}, self.nvars, self.p)

    def min_exponents(self):
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(m[j] for m in self.terms) for j in range(self.nvars))

    def __call__(self, coords, one):
        """Evaluate at tower coordinates after shifting by the minimal monomial."""
        if not self.terms:
            return one * 0
        mins = self.min_exponents()
        acc = one * 0
        powers = {}
        for m, c in self.terms.items():
            term = one * c
            for j, (e, lo) in enumerate(zip(m, mins)):
                k = e - lo
                if k:
                    key = (j, k)
                    if key not in powers:
                        powers[key] = coords[j] ** k
                    term = term * powers[key]
            acc = acc + term
        return acc

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.terms == other.terms and self.nvars == other.nvars

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms.items():
            mono = "*".join(f"x{j + 1}" if e == 1 else f"x{j + 1}^{e}" for j, e in enumerate(m) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"LaurentPoly({self})"


@dataclass(frozen=True)
class EllipticConstraint:
    """Equation in X, Y (plus t, s) on one elliptic factor; ``at_infinity`` says whether O satisfies it."""

    text: str
    node: tuple
    at_infinity: bool = False

    @classmethod
    def parse(cls, text, index, at_infinity=False):
        node = parse(text)
        allowed = {f"X{index + 1}", f"Y{index + 1}", "X", "Y", "t", "s"}
        unknown = variables(node) - allowed
        if unknown:
            raise ParseError(f"unknown symbol(s) {sorted(unknown)} in elliptic constraint {text!r}")
        return cls(text, node, at_infinity)

    def holds(self, P, index):
        if P.is_infinity:
            return self.at_infinity
        F = P.field
        env = {"X": P.x, "Y": P.y, f"X{index + 1}": P.x, f"Y{index + 1}": P.y, "t": F.t, "s": F.s}
        return evaluate(self.node, env, F).is_zero


@dataclass
class Subvariety:
    """Torus equations plus, per elliptic factor, None (free) or a list of constraints."""

    n_torus: int
    p: int
    torus_equations: list = field(default_factory=list)
    elliptic: list = field(default_factory=list)

    def __post_init__(self):
        for f in self.torus_equations:
            if f.nvars != self.n_torus or f.p != self.p:
                raise InvalidArgument("torus equation over the wrong variables or prime")

    @classmethod
    def from_strings(cls, n_torus, n_elliptic, p, torus=(), elliptic=None):
        eqs = [LaurentPoly.parse(s, n_torus, p) for s in torus]
        ell = []
        elliptic = elliptic or [None] * n_elliptic
        if len(elliptic) != n_elliptic:
            raise InvalidArgument("one elliptic entry per factor required")
        for i, cons in enumerate(elliptic):
            if cons is None:
                ell.append(None)
            else:
                items = []
                for c in cons:
                    if isinstance(c, str):
                        items.append(EllipticConstraint.parse(c, i))
                    else:
                        items.append(EllipticConstraint.parse(c["equation"], i, bool(c.get("at_infinity", False))))
                ell.append(items)
        return cls(n_torus, p, eqs, ell)

    @property
    def n_elliptic(self):
        return len(self.elliptic)

    @property
    def is_split(self):
        return all(c is None for c in self.elliptic)

    def torus_contains(self, P):
        coords = _torus_values(P)
        if not self.torus_equations:
            return True
        one = coords[0] ** 0 if coords else None
        return all(f(coords, one).is_zero for f in self.torus_equations)

    def elliptic_contains(self, P):
        for i, cons in enumerate(self.elliptic):
            if not cons:
                continue
            e = _elliptic_point(P, i)
            if not all(c.holds(e, i) for c in cons):
                return False
        return True


def _torus_values(P):
    return tuple(c.to_ratfunc() if isinstance(c, FactoredUnit) else c for c in P.torus)


def _elliptic_point(P, i):
    get = getattr(P, "elliptic_point", None)
    return get(i) if get is not None else P.elliptic[i]


def contains(X, P):
    """True iff every equation of X vanishes at P (torus equations first)."""
    if len(P.torus) != X.n_torus or len(P.elliptic) != X.n_elliptic:
        raise InvalidArgument("point does not live in the ambient group of X")
    return X.torus_contains(P) and X.elliptic_contains(P)


@dataclass(frozen=True)
class StabilizerInfo:
    dimension: int
    torus_characters: tuple
    full_elliptic_factors: tuple = ()

    @property
    def cocharacters(self):
        """Integer basis of the one-parameter subgroups inside the stabilizer's torus part."""
        n = self.n_torus
        if not self.torus_characters:
            return intlinalg.identity(n)
        return intlinalg.kernel_basis([list(c) for c in self.torus_characters])

    @property
    def proof_case(self):
        """1 when the stabilizer is positive dimensional (quotient by it), 2 when it is finite."""
        return 1 if self.dimension > 0 else 2

    @property
    def n_torus(self):
        return self.dimension - len(self.full_elliptic_factors) + len(self.torus_characters)


def _characters(equations, n):
    diffs = []
    for f in equations:
        sup = f.support()
        if not sup:
            raise InvalidArgument("the zero polynomial has no stabilizer")
        m0 = sup[0]
        diffs += [[a - b for a, b in zip(m, m0)] for m in sup[1:]]
    return tuple(tuple(r) for r in intlinalg.row_hermite(diffs))


def torus_stabilizer(f):
    """Identity component of Stab(V(f)) in G_m^N: annihilator of the support differences."""
    equations = f if isinstance(f, (list, tuple)) else [f]
    if not equations:
        raise InvalidArgument("no equations given")
    n = equations[0].nvars
    chars = _characters(equations, n)
    return StabilizerInfo(n - len(chars), chars, ())


def product_stabilizer(X):
    """Stabilizer dimension of (torus part) x (free elliptic factors)."""
    if not X.is_split:
        raise UnsupportedShape("product_stabilizer needs torus equations plus free elliptic factors")
    chars = _characters(X.torus_equations, X.n_torus) if X.torus_equations else ()
    full = tuple(range(X.n_elliptic))
    return StabilizerInfo(X.n_torus - len(chars) + len(full), chars, full)
