"""Seeded invariant suites: group law, Frobenius, homomorphisms, formal coordinates.

Each suite returns a SuiteResult; ``failures`` holds a short description of
every violated check so a failing run says exactly which sample broke.
"""

import random
from dataclasses import dataclass, field

from .exactfield import Poly, TowerField
from .frobenius import FrobeniusOp, frob_apply, minimal_poly_curve, sample_points, verify_relation
from .groupmodel import CurveParams, ECPoint, GroupDescriptor, GroupHom, ec_add, hom_apply
from .zfmodule import SpanCoordinates

DEFAULT_SEED = 20240531
DEFAULT_SAMPLES = 200


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def check(self, cond, what):
        self.checks += 1
        if not cond:
            self.failures.append(what)


def example_curves():
    """(tower, curve, base point) for the supersingular and the ordinary example."""
    out = []
    for d, a4, a6 in (([1, 0, 0, 1], 0, 1), ([0, 1, 0, 1], 1, 0)):
        L = TowerField(5, Poly(d, 5))
        E = CurveParams(5, a4, a6)
        out.append((L, E, ECPoint(L.t, L.s, E, L)))
    return out


def _pool(L, E, P, seed):
    op = FrobeniusOp(5)
    return sample_points(E, P, op, count=24, seed=seed, max_multiple=3, max_frob=1)


def _random_unit(rng, L):
    p = L.p
    while True:
        num = Poly([rng.randrange(p) for _ in range(rng.randrange(1, 4))], p)
        den = Poly([rng.randrange(p) for _ in range(rng.randrange(1, 3))], p)
        if not num.is_zero and not den.is_zero:
            return L(num) / L(den)


def group_law_suite(samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED):
    """Identity, inverse, commutativity, associativity and closure on both curves."""
    res = SuiteResult("group law")
    rng = random.Random(seed)
    for L, E, P in example_curves():
        pool = _pool(L, E, P, seed)
        O = ECPoint.infinity(E, L)
        for i in range(samples):
            a, b, c = (pool[rng.randrange(len(pool))] for _ in range(3))
            tag = f"{E} sample {i}"
            ab = ec_add(a, b)
            res.check(ab.on_curve(), f"{tag}: a + b off the curve")
            res.check(ec_add(a, O) == a, f"{tag}: a + O != a")
            res.check(ec_add(a, -a).is_infinity, f"{tag}: a - a != O")
            res.check(ab == ec_add(b, a), f"{tag}: a + b != b + a")
            res.check(ec_add(ab, c) == ec_add(a, ec_add(b, c)), f"{tag}: associativity")
    return res


def frobenius_suite(samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED):
    """F additive and curve preserving; F(xy) = F(x)F(y) on the torus; h(F) kills samples."""
    res = SuiteResult("frobenius")
    rng = random.Random(seed + 1)
    op = FrobeniusOp(5)
    for L, E, P in example_curves():
        pool = _pool(L, E, P, seed)
        for i in range(samples):
            a, b = (pool[rng.randrange(len(pool))] for _ in range(2))
            tag = f"{E} sample {i}"
            Fa = frob_apply(op, a, 1)
            res.check(Fa.on_curve(), f"{tag}: F(a) off the curve")
            res.check(frob_apply(op, ec_add(a, b), 1) == ec_add(Fa, frob_apply(op, b, 1)), f"{tag}: F not additive")
            x, y = _random_unit(rng, L), _random_unit(rng, L)
            res.check((x * y) ** 5 == (x**5) * (y**5), f"{tag}: torus Frobenius not multiplicative")
        h = minimal_poly_curve(E, 5)
        res.check(verify_relation(h, op, pool[:20]), f"{E}: minimal polynomial does not annihilate samples")
    return res


def hom_suite(samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED):
    """Random block homomorphisms G_m^2 x E -> G_m^2 x E respect addition."""
    res = SuiteResult("homomorphism")
    rng = random.Random(seed + 2)
    for L, E, P in example_curves():
        G = GroupDescriptor(L, 5, 2, (E,))
        pool = _pool(L, E, P, seed)
        for i in range(samples):
            tm = [[rng.randint(-2, 2) for _ in range(2)] for _ in range(2)]
            em = [[(rng.randint(-2, 2), rng.randint(-1, 1))]]
            h = GroupHom(G, G, tm, em)
            x = G.point((_random_unit(rng, L), _random_unit(rng, L)), (pool[rng.randrange(len(pool))],))
            y = G.point((_random_unit(rng, L), _random_unit(rng, L)), (pool[rng.randrange(len(pool))],))
            res.check(hom_apply(h, x + y) == hom_apply(h, x) + hom_apply(h, y), f"{E} sample {i}: hom not additive")
    return res


def formal_suite(samples=40, seed=DEFAULT_SEED):
    """Formal span coordinates agree with concrete arithmetic after materializing."""
    res = SuiteResult("formal coordinates")
    rng = random.Random(seed + 3)
    for L, E, P in example_curves():
        G = GroupDescriptor(L, 5, 1, (E,))
        space = SpanCoordinates(G)
        space.register(P, "P")
        op = FrobeniusOp(5)
        base = G.point((L.t,), (P,))
        fbase = space.lift(base)
        for i in range(samples):
            u, v, k = rng.randint(-3, 3), rng.randint(-2, 2), rng.randrange(3)
            lhs = (fbase * u + frob_apply(op, fbase * v, k)).materialize()
            rhs = base * u + frob_apply(op, base * v, k)
            res.check(lhs == rhs, f"{E} sample {i}: formal sum disagrees with concrete sum")
    return res


def scenario_suite():
    """Built-in scenarios load, validate and rebuild identically."""
    from .scenario import example_scenario, load_scenario

    res = SuiteResult("built-in scenarios")
    for which in (1, 2):
        st = load_scenario(example_scenario(which))
        res.check(st.certificate is not None, f"example{which}: certificate missing")
        res.check(len(st.gamma.generators) == 1, f"example{which}: Gamma has the wrong rank")
        res.check(st.variety.n_torus == 2, f"example{which}: wrong variety")
    return res


def run_all(seed=DEFAULT_SEED, samples=DEFAULT_SAMPLES):
    return [
        group_law_suite(samples, seed),
        frobenius_suite(samples, seed),
        hom_suite(samples, seed),
        formal_suite(max(1, samples // 5), seed),
        scenario_suite(),
    ]
