"""JSON scenarios: group, named points, Gamma, X, bounds and an optional certificate.

Schema (version 1)::

    {
      "schema": "fsets-scenario/1",
      "p": 5, "q": 5, "tower": "t^3 + 1", "torus_dim": 2,
      "curves": [{"name": "E", "a4": 0, "a6": 1}],
      "points": {
        "P": {"curve": "E", "x": "t", "y": "s"},
        "Q": {"torus": ["t", "t + 1"], "elliptic": ["P"]}
      },
      "gamma": ["Q"],
      "variety": {"torus": ["x2 - x1 - 1"], "elliptic": [null]},
      "bounds": {"B": 130, "N": 3},
      "representation": "formal",
      "certificate": {"groupless": [...], "generalized": [...], "pseudo": [...]}
    }

Points named by ``curve``/``x``/``y`` are single curve points; the others
are points of the ambient group and must give one torus coordinate per
torus factor and one elliptic entry (a curve point name or ``"O"``) per
curve.  Wherever a certificate needs a point it accepts a name, ``"O"``, an
inline point literal, or ``{"point": ref, "frobenius": k, "scale": c}``
meaning ``c * F^k(ref)``.

A groupless set is ``{"base": ref, "summands": [{"point": ref, "stride": k}],
"links": [[0, 1]], "label": str}``.  A generalized set is ``{"hom": hom,
"image": groupless}`` where ``hom`` has ``torus_dim``, ``curves`` (names),
``torus_matrix`` and ``elliptic_matrix`` (entries ``[u, v]`` for u + vF);
refs inside ``image`` live in the target group.  A pseudo set adds
``"offset": ref`` and ``"subgroup": [refs]``, with an optional ``"witness"``.
"""

import json
from dataclasses import dataclass

from .errors import FSetsError, ParseError, ValidationError
from .exactfield import Poly, TowerField
from .fsetalgebra import FSetUnion, GeneralizedFSet, GrouplessFSet, PseudoGeneralizedFSet
from .frobenius import FrobeniusOp, frob_apply
from .groupmodel import CurveParams, ECPoint, GroupDescriptor, GroupHom
from .intersector import DEFAULT_BOUND, DEFAULT_CAP, Certificate, Setup
from .parsing import parse_tower
from .variety import Subvariety
from .zfmodule import SpanCoordinates, Subgroup

SCHEMA = "fsets-scenario/1"


def _poly_from_text(text, p):
    L = TowerField(p, Poly([0, 1], p))  # any valid tower works for parsing in t
    x = parse_tower(text, L)
    if not x.in_base or not x.a.den.is_one:
        raise ValidationError(f"tower modulus {text!r} must be a polynomial in t")
    return x.a.num


def _require(obj, key, where):
    if key not in obj:
        raise ValidationError(f"{where}: missing field {key!r}")
    return obj[key]


def _int(v, where):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValidationError(f"{where}: expected an integer, got {v!r}")
    return v


@dataclass
class _Context:
    field: TowerField
    group: GroupDescriptor
    space: SpanCoordinates
    formal: bool
    curves: dict
    curve_points: dict
    points: dict


class _Builder:
    def __init__(self, data):
        self.data = data

    def build(self):
        d = self.data
        if not isinstance(d, dict):
            raise ValidationError("scenario must be a JSON object")
        schema = d.get("schema")
        if schema != SCHEMA:
            raise ValidationError(f"unsupported schema {schema!r}; expected {SCHEMA!r}")
        p = _int(_require(d, "p", "scenario"), "p")
        q = _int(d.get("q", p), "q")
        tower = _require(d, "tower", "scenario")
        field = TowerField(p, _poly_from_text(tower, p))
        curves = {}
        for i, c in enumerate(d.get("curves", [])):
            name = c.get("name", f"E{i + 1}")
            if name in curves:
                raise ValidationError(f"duplicate curve name {name!r}")
            curves[name] = CurveParams(p, _int(_require(c, "a4", name), "a4"), _int(_require(c, "a6", name), "a6"))
        order = list(curves)
        n_torus = _int(d.get("torus_dim", 0), "torus_dim")
        group = GroupDescriptor(field, q, n_torus, tuple(curves[n] for n in order))
        rep = d.get("representation", "formal")
        if rep not in ("formal", "concrete"):
            raise ValidationError(f"representation must be 'formal' or 'concrete', got {rep!r}")
        space = SpanCoordinates(group)
        ctx = _Context(field, group, space, rep == "formal", curves, {}, {})
        self.ctx = ctx
        self._points(d.get("points", {}), order)

        gamma_refs = _require(d, "gamma", "scenario")
        if not isinstance(gamma_refs, list) or not gamma_refs:
            raise ValidationError("gamma must be a nonempty list of point references")
        gamma = Subgroup([self.ref(r, "gamma") for r in gamma_refs], group)

        var = d.get("variety", {})
        ell = var.get("elliptic")
        X = Subvariety.from_strings(n_torus, len(order), p, var.get("torus", []), ell)
        bounds = d.get("bounds", {})
        B = _int(bounds.get("B", DEFAULT_BOUND), "bounds.B")
        N = _int(bounds.get("N", DEFAULT_CAP), "bounds.N")
        if B < 0 or N < 0:
            raise ValidationError("bounds must be nonnegative")
        st = Setup(d.get("name", "scenario"), field, group, space, gamma, X, B, N, None, dict(ctx.points), dict(curves), dict(ctx.curve_points))
        if "certificate" in d and d["certificate"] is not None:
            st.certificate = self.certificate(d["certificate"], gamma, B, N)
        return st

    # ------------------------------------------------------------ points

    def _points(self, pts, order):
        ctx = self.ctx
        if not isinstance(pts, dict):
            raise ValidationError("points must be an object")
        for name, entry in pts.items():
            if name == "O":
                raise ValidationError("'O' is reserved for the identity")
            if "curve" in entry:
                curve = ctx.curves.get(entry["curve"])
                if curve is None:
                    raise ValidationError(f"point {name}: unknown curve {entry['curve']!r}")
                x = parse_tower(_require(entry, "x", name), ctx.field)
                y = parse_tower(_require(entry, "y", name), ctx.field)
                P = ECPoint(x, y, curve, ctx.field)
                ctx.curve_points[name] = P
                if ctx.formal:
                    ctx.space.register(P, name)
        for name, entry in pts.items():
            if "curve" not in entry:
                ctx.points[name] = self.literal(entry, ctx.group, name)

    def literal(self, entry, group, where, space=None):
        ctx = self.ctx
        torus = entry.get("torus", [])
        ell = entry.get("elliptic", [])
        if len(torus) != group.n_torus:
            raise ValidationError(f"{where}: expected {group.n_torus} torus coordinates, got {len(torus)}")
        if len(ell) != group.n_elliptic:
            raise ValidationError(f"{where}: expected {group.n_elliptic} elliptic entries, got {len(ell)}")
        tvals = [parse_tower(str(c), ctx.field) for c in torus]
        if any(c.is_zero for c in tvals):
            raise ValidationError(f"{where}: torus coordinates must be nonzero")
        evals = []
        for curve, e in zip(group.curves, ell):
            if e in (None, "O"):
                evals.append(None)
                continue
            P = ctx.curve_points.get(e)
            if P is None:
                raise ValidationError(f"{where}: unknown curve point {e!r}")
            if P.curve != curve:
                raise ValidationError(f"{where}: point {e!r} is on the wrong curve")
            evals.append(P)
        pt = group.point(tvals, evals)
        if ctx.formal:
            sp = space or ctx.space.for_group(group)
            for P in evals:
                if P is not None:
                    sp.register(P)
            return sp.lift(pt)
        return pt

    def ref(self, r, where, group=None, space=None):
        ctx = self.ctx
        group = group or ctx.group
        same = group == ctx.group
        if isinstance(r, str):
            if r == "O":
                if ctx.formal:
                    return (space or ctx.space.for_group(group)).identity()
                return group.identity()
            if not same:
                raise ValidationError(f"{where}: named points live in the ambient group; use a literal")
            if r not in ctx.points:
                raise ValidationError(f"{where}: unknown point {r!r}")
            return ctx.points[r]
        if isinstance(r, dict):
            if "point" in r:
                P = self.ref(r["point"], where, group, space)
                k = _int(r.get("frobenius", 0), f"{where}.frobenius")
                c = _int(r.get("scale", 1), f"{where}.scale")
                if k < 0:
                    raise ValidationError(f"{where}: Frobenius power must be nonnegative")
                if k:
                    P = frob_apply(FrobeniusOp(group.q), P, k)
                return P * c
            return self.literal(r, group, where, space)
        raise ValidationError(f"{where}: bad point reference {r!r}")

    # ------------------------------------------------------- certificate

    def groupless(self, entry, where, group=None, space=None):
        base = self.ref(entry.get("base", "O"), f"{where}.base", group, space)
        summands = []
        for i, s in enumerate(entry.get("summands", [])):
            P = self.ref(_require(s, "point", f"{where}.summands[{i}]"), f"{where}.summands[{i}]", group, space)
            summands.append((P, _int(s.get("stride", 1), "stride")))
        links = entry.get("links")
        op = FrobeniusOp((group or self.ctx.group).q)
        return GrouplessFSet(base, summands, op, links=links, label=entry.get("label", where))

    def hom(self, entry, where):
        ctx = self.ctx
        names = entry.get("curves", [])
        for n in names:
            if n not in ctx.curves:
                raise ValidationError(f"{where}: unknown curve {n!r}")
        H = GroupDescriptor(ctx.field, ctx.group.q, _int(entry.get("torus_dim", 0), "torus_dim"), tuple(ctx.curves[n] for n in names))
        return GroupHom(ctx.group, H, entry.get("torus_matrix", []), entry.get("elliptic_matrix", []))

    def certificate(self, entry, gamma, B, N):
        ctx = self.ctx
        gl = [self.groupless(s, f"groupless[{i}]") for i, s in enumerate(entry.get("groupless", []))]
        gen = []
        for i, s in enumerate(entry.get("generalized", [])):
            where = f"generalized[{i}]"
            h = self.hom(_require(s, "hom", where), where)
            sp = ctx.space.for_group(h.target) if ctx.formal else None
            image = self.groupless(_require(s, "image", where), f"{where}.image", h.target, sp)
            gen.append(GeneralizedFSet(h, image, gamma, label=s.get("label", where)))
        pseudo = []
        for i, s in enumerate(entry.get("pseudo", [])):
            where = f"pseudo[{i}]"
            h = self.hom(_require(s, "hom", where), where)
            sp = ctx.space.for_group(h.target) if ctx.formal else None
            image = self.groupless(_require(s, "image", where), f"{where}.image", h.target, sp)
            offset = self.ref(_require(s, "offset", where), f"{where}.offset")
            sub = Subgroup([self.ref(r, f"{where}.subgroup") for r in _require(s, "subgroup", where)], ctx.group)
            pseudo.append(
                PseudoGeneralizedFSet(offset, sub, h, image, gamma, s.get("witness"), B, label=s.get("label", where))
            )
        return Certificate(FSetUnion(gl, gen, pseudo), N, B)


def load_scenario(data):
    """Build a Setup from parsed JSON; every failure surfaces as ValidationError or ParseError."""
    try:
        return _Builder(data).build()
    except (ParseError, ValidationError):
        raise
    except FSetsError as e:
        raise ValidationError(str(e)) from e
    except (KeyError, TypeError, AttributeError) as e:
        raise ValidationError(f"malformed scenario: {e}") from e


def read_scenario(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: {e}") from e
    except OSError as e:
        raise ParseError(f"{path}: {e.strerror}") from e
    return load_scenario(data)


def example_scenario(which):
    """The built-in scenarios as JSON, so they can be written out and reloaded."""
    if which not in (1, 2):
        raise ValueError("built-in scenarios are 1 and 2")
    tower, a4, a6 = ("t^3 + 1", 0, 1) if which == 1 else ("t^3 + t", 1, 0)
    data = {
        "schema": SCHEMA,
        "name": f"example{which}",
        "p": 5,
        "q": 5,
        "tower": tower,
        "torus_dim": 2,
        "curves": [{"name": "E", "a4": a4, "a6": a6}],
        "points": {
            "P": {"curve": "E", "x": "t", "y": "s"},
            "Q": {"torus": ["t", "t + 1"], "elliptic": ["P"]},
            "Q1": {"torus": ["t", "t + 1"], "elliptic": ["O"]},
            "Q2": {"torus": ["1", "1"], "elliptic": ["P"]},
        },
        "gamma": ["Q"],
        "variety": {"torus": ["x2 - x1 - 1"], "elliptic": [None]},
        "bounds": {"B": DEFAULT_BOUND, "N": DEFAULT_CAP},
    }
    if which == 1:
        data["certificate"] = {
            "groupless": [
                {
                    "label": "F^{2n}(Q1) + F^{4n}(Q2)",
                    "summands": [{"point": "Q1", "stride": 2}, {"point": "Q2", "stride": 4}],
                    "links": [[0, 1]],
                },
                {
                    "label": "F^{2n+1}(Q1) - F^{4n+2}(Q2)",
                    "summands": [
                        {"point": {"point": "Q1", "frobenius": 1}, "stride": 2},
                        {"point": {"point": "Q2", "frobenius": 2, "scale": -1}, "stride": 4},
                    ],
                    "links": [[0, 1]],
                },
            ]
        }
    else:
        data["certificate"] = {
            "generalized": [
                {
                    "label": "pi^-1(F^n(t, t+1))",
                    "hom": {"torus_dim": 2, "curves": [], "torus_matrix": [[1, 0], [0, 1]], "elliptic_matrix": []},
                    "image": {"summands": [{"point": {"torus": ["t", "t + 1"], "elliptic": []}, "stride": 1}]},
                }
            ]
        }
    return data
