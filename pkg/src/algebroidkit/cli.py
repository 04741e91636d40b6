"""Command-line front end.

Exit status: 0 when the computation succeeds or the check passes, 1 when a
mathematical check fails, 2 on usage, file or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .algebroid import schouten, validate_algebroid
from .coeffring import DivisionByZero, parse_expr
from .calculus import (
    check_cocycle,
    de_rham,
    divergence_from_odd_volume,
    generating_from_divergence,
    generating_from_odd_volume,
    lie_derivative_form,
)
from .exterior import Form, Multivector, OddVolume, wedge
from .homology import NotClosed, NotFiniteDimensional, duality_check
from .io import SchemaError, load_definition
from .metricconn import (
    SingularMetric,
    curvature_identity_check,
    divergence_from_connection,
    divergence_from_metric_volume,
    levi_civita,
    metricity_residuals,
    torsion_residuals,
)
from .modular import (
    anchor_morphism,
    composition_check,
    coordinate_divergence,
    exactness,
    identity_morphism,
    modular_of_morphism,
    modular_representative,
    modular_via_divergences,
    modular_via_lie_derivatives,
    validate_morphism,
    zero_morphism,
)
from .parsing import ParseError
from .poisson import JacobiViolation, cotangent_algebroid, jacobi_residual
from .randoms import DEFAULT_SEED, random_form, random_multivector, rng_for

__all__ = ["main", "run", "RunConfig"]


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list
    output: str = "text"
    degree_bound: int = 3
    seed: int = DEFAULT_SEED
    count: int = 100

    def __post_init__(self):
        if self.degree_bound < 0:
            raise UsageError("--degree-bound must be >= 0")
        if self.count < 1:
            raise UsageError("--count must be >= 1")


class Report:
    """Collects lines for text output and a dict for JSON output."""

    def __init__(self):
        self.lines = []
        self.data = {}
        self.ok = True

    def add(self, key, value, text=None):
        self.data[key] = value
        if text is not None:
            self.lines.append(text)

    def fail(self):
        self.ok = False


def _load(path):
    kind, obj = load_definition(path)
    if kind == "bivector":
        return cotangent_algebroid(obj), obj
    return obj, None


def _load_algebroid(path):
    return _load(path)[0]


def _load_bivector(path):
    kind, obj = load_definition(path)
    if kind != "bivector":
        raise UsageError(f"{path} is not a bivector definition")
    return obj


def _fmt(E, x):
    return E.format(x) if isinstance(x, (Form, Multivector)) else str(x)


def _residual_dict(E, residuals):
    out = {}
    for key, val in residuals.items():
        label = ",".join(str(k + 1) for k in (key if isinstance(key, tuple) else (key,)))
        if isinstance(val, tuple):
            out[label] = [str(v) for v in val]
        else:
            out[label] = _fmt(E, val)
    return out


def _volume(E, args):
    if getattr(args, "volume", None):
        return OddVolume(E.ring.one).scaled(_parse_coeff(E, args.volume))
    return OddVolume(E.ring.one)


def _parse_coeff(E, src):
    return parse_expr(src, E.ring)


def cmd_validate(cfg, args, rep):
    E = _load_algebroid(cfg.inputs[0])
    v = validate_algebroid(E)
    rep.add("jacobi", v.jacobi_ok)
    rep.add("anchor", v.anchor_ok, v.summary())
    if not v.ok:
        rep.fail()
        jac = _residual_dict(E, v.jacobi)
        anc = _residual_dict(E, v.anchor)
        rep.data["jacobi_residuals"] = jac
        rep.data["anchor_residuals"] = anc
        for k, r in jac.items():
            rep.lines.append(f"  Jacobi residual ({k}): {r}")
        for k, r in anc.items():
            rep.lines.append(f"  anchor residual ({k}): {r}")
    # d^2 on seeded random forms is a second, independent check
    rng = rng_for(cfg.seed)
    bad = 0
    for _ in range(cfg.count):
        w = random_form(E, rng.randint(0, E.n), rng)
        bad += bool(de_rham(E, de_rham(E, w)))
    rep.add("d_squared_failures", bad, f"d^2 = 0 on {cfg.count - bad}/{cfg.count} random forms")
    if bad:
        rep.fail()


def cmd_bracket(cfg, args, rep):
    E = _load_algebroid(cfg.inputs[0])
    a, b = E.parse_multivector(args.a), E.parse_multivector(args.b)
    r = E.format(schouten(E, a, b))
    rep.add("bracket", r, r)


def cmd_d(cfg, args, rep):
    E = _load_algebroid(cfg.inputs[0])
    r = E.format(de_rham(E, E.parse_form(args.form)))
    rep.add("d", r, r)


def cmd_lie(cfg, args, rep):
    E = _load_algebroid(cfg.inputs[0])
    a = E.parse_multivector(args.a)
    if args.multivector:
        r = E.format(schouten(E, a, E.parse_multivector(args.target)))
    else:
        r = E.format(lie_derivative_form(E, a, E.parse_form(args.target)))
    rep.add("lie", r, r)


def _div_lines(E, div, label):
    vals = [str(v) for v in div.values]
    return vals, f"{label}: " + ", ".join(f"div({E.frame[i]}) = {v}" for i, v in enumerate(vals))


def cmd_div(cfg, args, rep):
    E = _load_algebroid(cfg.inputs[0])
    if args.metric:
        if E.metric is None:
            raise UsageError("definition has no metric")
        div = divergence_from_metric_volume(E, E.metric)
        label = "metric volume"
    else:
        div = divergence_from_odd_volume(E, _volume(E, args))
        label = "odd volume"
    vals, text = _div_lines(E, div, label)
    rep.add("divergence", vals, text)
    c = check_cocycle(E, div)
    rep.add("cocycle", c.ok, f"cocycle condition: {'OK' if c.ok else 'FAILED'}")
    if not c.ok:
        rep.fail()


def cmd_genop(cfg, args, rep):
    E = _load_algebroid(cfg.inputs[0])
    mu = _volume(E, args)
    div = divergence_from_odd_volume(E, mu)
    if args.a is not None:
        a = E.parse_multivector(args.a)
        r = generating_from_odd_volume(E, mu, a)
        rep.add("result", E.format(r), E.format(r))
        if r != generating_from_divergence(E, div, a):
            rep.fail()
            rep.lines.append("construction routes disagree")
        return
    rng = rng_for(cfg.seed)
    gen_bad = route_bad = sq_bad = 0
    for _ in range(cfg.count):
        p = rng.randint(0, E.n)
        q = rng.randint(0, E.n - p)
        a, b = random_multivector(E, p, rng), random_multivector(E, q, rng)
        g = lambda x: generating_from_divergence(E, div, x)
        s = -1 if p % 2 else 1
        rhs = (g(wedge(a, b)) - wedge(g(a), b) - wedge(a, g(b)).scale(s)).scale(s)
        gen_bad += schouten(E, a, b) != rhs
        route_bad += generating_from_odd_volume(E, mu, a) != g(a)
        sq_bad += bool(g(g(a)))
    rep.add("generating_failures", gen_bad, f"generating identity: {cfg.count - gen_bad}/{cfg.count}")
    rep.add("route_failures", route_bad, f"routes agree: {cfg.count - route_bad}/{cfg.count}")
    rep.add("square_failures", sq_bad, f"operator squares to zero: {cfg.count - sq_bad}/{cfg.count}")
    if gen_bad or route_bad or sq_bad:
        rep.fail()


def cmd_modular(cfg, args, rep):
    E = _load_algebroid(cfg.inputs[0])
    phi = modular_representative(E)
    rep.add("representative", E.format(phi), f"modular form: {E.format(phi)}")
    closed = de_rham(E, phi)
    rep.add("closedness_residual", E.format(closed), f"d(phi) = {E.format(closed)}")
    agree = modular_via_divergences(E) == phi == modular_via_lie_derivatives(E)
    rep.add("routes_agree", agree, f"routes agree: {'yes' if agree else 'no'}")
    cls = exactness(E, phi, cfg.degree_bound)
    rep.add("class", cls.status, f"class: {cls.status}")
    if closed or not agree:
        rep.fail()


def cmd_morphism(cfg, args, rep):
    E = _load_algebroid(cfg.inputs[0])
    if args.kind == "anchor":
        kappa = anchor_morphism(E)
    elif args.kind == "identity":
        kappa = identity_morphism(E)
    else:
        kappa = zero_morphism(E, E)
    v = validate_morphism(kappa)
    rep.add("valid", v.ok, v.summary())
    if not v.ok:
        rep.fail()
        return
    T = anchor_morphism(E).target
    d1 = coordinate_divergence(E)
    d2 = coordinate_divergence(kappa.target)
    dM = coordinate_divergence(T)
    eta = modular_of_morphism(kappa, d1, d2)
    rep.add("modular_form", E.format(eta), f"modular form of morphism: {E.format(eta)}")
    c = composition_check(kappa, d1, d2, dM)
    rep.add("composition", c.ok, f"composition identity: {'OK' if c.ok else 'FAILED'}")
    if not c.ok:
        rep.fail()


def _phi_for(E, args):
    if getattr(args, "deformed", False):
        return modular_representative(E)
    if getattr(args, "phi", None):
        phi = E.parse_form(args.phi)
        if set(phi.degrees()) - {1}:
            raise UsageError("--phi must be a 1-form")
        return phi
    return None


def cmd_betti(cfg, args, rep):
    E = _load_algebroid(cfg.inputs[0])
    r = duality_check(E, phi=_phi_for(E, args))
    d = r.as_dict()
    for k, v in d.items():
        rep.data[k] = v
    rep.lines.append(f"cohomology: {' '.join(map(str, d['cohomology']))}")
    rep.lines.append(f"homology:   {' '.join(map(str, d['homology']))}")
    rep.lines.append(f"duality:    {'yes' if d['duality'] else 'no'}")
    if not r.duality:
        rep.fail()


def cmd_duality(cfg, args, rep):
    E = _load_algebroid(cfg.inputs[0])
    for label, phi in (("undeformed", None), ("deformed", modular_representative(E))):
        r = duality_check(E, phi=phi)
        rep.data[label] = r.as_dict()
        rep.lines.append(f"{label}: H^* = {list(r.cohomology)}, H_* = {list(r.homology)}, "
                         f"duality {'holds' if r.duality else 'FAILS'}")
        if not r.duality:
            rep.fail()


def _connection(E):
    if E.metric is None:
        raise UsageError("definition has no metric")
    return levi_civita(E, E.metric)


def cmd_levicivita(cfg, args, rep):
    E = _load_algebroid(cfg.inputs[0])
    C = _connection(E)
    symbols = {}
    for i in range(E.n):
        for j in range(E.n):
            for k in range(E.n):
                v = C.gamma[i][j][k]
                if v:
                    symbols[f"{k + 1},{i + 1},{j + 1}"] = str(v)
    rep.add("christoffel", symbols)
    rep.lines.append("Christoffel symbols Gamma^k_ij (zero ones omitted):")
    rep.lines.extend(f"  Gamma^{k.split(',')[0]}_{''.join(k.split(',')[1:])} = {v}" for k, v in symbols.items())
    tors = torsion_residuals(E, C)
    metr = metricity_residuals(E, C, E.metric)
    rep.add("torsion_free", not tors, f"torsion residual zero: {'yes' if not tors else 'no'}")
    rep.add("metric", not metr, f"metricity residual zero: {'yes' if not metr else 'no'}")
    d1 = divergence_from_connection(E, C)
    d2 = divergence_from_metric_volume(E, E.metric)
    vals, text = _div_lines(E, d1, "connection divergence")
    rep.add("divergence", vals, text)
    rep.add("matches_metric_volume", d1 == d2,
            f"equals metric-volume divergence: {'yes' if d1 == d2 else 'no'}")
    if tors or metr or d1 != d2:
        rep.fail()


def cmd_curvcheck(cfg, args, rep):
    E = _load_algebroid(cfg.inputs[0])
    r = curvature_identity_check(E, _connection(E))
    rep.data.update({"operator_identity": r.operator_identity, "ricci_symmetric": r.ricci_symmetric,
                     "bianchi": r.bianchi, "torsion_free": r.torsion_free, "equivalence": r.equivalence})
    rep.lines.append(r.summary())
    if not r.equivalence:
        rep.fail()


def cmd_poisson(cfg, args, rep):
    P = _load_bivector(cfg.inputs[0])
    E = cotangent_algebroid(P)
    v = validate_algebroid(E)
    rep.add("valid", v.ok, f"cotangent algebroid: {v.summary()}")
    if not v.ok:
        rep.fail()
        return
    phi = modular_representative(E)
    rep.add("modular_form", E.format(phi), f"modular form: {E.format(phi)}")
    agree = modular_via_lie_derivatives(E) == phi == modular_via_divergences(E)
    rep.add("routes_agree", agree, f"routes agree: {'yes' if agree else 'no'}")
    if not agree:
        rep.fail()


def cmd_jacobi(cfg, args, rep):
    P = _load_bivector(cfg.inputs[0])
    res = jacobi_residual(P)
    names = [f"D{u}" for u in P.ring.names]
    text = res.format(names)
    rep.add("residual", text, f"[P,P]/2 = {text}")
    valid = validate_algebroid(cotangent_algebroid(P)).ok
    agree = valid == (not res)
    rep.add("validator_agrees", agree, f"validator agrees: {'yes' if agree else 'no'}")
    if res or not agree:
        rep.fail()


COMMANDS = {
    "validate": cmd_validate,
    "bracket": cmd_bracket,
    "d": cmd_d,
    "lie": cmd_lie,
    "div": cmd_div,
    "genop": cmd_genop,
    "modular": cmd_modular,
    "morphism": cmd_morphism,
    "betti": cmd_betti,
    "duality": cmd_duality,
    "levicivita": cmd_levicivita,
    "curvcheck": cmd_curvcheck,
    "poisson": cmd_poisson,
    "jacobi": cmd_jacobi,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=None)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--count", type=int, default=100)
    common.add_argument("--degree-bound", type=int, default=3)

    parser = _Parser(prog="algebroidkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("file", help="definition file or corpus entry name")
        return p

    add("validate", "check the algebroid axioms")
    p = add("bracket", "Schouten bracket of two multivectors")
    p.add_argument("a")
    p.add_argument("b")
    p = add("d", "de Rham differential of a form")
    p.add_argument("form")
    p = add("lie", "Lie derivative along a multivector")
    p.add_argument("a")
    p.add_argument("target")
    p.add_argument("--multivector", action="store_true", help="target is a multivector")
    p = add("div", "divergence of an odd volume")
    p.add_argument("--volume", help="coefficient of the volume (default 1)")
    p.add_argument("--metric", action="store_true", help="use the metric volume")
    p = add("genop", "generating operator, or a seeded property check when no argument is given")
    p.add_argument("a", nargs="?")
    p.add_argument("--volume")
    add("modular", "modular class representative")
    p = add("morphism", "modular form of a morphism and the composition identity")
    p.add_argument("--kind", choices=("anchor", "identity", "zero"), default="anchor")
    p = add("betti", "Betti numbers and Poincare duality (Lie algebras only)")
    p.add_argument("--phi", help="closed 1-form for the deformed complexes")
    p.add_argument("--deformed", action="store_true", help="deform by the modular form")
    add("duality", "duality with and without the modular deformation")
    add("levicivita", "Levi-Civita connection of the file's metric")
    add("curvcheck", "curvature identity against Ricci symmetry and Bianchi")
    add("poisson", "cotangent algebroid and modular form of a bivector")
    add("jacobi", "Jacobi residual of a bivector")
    return parser


def run(argv):
    """Return (exit status, output text)."""
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format or ("json" if args.command == "betti" else "text")
        cfg = RunConfig(args.command, [args.file], fmt, args.degree_bound, args.seed, args.count)
        rep = Report()
        COMMANDS[args.command](cfg, args, rep)
    except UsageError as err:
        return 2, f"error: {err}\n"
    except (SchemaError, ParseError, DivisionByZero, FileNotFoundError, IsADirectoryError, NotFiniteDimensional,
            SingularMetric) as err:
        return 2, f"error: {err}\n"
    except (JacobiViolation, NotClosed) as err:
        return 1, f"error: {err}\n"
    if fmt == "json":
        out = json.dumps(rep.data) + "\n"
    else:
        out = "\n".join(rep.lines) + "\n"
    return (0 if rep.ok else 1), out


def main(argv=None):
    status, out = run(sys.argv[1:] if argv is None else argv)
    (sys.stdout if status == 0 or not out.startswith("error:") else sys.stderr).write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
