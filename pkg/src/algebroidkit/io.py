"""Reading and writing algebroid and bivector definition files.

Files are JSON and checked against the schemas shipped in ``schemas/``.
Expressions are strings in the coefficient and exterior grammars.  Dumps
are canonical: fixed field order, canonical expression printing, sorted
bracket keys, two-space indentation and a trailing newline.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from .algebroid import LieAlgebroid
from .coeffring import PolyRing, parse_expr
from .exterior import Multivector, parse_graded
from .parsing import ParseError
from .poisson import PoissonBivector

__all__ = [
    "SchemaError",
    "ExpressionError",
    "load_algebroid",
    "load_bivector",
    "load_definition",
    "loads_algebroid",
    "loads_bivector",
    "loads_definition",
    "dumps_algebroid",
    "dumps_bivector",
    "corpus_names",
    "corpus_path",
]


class SchemaError(ValueError):
    """A definition file is malformed; ``path`` locates the offending field."""

    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class ExpressionError(SchemaError):
    """An expression inside a definition file failed to parse."""

    def __init__(self, path, err):
        self.pos = getattr(err, "pos", None)
        super().__init__(path, str(err))


def _format_path(parts):
    out = "$"
    for p in parts:
        if isinstance(p, int):
            out += f"[{p}]"
        elif p.isidentifier():
            out += f".{p}"
        else:
            out += f"[{json.dumps(p)}]"
    return out


class _Obj(dict):
    duplicates = ()


def _pairs_hook(pairs):
    obj = _Obj()
    dupes = []
    for k, v in pairs:
        if k in obj:
            dupes.append(k)
        obj[k] = v
    obj.duplicates = tuple(dupes)
    return obj


def _find_duplicates(node, path=()):
    if isinstance(node, _Obj):
        if node.duplicates:
            raise SchemaError(_format_path(path + (node.duplicates[0],)), "duplicate key")
        for k, v in node.items():
            _find_duplicates(v, path + (k,))
    elif isinstance(node, list):
        for i, v in enumerate(node):
            _find_duplicates(v, path + (i,))


@lru_cache(maxsize=None)
def _schema(kind):
    text = resources.files("algebroidkit").joinpath("schemas").joinpath(f"{kind}.v1.json").read_text()
    return json.loads(text)


def _parse_document(text, kind=None):
    try:
        doc = json.loads(text, object_pairs_hook=_pairs_hook)
    except json.JSONDecodeError as err:
        raise SchemaError("$", f"invalid JSON: {err}") from None
    _find_duplicates(doc)
    if not isinstance(doc, dict):
        raise SchemaError("$", "definition must be a JSON object")
    if kind is None:
        kind = "bivector" if "bivector" in doc else "algebroid"
    validator = jsonschema.Draft202012Validator(_schema(kind))
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        err = errors[0]
        raise SchemaError(_format_path(tuple(err.absolute_path)), err.message)
    return kind, doc


def _expr(src, ring, path):
    try:
        return parse_expr(str(src), ring)
    except ParseError as err:
        raise ExpressionError(_format_path(path), err) from None


def _index(token, names, path):
    token = token.strip()
    if token.isdigit():
        i = int(token) - 1
    elif token in names:
        i = names.index(token)
    else:
        raise SchemaError(_format_path(path), f"unknown frame element {token!r}")
    if not 0 <= i < len(names):
        raise SchemaError(_format_path(path), f"frame index {token} out of range")
    return i


def _algebroid_from_doc(doc):
    coords = list(doc["coordinates"])
    frame = list(doc["frame"])
    coframe = list(doc.get("coframe") or [f"a{i + 1}" for i in range(len(frame))])
    n, m = len(frame), len(coords)
    clash = set(coords) & (set(frame) | set(coframe))
    if clash:
        raise SchemaError("$.frame", f"names shared with coordinates: {sorted(clash)}")
    if len(coframe) != n:
        raise SchemaError("$.coframe", f"expected {n} names, got {len(coframe)}")
    ring = PolyRing(coords)
    anchor = doc["anchor"]
    if len(anchor) != n:
        raise SchemaError("$.anchor", f"expected {n} rows, got {len(anchor)}")
    rows = []
    for i, row in enumerate(anchor):
        if len(row) != m:
            raise SchemaError(_format_path(("anchor", i)), f"expected {m} entries, got {len(row)}")
        rows.append([_expr(v, ring, ("anchor", i, a)) for a, v in enumerate(row)])
    brackets = {}
    for key, src in doc.get("brackets", {}).items():
        path = ("brackets", key)
        left, right = key.split(",")
        i, j = _index(left, frame, path), _index(right, frame, path)
        if i >= j:
            raise SchemaError(_format_path(path), "bracket keys must list i < j; the rest follows by antisymmetry")
        if (i, j) in brackets:
            raise SchemaError(_format_path(path), f"bracket [{frame[i]}, {frame[j]}] given twice")
        try:
            value = parse_graded(Multivector, str(src), ring, n, frame)
        except ParseError as err:
            raise ExpressionError(_format_path(path), err) from None
        if any(len(I) != 1 for I in value.terms):
            raise SchemaError(_format_path(path), "bracket value must be a section")
        brackets[(i, j)] = value
    metric = None
    if "metric" in doc:
        metric = doc["metric"]
        if len(metric) != n or any(len(r) != n for r in metric):
            raise SchemaError("$.metric", f"expected a {n}x{n} matrix")
        metric = [[_expr(v, ring, ("metric", i, j)) for j, v in enumerate(r)] for i, r in enumerate(metric)]
        for i in range(n):
            for j in range(i + 1, n):
                if metric[i][j] != metric[j][i]:
                    raise SchemaError(_format_path(("metric", i, j)), "metric is not symmetric")
    return LieAlgebroid(ring, frame, rows, brackets, coframe=coframe, name=doc.get("name"), metric=metric)


def _bivector_from_doc(doc):
    ring = PolyRing(list(doc["coordinates"]))
    m = ring.nvars
    entries = {}
    for key, src in doc["bivector"].items():
        path = ("bivector", key)
        a, b = (int(t) - 1 for t in key.split(",")) if "," in key else (int(key[0]) - 1, int(key[1]) - 1)
        if not 0 <= a < b < m:
            raise SchemaError(_format_path(path), f"key must name a pair a < b within 1..{m}")
        if (a, b) in entries:
            raise SchemaError(_format_path(path), "entry given twice")
        entries[(a, b)] = _expr(src, ring, path)
    P = PoissonBivector.from_upper(ring, entries)
    P.name = doc.get("name")
    return P


def loads_definition(text):
    """Return ("algebroid", LieAlgebroid) or ("bivector", PoissonBivector)."""
    kind, doc = _parse_document(text)
    if kind == "bivector":
        return kind, _bivector_from_doc(doc)
    return kind, _algebroid_from_doc(doc)


def loads_algebroid(text):
    return _algebroid_from_doc(_parse_document(text, "algebroid")[1])


def loads_bivector(text):
    return _bivector_from_doc(_parse_document(text, "bivector")[1])


def corpus_names():
    root = resources.files("algebroidkit").joinpath("corpus")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def corpus_path(name):
    return resources.files("algebroidkit").joinpath("corpus").joinpath(f"{name}.json")


def _read(source):
    p = Path(source)
    if p.exists():
        return p.read_text()
    if str(source) in corpus_names():
        return corpus_path(str(source)).read_text()
    raise FileNotFoundError(f"no such file or corpus entry: {source}")


def load_definition(source):
    """Load from a path, or from the shipped corpus by entry name."""
    return loads_definition(_read(source))


def load_algebroid(source):
    return loads_algebroid(_read(source))


def load_bivector(source):
    return loads_bivector(_read(source))


def _render(obj, indent=0):
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k, ensure_ascii=False)}: {_render(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list) and any(isinstance(v, (list, dict)) for v in obj):
        return "[\n" + ",\n".join(inner + _render(v, indent + 1) for v in obj) + "\n" + pad + "]"
    return json.dumps(obj, ensure_ascii=False)


def _dump(obj):
    """Two-space indentation, with arrays of scalars kept on one line."""
    return _render(obj) + "\n"


def dumps_algebroid(E):
    doc = {}
    if E.name:
        doc["name"] = E.name
    doc["coordinates"] = list(E.ring.names)
    doc["frame"] = list(E.frame)
    doc["coframe"] = list(E.coframe)
    doc["anchor"] = [[str(v) for v in row] for row in E.anchor]
    doc["brackets"] = {f"{i + 1},{j + 1}": E.format(E.frame_bracket(i, j))
                       for i in range(E.n) for j in range(i + 1, E.n) if E.frame_bracket(i, j)}
    if E.metric is not None:
        doc["metric"] = [[str(v) for v in row] for row in E.metric]
    return _dump(doc)


def dumps_bivector(P):
    doc = {}
    if getattr(P, "name", None):
        doc["name"] = P.name
    doc["coordinates"] = list(P.ring.names)
    sep = "," if P.m > 9 else ""
    doc["bivector"] = {f"{a + 1}{sep}{b + 1}": str(v) for (a, b), v in sorted(P.upper().items())}
    return _dump(doc)
