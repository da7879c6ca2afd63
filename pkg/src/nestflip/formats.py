"""Text formats for instances, graphs and flip sequences.

Every document is a sequence of ``key: value`` lines where the value is a
single JSON value. Blank lines and lines starting with ``#`` are ignored,
keys may not repeat, and unknown keys are rejected.

Instance keys::

    n: 3                         # optional when degrees or formula fix it
    degrees: [1, 1, 2]           # or: formula: "H2O"
    valences: {"S": 2}           # overrides for formula lookup
    labels: ["H", "H", "O"]      # optional, one per vertex
    fragments: [[0, 2]]          # vertex indices (or unique labels)
    tree: "((0 2) 1)"            # alternative to fragments
    graph_g: [[0, 2, 1], [1, 2, 1]]
    graph_h: [[0, 2, 1], [1, 2, 1]]

Graph documents carry ``n`` and ``edges``; flip documents carry the header
keys ``delta``, ``height``, ``bound``, ``length`` and ``verified`` followed
by one ``flip: [a, b, c, d]`` line per flip, meaning ab, cd become ac, bd.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InvalidGraph, ParseError, UnknownVertex
from .fragments import NestedCollection, validate_and_normalize
from .multigraph import Flip, FlipSequence, Multigraph

DEFAULT_VALENCES = {"H": 1, "O": 2, "N": 3, "C": 4}

_INSTANCE_KEYS = {"n", "degrees", "formula", "valences", "labels", "fragments",
                  "tree", "graph_g", "graph_h"}
_FLIP_HEADER = ("delta", "height", "bound", "length", "verified")


@dataclass
class ValenceTable:
    valences: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_VALENCES))

    def __post_init__(self):
        for sym, k in self.valences.items():
            if not isinstance(k, int) or isinstance(k, bool) or k < 1:
                raise ParseError(f"valence of {sym!r} must be a positive integer")

    def with_overrides(self, extra: dict[str, int]) -> ValenceTable:
        return ValenceTable({**self.valences, **extra})

    def __getitem__(self, symbol: str) -> int:
        try:
            return self.valences[symbol]
        except KeyError:
            raise ParseError(f"no valence known for element {symbol!r}") from None


@dataclass
class Instance:
    n: int
    degrees: tuple[int, ...]
    collection: NestedCollection
    labels: tuple[str, ...] | None = None
    graph_g: Multigraph | None = None
    graph_h: Multigraph | None = None

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (self.n, self.degrees, set(self.collection.sets), self.labels,
                self.graph_g, self.graph_h) == (
            other.n, other.degrees, set(other.collection.sets), other.labels,
            other.graph_g, other.graph_h)


@dataclass
class FlipDocument:
    flips: FlipSequence
    delta: int
    height: int
    bound: int
    verified: bool
    extra: dict = field(default_factory=dict)

    @property
    def length(self) -> int:
        return len(self.flips)

    def __eq__(self, other):
        if not isinstance(other, FlipDocument):
            return NotImplemented
        return (list(self.flips), self.delta, self.height, self.bound, self.verified, self.extra) == (
            list(other.flips), other.delta, other.height, other.bound, other.verified, other.extra)


# -- record layer ----------------------------------------------------------------

def _records(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ParseError("expected 'key: value'", lineno, 1)
        key = key.strip()
        if not re.fullmatch(r"[a-z_]+", key):
            raise ParseError(f"bad key {key!r}", lineno, 1)
        try:
            val = json.loads(value)
        except json.JSONDecodeError as e:
            col = raw.index(":") + 2 + e.pos
            raise ParseError(f"invalid value for {key}: {e.msg}", lineno, col) from None
        yield lineno, key, val


def _read(source) -> str:
    if isinstance(source, Path):
        return source.read_text()
    return source


def _int(value, what: str, line: int, minimum: int = 0) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ParseError(f"{what} must be an integer >= {minimum}", line)
    return value


def _edge_list(value, n: int, line: int) -> Multigraph:
    if not isinstance(value, list):
        raise ParseError("graph must be a list of [u, v, multiplicity]", line)
    entries = []
    for item in value:
        if not (isinstance(item, list) and len(item) in (2, 3)
                and all(isinstance(x, int) and not isinstance(x, bool) for x in item)):
            raise ParseError(f"bad edge entry {item!r}", line)
        entries.append(tuple(item))
    try:
        return Multigraph(n, entries)
    except InvalidGraph as e:
        raise ParseError(str(e), line) from None


def _edge_records(g: Multigraph) -> str:
    return json.dumps([[u, v, k] for (u, v), k in g.pairs()])


# -- chemistry helpers ------------------------------------------------------------

def parse_formula(formula: str, table: ValenceTable | None = None) -> tuple[list[str], list[int]]:
    """Expand a molecular formula such as ``C2H6O`` into per-atom labels and
    valences, in order of appearance."""
    table = table or ValenceTable()
    if not re.fullmatch(r"(?:[A-Z][a-z]?\d*)+", formula or ""):
        raise ParseError(f"malformed formula {formula!r}")
    labels, degrees = [], []
    for sym, count in re.findall(r"([A-Z][a-z]?)(\d*)", formula):
        k = int(count) if count else 1
        if k == 0:
            raise ParseError(f"zero count for {sym} in {formula!r}")
        labels.extend([sym] * k)
        degrees.extend([table[sym]] * k)
    return labels, degrees


def _resolve(token, labels, n, line):
    if isinstance(token, int) and not isinstance(token, bool):
        if not 0 <= token < n:
            raise UnknownVertex(f"vertex {token} outside 0..{n - 1}")
        return token
    if isinstance(token, str):
        if token.isdigit():
            return _resolve(int(token), labels, n, line)
        hits = [i for i, lab in enumerate(labels or ()) if lab == token]
        if len(hits) == 1:
            return hits[0]
        if not hits:
            raise UnknownVertex(f"unknown vertex label {token!r}")
        raise ParseError(f"label {token!r} names several vertices; use an index", line)
    raise ParseError(f"bad vertex reference {token!r}", line)


def parse_tree_term(term: str, labels=None, n: int | None = None, line=None) -> list[list[int]]:
    """Fragments from a parenthesized term such as ``((0 1) 2 (3 4))``.

    Each parenthesized group is one fragment (its vertices are all tokens
    nested inside it); tokens are vertex indices or unique labels.
    """
    n = len(labels) if n is None else n
    tokens = re.findall(r"\(|\)|[^\s()]+", term)
    stack: list[list[int]] = []
    out: list[list[int]] = []
    for tok in tokens:
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if not stack:
                raise ParseError("unbalanced ')' in tree term", line)
            group = stack.pop()
            if not group:
                raise ParseError("empty group in tree term", line)
            out.append(group)
            if stack:
                stack[-1].extend(group)
        else:
            v = _resolve(tok, labels, n, line)
            if not stack:
                raise ParseError(f"vertex {tok!r} outside any group", line)
            stack[-1].append(v)
    if stack:
        raise ParseError("unbalanced '(' in tree term", line)
    return out


def format_tree_term(collection: NestedCollection) -> str:
    """Inverse of :func:`parse_tree_term` over vertex indices."""
    sets = sorted(collection.sets, key=lambda s: (len(s), sorted(s)))

    def render(node):
        kids = [s for s in sets if s < node and not any(s < t < node for t in sets)]
        covered = set().union(*kids) if kids else set()
        parts = [(min(k), render(k) if len(k) > 1 else str(min(k))) for k in kids]
        parts += [(v, str(v)) for v in node - covered]
        return "(" + " ".join(p for _, p in sorted(parts)) + ")"

    top = frozenset(range(collection.n))
    return render(top) if collection.n else "()"


# -- instances -------------------------------------------------------------------

def parse_instance(source, table: ValenceTable | None = None) -> Instance:
    """Parse an instance document (text, or a ``pathlib.Path``)."""
    values: dict = {}
    where: dict = {}
    for line, key, val in _records(_read(source)):
        if key not in _INSTANCE_KEYS:
            raise ParseError(f"unknown key {key!r}", line, 1)
        if key in values:
            raise ParseError(f"duplicate key {key!r}", line, 1)
        values[key] = val
        where[key] = line
    table = table or ValenceTable()
    if "valences" in values:
        if not isinstance(values["valences"], dict):
            raise ParseError("valences must be an object", where["valences"])
        table = table.with_overrides(values["valences"])
    labels = values.get("labels")
    if "formula" in values:
        if "degrees" in values:
            raise ParseError("give either degrees or formula", where["formula"])
        flabels, degrees = parse_formula(values["formula"], table)
        labels = flabels if labels is None else labels
    elif "degrees" in values:
        degrees = values["degrees"]
        if not isinstance(degrees, list):
            raise ParseError("degrees must be a list", where["degrees"])
        degrees = [_int(d, "degree", where["degrees"]) for d in degrees]
    else:
        raise ParseError("instance needs degrees or formula")
    n = values.get("n", len(degrees))
    n = _int(n, "n", where.get("n"))
    if n != len(degrees):
        raise ParseError(f"n = {n} but {len(degrees)} degrees given", where.get("n"))
    if labels is not None:
        if not (isinstance(labels, list) and len(labels) == n and all(isinstance(x, str) for x in labels)):
            raise ParseError("labels must be a list of n strings", where.get("labels"))
        labels = tuple(labels)
    sets: list[list[int]] = []
    if "fragments" in values:
        frags = values["fragments"]
        line = where["fragments"]
        if not isinstance(frags, list) or not all(isinstance(f, list) for f in frags):
            raise ParseError("fragments must be a list of vertex lists", line)
        sets += [[_resolve(v, labels, n, line) for v in f] for f in frags]
    if "tree" in values:
        if not isinstance(values["tree"], str):
            raise ParseError("tree must be a string", where["tree"])
        sets += parse_tree_term(values["tree"], labels, n, where["tree"])
    collection = validate_and_normalize(sets, n)
    graphs = {k: _edge_list(values[k], n, where[k]) for k in ("graph_g", "graph_h") if k in values}
    return Instance(n, tuple(degrees), collection, labels, graphs.get("graph_g"), graphs.get("graph_h"))


def serialize_instance(inst: Instance) -> str:
    lines = [f"n: {inst.n}", f"degrees: {json.dumps(list(inst.degrees))}"]
    if inst.labels is not None:
        lines.append(f"labels: {json.dumps(list(inst.labels))}")
    frags = sorted((sorted(s) for s in inst.collection.nontrivial()), key=lambda s: (-len(s), s))
    lines.append(f"fragments: {json.dumps(frags)}")
    if inst.graph_g is not None:
        lines.append(f"graph_g: {_edge_records(inst.graph_g)}")
    if inst.graph_h is not None:
        lines.append(f"graph_h: {_edge_records(inst.graph_h)}")
    return "\n".join(lines) + "\n"


# -- graph documents ---------------------------------------------------------------

def serialize_graph(g: Multigraph) -> str:
    return f"n: {g.n}\nedges: {_edge_records(g)}\n"


def parse_graph(source) -> Multigraph:
    values = {}
    for line, key, val in _records(_read(source)):
        if key not in ("n", "edges") or key in values:
            raise ParseError(f"unexpected key {key!r}", line, 1)
        values[key] = (line, val)
    if "n" not in values or "edges" not in values:
        raise ParseError("graph document needs n and edges")
    n = _int(values["n"][1], "n", values["n"][0])
    return _edge_list(values["edges"][1], n, values["edges"][0])


def graph_json(g: Multigraph) -> dict:
    return {"n": g.n, "edges": [[u, v, k] for (u, v), k in g.pairs()]}


# -- flip documents ----------------------------------------------------------------

def serialize_flips(doc: FlipDocument) -> str:
    lines = [f"delta: {doc.delta}", f"height: {doc.height}", f"bound: {doc.bound}",
             f"length: {doc.length}", f"verified: {json.dumps(doc.verified)}"]
    lines += [f"{k}: {json.dumps(v)}" for k, v in doc.extra.items()]
    lines += [f"flip: {json.dumps(f.as_list())}" for f in doc.flips]
    return "\n".join(lines) + "\n"


def parse_flips(source) -> FlipDocument:
    header: dict = {}
    flips = FlipSequence()
    for line, key, val in _records(_read(source)):
        if key == "flip":
            if not (isinstance(val, list) and len(val) == 4
                    and all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in val)):
                raise ParseError("flip must be [a, b, c, d]", line)
            flips.append(Flip(*val))
        elif key in header:
            raise ParseError(f"duplicate key {key!r}", line, 1)
        else:
            header[key] = (line, val)
    missing = [k for k in _FLIP_HEADER if k not in header]
    if missing:
        raise ParseError(f"flip document lacks {', '.join(missing)}")
    line, length = header.pop("length")
    if length != len(flips):
        raise ParseError(f"length {length} but {len(flips)} flips listed", line)
    verified = header.pop("verified")[1]
    if not isinstance(verified, bool):
        raise ParseError("verified must be true or false")
    nums = {k: _int(header.pop(k)[1], k, None) for k in ("delta", "height", "bound")}
    extra = {k: v for k, (_, v) in header.items()}
    return FlipDocument(flips, nums["delta"], nums["height"], nums["bound"], verified, extra)
