"""The SFP v1 text format (1-indexed, ``#`` comments) and certificate files.

::

    SFP 1
    SECTION Graph
    Nodes <n>
    Edges <m>
    E <u> <v>
    END
    SECTION Pairs
    P <s> <t>
    END
    EOF
"""

from __future__ import annotations

import warnings

from ..core import ForestCertificate, Graph, Instance, SteinerError, norm_edge


class SFPError(SteinerError, ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield no, body.split()


def _int(tok: str, no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise SFPError(f"expected an integer, got {tok!r}", no) from None


def parse_instance(text: str) -> Instance:
    it = _lines(text)
    head = next(it, None)
    if head is None or head[1] != ["SFP", "1"]:
        raise SFPError("missing 'SFP 1' header", head[0] if head else 1)
    n = None
    edges: list[tuple[int, int]] = []
    seen: set = set()
    pairs: list[tuple[int, int]] = []
    sections: set[str] = set()
    section = None
    declared_m = None
    last = head[0]
    done = False

    def vertex(tok, no):
        x = _int(tok, no)
        if n is None:
            raise SFPError("vertex id before 'Nodes'", no)
        if not 1 <= x <= n:
            raise SFPError(f"vertex id {x} out of range 1..{n}", no)
        return x - 1

    for no, tok in it:
        last = no
        if done:
            raise SFPError("content after EOF", no)
        word = tok[0]
        if section is None:
            if word == "SECTION" and len(tok) == 2 and tok[1] in ("Graph", "Pairs"):
                if tok[1] in sections:
                    raise SFPError(f"duplicate section {tok[1]}", no)
                if tok[1] == "Pairs" and "Graph" not in sections:
                    raise SFPError("section Pairs before section Graph", no)
                section = tok[1]
                sections.add(section)
            elif word == "EOF" and len(tok) == 1:
                done = True
            else:
                raise SFPError(f"unexpected {' '.join(tok)!r} outside a section", no)
            continue
        if word == "END" and len(tok) == 1:
            if section == "Graph":
                if n is None:
                    raise SFPError("section Graph lacks 'Nodes'", no)
                if declared_m is not None and declared_m != len(edges):
                    raise SFPError(f"'Edges {declared_m}' but {len(edges)} edge lines", no)
            section = None
            continue
        if section == "Graph":
            if word == "Nodes" and len(tok) == 2:
                if n is not None:
                    raise SFPError("duplicate 'Nodes'", no)
                n = _int(tok[1], no)
                if n < 1:
                    raise SFPError("need at least one node", no)
            elif word == "Edges" and len(tok) == 2:
                declared_m = _int(tok[1], no)
            elif word == "E" and len(tok) in (3, 4):
                if len(tok) == 4:
                    warnings.warn(f"line {no}: edge weight ignored", stacklevel=2)
                u, v = vertex(tok[1], no), vertex(tok[2], no)
                if u == v:
                    raise SFPError(f"loop at vertex {u + 1}", no)
                e = norm_edge(u, v)
                if e in seen:
                    raise SFPError(f"duplicate edge {u + 1} {v + 1}", no)
                seen.add(e)
                edges.append(e)
            else:
                raise SFPError(f"unexpected {' '.join(tok)!r} in section Graph", no)
        else:
            if word == "P" and len(tok) == 3:
                s, t = vertex(tok[1], no), vertex(tok[2], no)
                if s == t:
                    warnings.warn(f"line {no}: pair with equal endpoints dropped", stacklevel=2)
                    continue
                pairs.append((s, t))
            else:
                raise SFPError(f"unexpected {' '.join(tok)!r} in section Pairs", no)
    if section is not None:
        raise SFPError(f"section {section} not closed", last)
    for name in ("Graph", "Pairs"):
        if name not in sections:
            raise SFPError(f"missing section {name}", last)
    if not done:
        raise SFPError("missing EOF", last)
    return Instance.make(Graph.from_edges(n, edges), pairs)


def write_instance(inst: Instance) -> str:
    g = inst.graph
    out = ["SFP 1", "SECTION Graph", f"Nodes {g.n}", f"Edges {g.m}"]
    out += [f"E {u + 1} {v + 1}" for u, v in g.edges]
    out += ["END", "SECTION Pairs"]
    out += [f"P {s + 1} {t + 1}" for s, t in inst.pairs]
    out += ["END", "EOF", ""]
    return "\n".join(out)


def normalize(inst: Instance) -> Instance:
    """Canonical form: sorted normalised edges and pairs (what a round trip yields)."""
    return Instance.make(Graph.from_edges(inst.graph.n, sorted(inst.graph.edges)), inst.pairs)


def write_certificate(cert: ForestCertificate) -> str:
    return "".join(f"E {u + 1} {v + 1}\n" for u, v in cert.edges)


def parse_certificate(text: str) -> ForestCertificate:
    edges = []
    for no, tok in _lines(text):
        if tok[0] != "E" or len(tok) != 3:
            raise SFPError(f"expected 'E u v', got {' '.join(tok)!r}", no)
        u, v = _int(tok[1], no), _int(tok[2], no)
        if u < 1 or v < 1:
            raise SFPError("vertex ids are 1-indexed", no)
        edges.append((u - 1, v - 1))
    return ForestCertificate.of(edges)
