"""Immutable undirected simple-graph representation and file ingestion.

Nodes are dense integers 0..n-1; loaders remap arbitrary labels in
first-appearance order. Adjacency is stored CSR-style with sorted neighbor
lists, so membership tests are O(log deg) and common-neighbor counts are
linear merges.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import IO, Iterable, NamedTuple

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components


class ParseError(ValueError):
    """Input file cannot be parsed."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NoEdgesError(ValueError):
    """Operation requires a graph with at least one edge."""


class Graph:
    """Undirected simple graph, immutable after construction.

    No self-loops, no duplicate edges. Neighbor lists are sorted ascending.
    """

    __slots__ = ("n", "m", "indptr", "indices", "edge_array")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] | np.ndarray):
        edges = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                           dtype=np.int64).reshape(-1, 2)
        if edges.size and (edges.min() < 0 or edges.max() >= n):
            raise ValueError("edge endpoint out of range")
        if edges.size and (edges[:, 0] == edges[:, 1]).any():
            raise ValueError("self-loop not allowed")
        # canonicalize u < v, sorted, and reject duplicates
        lo = np.minimum(edges[:, 0], edges[:, 1])
        hi = np.maximum(edges[:, 0], edges[:, 1])
        order = np.lexsort((hi, lo))
        lo, hi = lo[order], hi[order]
        if lo.size > 1 and ((lo[1:] == lo[:-1]) & (hi[1:] == hi[:-1])).any():
            raise ValueError("duplicate edge not allowed")
        self.n = int(n)
        self.m = int(lo.size)
        self.edge_array = np.column_stack([lo, hi]) if lo.size else np.empty((0, 2), np.int64)
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        counts = np.bincount(src, minlength=n)
        self.indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        self.indices = dst[order]

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def degree(self, x: int) -> int:
        return int(self.indptr[x + 1] - self.indptr[x])

    def neighbors(self, x: int) -> np.ndarray:
        """Sorted neighbor ids of x (read-only view)."""
        return self.indices[self.indptr[x]:self.indptr[x + 1]]

    def has_edge(self, x: int, y: int) -> bool:
        nbrs = self.neighbors(x)
        i = np.searchsorted(nbrs, y)
        return bool(i < nbrs.size and nbrs[i] == y)

    def adjacency_csr(self) -> sparse.csr_matrix:
        """0/1 symmetric adjacency matrix (int64)."""
        data = np.ones(self.indices.size, dtype=np.int64)
        return sparse.csr_matrix((data, self.indices.copy(), self.indptr.copy()),
                                 shape=(self.n, self.n))

    def component_count(self) -> int:
        if self.n == 0:
            return 0
        ncomp, _ = connected_components(self.adjacency_csr(), directed=False)
        return int(ncomp)


@dataclass
class LabelMap:
    """Bijective mapping between original node labels and dense ids."""

    labels: list[str] = field(default_factory=list)
    _index: dict[str, int] = field(default_factory=dict)

    def intern(self, label: str) -> int:
        i = self._index.get(label)
        if i is None:
            i = len(self.labels)
            self._index[label] = i
            self.labels.append(label)
        return i

    def id_of(self, label: str) -> int:
        return self._index[label]

    def label_of(self, node: int) -> str:
        return self.labels[node]

    def __len__(self) -> int:
        return len(self.labels)


class LoadResult(NamedTuple):
    graph: Graph
    labels: LabelMap
    dropped: int  # duplicate edges and self-loops removed from the input


def _build(labels: LabelMap, pairs: list[tuple[int, int]]) -> LoadResult:
    """Dedup raw id pairs, count dropped records, construct the graph."""
    n = len(labels)
    dropped = 0
    if pairs:
        arr = np.asarray(pairs, dtype=np.int64)
        self_loops = arr[:, 0] == arr[:, 1]
        dropped += int(self_loops.sum())
        arr = arr[~self_loops]
        lo = np.minimum(arr[:, 0], arr[:, 1])
        hi = np.maximum(arr[:, 0], arr[:, 1])
        uniq = np.unique(np.column_stack([lo, hi]), axis=0) if arr.size else arr
        dropped += int(arr.shape[0] - uniq.shape[0])
        edges = uniq
    else:
        edges = np.empty((0, 2), np.int64)
    return LoadResult(Graph(n, edges), labels, dropped)


def load_edge_list(stream: IO[str]) -> LoadResult:
    """Parse whitespace-separated edge-list text; '#' lines are comments.

    Duplicate edges and self-loops are dropped and counted. Empty input
    yields the empty graph.
    """
    labels = LabelMap()
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"expected 2 tokens, got {len(tokens)}", line=lineno)
        pairs.append((labels.intern(tokens[0]), labels.intern(tokens[1])))
    return _build(labels, pairs)


def write_edge_list(graph: Graph, labels: LabelMap, stream: IO[str]) -> None:
    """Serialize in the edge-list format load_edge_list accepts."""
    for u, v in graph.edge_array:
        stream.write(f"{labels.label_of(u)} {labels.label_of(v)}\n")


_GML_TOKEN = re.compile(r'"([^"]*)"|(\[)|(\])|([^\s\[\]"]+)')


def _gml_tokens(text: str) -> list[object]:
    tokens: list[object] = []
    for match in _GML_TOKEN.finditer(text):
        string, open_b, close_b, atom = match.groups()
        if string is not None:
            tokens.append(("str", string))
        elif open_b:
            tokens.append("[")
        elif close_b:
            tokens.append("]")
        else:
            tokens.append(("atom", atom))
    return tokens


def _gml_parse_list(tokens: list[object], pos: int) -> tuple[list[tuple[str, object]], int]:
    """Parse a flat key/value sequence until ']' or end of input."""
    items: list[tuple[str, object]] = []
    while pos < len(tokens):
        tok = tokens[pos]
        if tok == "]":
            return items, pos
        if tok == "[" or not isinstance(tok, tuple) or tok[0] != "atom":
            raise ParseError(f"expected key, got {tok!r}")
        key = tok[1]
        pos += 1
        if pos >= len(tokens):
            raise ParseError(f"key {key!r} has no value")
        val_tok = tokens[pos]
        if val_tok == "[":
            sub, pos = _gml_parse_list(tokens, pos + 1)
            if pos >= len(tokens) or tokens[pos] != "]":
                raise ParseError("unbalanced brackets")
            items.append((key, sub))
            pos += 1
        elif val_tok == "]":
            raise ParseError(f"key {key!r} has no value")
        else:
            items.append((key, val_tok[1]))
            pos += 1
    return items, pos


def load_gml(stream: IO[str]) -> LoadResult:
    """Parse the GML subset: graph [ node [ id N label "S" ] edge [ source N target N ] ].

    Directedness flags are ignored; same dedup rules as load_edge_list.
    """
    tokens = _gml_tokens(stream.read())
    top, pos = _gml_parse_list(tokens, 0)
    if pos != len(tokens):
        raise ParseError("unbalanced brackets")
    graph_block = next((v for k, v in top if k == "graph" and isinstance(v, list)), None)
    if graph_block is None:
        raise ParseError("no graph [ ... ] block found")

    labels = LabelMap()
    id_to_dense: dict[int, int] = {}
    pairs: list[tuple[int, int]] = []
    for key, value in graph_block:
        if key == "node" and isinstance(value, list):
            fields = dict((k, v) for k, v in value)
            if "id" not in fields:
                raise ParseError("node without id")
            try:
                gml_id = int(fields["id"])
            except (TypeError, ValueError):
                raise ParseError(f"node id not an integer: {fields['id']!r}")
            if gml_id in id_to_dense:
                raise ParseError(f"duplicate node id {gml_id}")
            label = str(fields.get("label", gml_id))
            if label in labels._index:
                raise ParseError(f"duplicate node label {label!r}")
            id_to_dense[gml_id] = labels.intern(label)
        elif key == "edge" and isinstance(value, list):
            fields = dict((k, v) for k, v in value)
            try:
                src = int(fields["source"])
                dst = int(fields["target"])
            except (KeyError, TypeError, ValueError):
                raise ParseError("edge without integer source/target")
            if src not in id_to_dense or dst not in id_to_dense:
                raise ParseError(f"edge ({src},{dst}) references unknown node id")
            pairs.append((id_to_dense[src], id_to_dense[dst]))
    return _build(labels, pairs)


@dataclass
class ValidationReport:
    n: int
    m: int
    components: int
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(graph: Graph) -> ValidationReport:
    """Re-check all graph invariants from the raw arrays; never raises."""
    violations: list[str] = []
    if int(graph.degrees.sum()) != 2 * graph.m:
        violations.append("degree sum != 2m")
    for x in range(graph.n):
        nbrs = graph.neighbors(x)
        if nbrs.size and (np.diff(nbrs) <= 0).any():
            violations.append(f"adjacency of node {x} not strictly sorted")
        if (nbrs == x).any():
            violations.append(f"self-loop at node {x}")
    adj = graph.adjacency_csr()
    if (adj != adj.T).nnz != 0:
        violations.append("adjacency not symmetric")
    return ValidationReport(graph.n, graph.m, graph.component_count(), violations)
