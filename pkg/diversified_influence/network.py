"""
Immutable containers for a network, its community structure, node
embeddings and node attributes.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import networkx as nx
import numpy as np

from ._constants import LT_WEIGHT_TOLERANCE
from .errors import DataError


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class IdMap:
    """
    Translation between the node labels found in input files and the
    dense integer ids ``0..n-1`` used internally.
    """
    labels: tuple
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {}
        for i, label in enumerate(self.labels):
            if label in index:
                raise DataError(f"duplicate node label {label!r}")
            index[label] = i
        object.__setattr__(self, '_index', index)

    @classmethod
    def identity(cls, node_count: int):
        """Labels ``'0'``, ``'1'``, ... matching the dense ids."""
        return cls(tuple(str(i) for i in range(node_count)))

    def __len__(self):
        return len(self.labels)

    def __contains__(self, label):
        return label in self._index

    def id_of(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise DataError(f"unknown node {label!r}") from None

    def label_of(self, node: int) -> str:
        return self.labels[node]

    def write(self, fp) -> None:
        """
        Write the sidecar id-map file: one ``dense_id<TAB>label`` line
        per node.
        """
        with open(fp, 'w', newline='\n') as file:
            for i, label in enumerate(self.labels):
                file.write(f"{i}\t{label}\n")


class Network:
    """
    A directed network whose edges carry an IC activation probability
    ``p`` and an LT weight ``b``. Undirected inputs are stored as two
    directed edges with identical parameters.

    Edges are held sorted by ``(source, target)``, with CSR offsets for
    out-edges and a second ordering by ``(target, source)`` for in-edges.
    Instances are read-only after construction.
    """

    def __init__(
            self,
            node_count: int,
            src: np.ndarray,
            dst: np.ndarray,
            p: np.ndarray,
            b: np.ndarray,
            directed: bool = True,
            id_map: IdMap = None,
    ):
        self.node_count = int(node_count)
        order = np.lexsort((dst, src))
        self.src = _frozen(np.asarray(src, dtype=np.int64)[order])
        self.dst = _frozen(np.asarray(dst, dtype=np.int64)[order])
        self.p = _frozen(np.asarray(p, dtype=np.float64)[order])
        self.b = _frozen(np.asarray(b, dtype=np.float64)[order])
        self.directed = directed
        if id_map is None:
            id_map = IdMap.identity(self.node_count)
        self.id_map = id_map

        out_counts = np.bincount(self.src, minlength=self.node_count)
        self.out_offsets = _frozen(np.concatenate(([0], np.cumsum(out_counts))))
        self.in_order = _frozen(np.lexsort((self.src, self.dst)))
        in_counts = np.bincount(self.dst, minlength=self.node_count)
        self.in_offsets = _frozen(np.concatenate(([0], np.cumsum(in_counts))))
        self._nx_graph = None

    @classmethod
    def from_edges(
            cls,
            node_count: int,
            edges,
            directed: bool = True,
            id_map: IdMap = None,
            path=None,
            lines: list = None,
    ):
        """
        Build a validated ``Network``.

        :param node_count: Number of nodes (ids are ``0..node_count-1``).
        :param edges: An iterable of ``(source, target)``,
         ``(source, target, p)`` or ``(source, target, p, b)`` tuples.
         ``p`` and/or ``b`` may be ``None``, in which case the default
         ``1/deg_in(target)`` is applied (in-degree counted after
         undirected edges have been doubled).
        :param directed: Whether the edges are directed. If not, each edge
         is stored in both directions.
        :param id_map: (Optional) Labels for the nodes, used in messages
         and output.
        :param path: (Optional) Source file, used in error messages.
        :param lines: (Optional) Source line number of each edge, used in
         error messages.
        :return: A new ``Network``.
        """
        if node_count < 1:
            raise DataError("node count must be at least 1", path)
        if id_map is not None and len(id_map) != node_count:
            raise DataError(
                f"id map has {len(id_map)} labels for {node_count} nodes", path)

        def label(node):
            return node if id_map is None else id_map.label_of(node)

        records = []
        seen = {}
        for i, edge in enumerate(edges):
            line = None if lines is None else lines[i]
            if not 2 <= len(edge) <= 4:
                raise DataError("an edge needs a source, a target and at most p and b", path, line)
            u, v = int(edge[0]), int(edge[1])
            p = edge[2] if len(edge) > 2 else None
            b = edge[3] if len(edge) > 3 else None
            for node in (u, v):
                if not 0 <= node < node_count:
                    raise DataError(
                        f"node id {node} out of range for {node_count} nodes", path, line)
            if u == v:
                raise DataError(f"self-loop on node {label(u)!r} rejected", path, line)
            _check_unit_interval(p, 'p', path, line)
            _check_unit_interval(b, 'b', path, line)
            pairs = [(u, v)] if directed else [(u, v), (v, u)]
            for pair in pairs:
                if pair in seen:
                    raise DataError(
                        f"duplicate edge {label(pair[0])!r} -> {label(pair[1])!r} "
                        f"(first seen at line {seen[pair]})", path, line)
                seen[pair] = line
                records.append((pair[0], pair[1], p, b))

        src = np.array([r[0] for r in records], dtype=np.int64)
        dst = np.array([r[1] for r in records], dtype=np.int64)
        p = np.array([np.nan if r[2] is None else r[2] for r in records], dtype=np.float64)
        b = np.array([np.nan if r[3] is None else r[3] for r in records], dtype=np.float64)

        in_degree = np.bincount(dst, minlength=node_count)
        if len(records):
            default = 1.0 / in_degree[dst]
            p = np.where(np.isnan(p), default, p)
            b = np.where(np.isnan(b), default, b)

        weight_in = np.bincount(dst, weights=b, minlength=node_count)
        violating = np.flatnonzero(weight_in > 1.0 + LT_WEIGHT_TOLERANCE)
        if len(violating):
            node = int(violating[0])
            raise DataError(
                f"LT weights into node {label(node)!r} sum to "
                f"{weight_in[node]!r}, more than 1", path)

        return cls(node_count, src, dst, p, b, directed=directed, id_map=id_map)

    @classmethod
    def from_networkx(cls, graph, p_attr: str = 'p', b_attr: str = 'b'):
        """
        Build a ``Network`` from a ``networkx`` graph. Nodes are
        interned in iteration order and labelled with ``str(node)``.
        Missing edge attributes take the ``1/deg_in`` default.
        """
        nodes = list(graph.nodes)
        index = {node: i for i, node in enumerate(nodes)}
        edges = [
            (index[u], index[v], data.get(p_attr), data.get(b_attr))
            for u, v, data in graph.edges(data=True)
        ]
        id_map = IdMap(tuple(str(node) for node in nodes))
        return cls.from_edges(
            len(nodes), edges, directed=graph.is_directed(), id_map=id_map)

    @property
    def edge_count(self) -> int:
        return len(self.src)

    @property
    def edges(self) -> list:
        """All directed edges as ``(source, target, p, b)`` tuples."""
        return list(zip(
            self.src.tolist(), self.dst.tolist(), self.p.tolist(), self.b.tolist()))

    def in_degree(self) -> np.ndarray:
        return np.diff(self.in_offsets)

    def out_edges(self, node: int) -> slice:
        """The slice of the edge arrays holding ``node``'s out-edges."""
        return slice(int(self.out_offsets[node]), int(self.out_offsets[node + 1]))

    def in_edges(self, node: int) -> np.ndarray:
        """Edge indices of ``node``'s in-edges, ordered by source."""
        return self.in_order[self.in_offsets[node]:self.in_offsets[node + 1]]

    def check_nodes(self, nodes) -> frozenset:
        """
        Validate a collection of node ids.
        :return: The nodes as a ``frozenset`` of ``int``.
        """
        checked = frozenset(int(u) for u in nodes)
        for u in checked:
            if not 0 <= u < self.node_count:
                raise DataError(f"unknown node id {u}")
        return checked

    def to_networkx(self) -> nx.DiGraph:
        """
        A frozen ``networkx.DiGraph`` view with ``p`` and ``b`` edge
        attributes and a ``label`` node attribute.
        """
        if self._nx_graph is None:
            graph = nx.DiGraph()
            graph.add_nodes_from(
                (i, {'label': label}) for i, label in enumerate(self.id_map.labels))
            graph.add_edges_from(
                (u, v, {'p': p, 'b': b}) for u, v, p, b in self.edges)
            self._nx_graph = nx.freeze(graph)
        return self._nx_graph

    def reachable(self, seeds) -> frozenset:
        """Every node reachable from ``seeds`` (the seeds included)."""
        seeds = self.check_nodes(seeds)
        graph = self.to_networkx()
        reached = set(seeds)
        for s in seeds:
            reached |= nx.descendants(graph, s)
        return frozenset(reached)


def _check_unit_interval(value, name, path, line):
    if value is None:
        return
    value = float(value)
    if not math.isfinite(value) or not 0.0 <= value <= 1.0:
        raise DataError(f"{name} = {value!r} is outside [0, 1]", path, line)


class CommunityMode(Enum):
    DISJOINT = 'disjoint'
    OVERLAPPING = 'overlapping'


class CommunityStructure:
    """
    Per-node membership vectors ``F_u`` over ``C`` communities. In
    disjoint mode every ``F_u`` is all-zero (the node belongs to no
    target community) or one-hot.
    """

    def __init__(self, memberships, mode: CommunityMode = CommunityMode.DISJOINT):
        memberships = np.array(memberships, dtype=np.float64)
        if memberships.ndim != 2 or memberships.shape[1] < 1:
            raise DataError("memberships must be a (nodes x C) matrix with C >= 1")
        if not np.all(np.isfinite(memberships)):
            raise DataError("membership weights must be finite")
        if np.any(memberships < 0):
            raise DataError("membership weights must be non-negative")
        mode = CommunityMode(mode)
        if mode is CommunityMode.DISJOINT:
            row_ones = np.sum(memberships == 1.0, axis=1)
            row_nonzero = np.count_nonzero(memberships, axis=1)
            if np.any(row_nonzero != row_ones) or np.any(row_ones > 1):
                raise DataError("disjoint memberships must be all-zero or one-hot")
        self.memberships = _frozen(memberships)
        self.mode = mode
        self.indicator = _frozen(memberships > 0)
        self.covered = _frozen(np.any(self.indicator, axis=1))

    @classmethod
    def from_assignments(cls, node_count: int, assignments: dict, C: int):
        """
        Disjoint structure from a ``{node: community_index}`` mapping.
        Nodes missing from ``assignments`` belong to no community.
        """
        memberships = np.zeros((node_count, C))
        for node, c in assignments.items():
            if not 0 <= c < C:
                raise DataError(f"community index {c} out of range for C = {C}")
            memberships[node, c] = 1.0
        return cls(memberships, CommunityMode.DISJOINT)

    @classmethod
    def single(cls, node_count: int):
        """Every node in one community (``C = 1``)."""
        return cls(np.ones((node_count, 1)), CommunityMode.DISJOINT)

    @property
    def C(self) -> int:
        return self.memberships.shape[1]

    @property
    def node_count(self) -> int:
        return self.memberships.shape[0]

    def members(self, c: int) -> frozenset:
        """
        The node set ``V_c``: nodes with ``F_uc = 1`` (disjoint) or
        ``F_uc > 0`` (overlapping).
        """
        if not 0 <= c < self.C:
            raise ValueError(f"community index {c} out of range for C = {self.C}")
        return frozenset(np.flatnonzero(self.indicator[:, c]).tolist())

    def sizes(self) -> np.ndarray:
        """``|V_c|`` for every community."""
        return np.sum(self.indicator, axis=0)


def members(cs: CommunityStructure, c: int) -> frozenset:
    return cs.members(c)


class EmbeddingTable:
    """A real vector ``e_u`` of shared dimension for every node."""

    def __init__(self, vectors):
        vectors = np.array(vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[1] < 1:
            raise DataError("embeddings must be a (nodes x d) matrix with d >= 1")
        if not np.all(np.isfinite(vectors)):
            raise DataError("embedding entries must be finite")
        self.vectors = _frozen(vectors)

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    @property
    def node_count(self) -> int:
        return self.vectors.shape[0]


class AttributeTable:
    """
    Per-node map from attribute name (e.g. ``'country'``) to a set of
    string values.
    """

    def __init__(self, node_count: int, values: dict = None):
        """
        :param node_count: Number of nodes in the network.
        :param values: ``{node: {attribute: iterable of values}}``.
        """
        table = {}
        names = set()
        for node, attrs in (values or {}).items():
            if not 0 <= node < node_count:
                raise DataError(f"node id {node} out of range for {node_count} nodes")
            row = {}
            for name, vals in attrs.items():
                if not name:
                    raise DataError("attribute names must be non-empty")
                row[name] = frozenset(vals)
                names.add(name)
            table[node] = row
        self.node_count = node_count
        self._table = table
        self.attribute_names = frozenset(names)

    def values(self, node: int, attribute: str) -> frozenset:
        return self._table.get(node, {}).get(attribute, frozenset())


__all__ = [
    'IdMap',
    'Network',
    'CommunityMode',
    'CommunityStructure',
    'members',
    'EmbeddingTable',
    'AttributeTable',
]
