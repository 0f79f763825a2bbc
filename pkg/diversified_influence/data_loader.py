"""
Loaders for network edge lists, community memberships, node embeddings,
node attributes and seed files; and a ``DataLoader`` that bundles them
from a config.

File formats (``#`` starts a comment anywhere on a line):

* Edge list: optional header line ``#nodes N``; then one edge per line,
  ``src dst [p] [b]``, whitespace-separated.
* Communities: disjoint ``node community_index`` or overlapping
  ``node: w1 w2 ... wC``.
* Embeddings: ``node v1 v2 ... vd``.
* Attributes: ``node attr=value[,value...] [attr=value...]``.
* Seeds: one node per line, or the ``.json`` written by ``select``.

Node labels may be arbitrary strings. If every label in an edge list is a
non-negative integer, the labels are the dense ids themselves. Otherwise
labels are interned in order of first appearance.
"""

import json
import re
from dataclasses import dataclass
from io import StringIO
from pathlib import Path

import numpy as np
import pandas as pd

from .errors import DataError
from .network import (
    AttributeTable,
    CommunityMode,
    CommunityStructure,
    EmbeddingTable,
    IdMap,
    Network,
)

EDGE_COLUMNS = ['src', 'dst', 'p', 'b']
NODES_HEADER = re.compile(r'^#\s*nodes\s+(\S+)\s*$')
INTEGER_LABEL = re.compile(r'^\d+$')


def _content_lines(fp):
    """
    INTERNAL USE:
    Read a text file and strip comments and blank lines.

    :return: A list of ``(line_number, content)`` pairs (1-indexed), and
     the node count declared by a ``#nodes N`` header (or ``None``).
    """
    try:
        with open(fp, 'r') as file:
            raw_lines = file.read().splitlines()
    except FileNotFoundError:
        raise DataError("file not found", fp) from None
    node_count = None
    lines = []
    for number, raw in enumerate(raw_lines, start=1):
        header = NODES_HEADER.match(raw.strip())
        if header is not None:
            if node_count is not None:
                raise DataError("duplicate #nodes header", fp, number)
            try:
                node_count = int(header.group(1))
            except ValueError:
                raise DataError(
                    f"#nodes expects an integer, got {header.group(1)!r}", fp, number) from None
            if node_count < 1:
                raise DataError("#nodes must be at least 1", fp, number)
            continue
        content = raw.split('#', 1)[0].strip()
        if content:
            lines.append((number, content))
    return lines, node_count


def _numeric_column(df: pd.DataFrame, col, line_numbers: list, fp) -> pd.Series:
    """
    INTERNAL USE:
    Convert a text column to floats, raising a ``DataError`` that names
    the first line whose value is not a number.
    """
    converted = pd.to_numeric(df[col], errors='coerce')
    bad = df[col].notna() & converted.isna()
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        raise DataError(
            f"{df[col].iloc[row]!r} is not a number", fp, line_numbers[row])
    return converted


def _check_integer_collisions(labels: pd.Series, fp) -> None:
    """
    INTERNAL USE:
    Reject distinct integer labels naming the same number (``'01'`` and
    ``'1'``).
    """
    distinct = labels.drop_duplicates()
    clashes = distinct[distinct.astype(np.int64).duplicated(keep=False)]
    if not clashes.empty:
        raise DataError(
            f"node labels {sorted(clashes)} name the same integer id", fp)


def load_network(fp, directed: bool = True, id_map_fp=None) -> Network:
    """
    Load a network from an edge-list file.

    Labels are interned to dense ids in order of first appearance. When a
    ``#nodes N`` header is present and every label is an integer, the
    labels are taken as the ids ``0..N-1`` directly.

    :param fp: Path to the edge list.
    :param directed: Whether each line is a directed edge. If ``False``,
     every edge is stored in both directions with identical parameters.
    :param id_map_fp: (Optional) A sidecar id-map (as written by
     ``IdMap.write()``) restoring the labels of an integer-id edge list.
    :return: A validated ``Network`` with its ``IdMap`` attached.
    """
    lines, node_count = _content_lines(fp)
    line_numbers = [number for number, _ in lines]
    for number, content in lines:
        if not 2 <= len(content.split()) <= 4:
            raise DataError("expected 'src dst [p] [b]'", fp, number)

    if lines:
        text = '\n'.join(content for _, content in lines)
        df = pd.read_csv(
            StringIO(text), sep=r'\s+', header=None, names=EDGE_COLUMNS,
            dtype=str, engine='python')
    else:
        df = pd.DataFrame(columns=EDGE_COLUMNS, dtype=str)
    p = _numeric_column(df, 'p', line_numbers, fp)
    b = _numeric_column(df, 'b', line_numbers, fp)

    labels = pd.concat([df['src'], df['dst']])
    integer_labels = bool(labels.map(lambda s: bool(INTEGER_LABEL.match(s))).all())
    if integer_labels:
        _check_integer_collisions(labels, fp)
    if node_count is None and df.empty:
        raise DataError("an empty edge list needs a '#nodes N' header", fp)

    if integer_labels and node_count is not None:
        # '#nodes N' declares the labels to be the dense ids themselves
        src = df['src'].astype(np.int64).tolist()
        dst = df['dst'].astype(np.int64).tolist()
        id_map = IdMap.identity(node_count)
    else:
        interned = {}
        for s, d in zip(df['src'], df['dst']):
            for label in (s, d):
                if label not in interned:
                    interned[label] = len(interned)
        if node_count is None:
            node_count = len(interned)
        elif len(interned) > node_count:
            raise DataError(
                f"{len(interned)} distinct node labels exceed '#nodes {node_count}'", fp)
        padding = [f"<isolated-{i}>" for i in range(len(interned), node_count)]
        id_map = IdMap(tuple(interned) + tuple(padding))
        src = [interned[s] for s in df['src']]
        dst = [interned[d] for d in df['dst']]

    if id_map_fp is not None:
        id_map = load_id_map(id_map_fp)

    edges = [
        (u, v, None if pd.isna(pu) else float(pu), None if pd.isna(bu) else float(bu))
        for u, v, pu, bu in zip(src, dst, p, b)
    ]
    return Network.from_edges(
        node_count, edges, directed=directed, id_map=id_map, path=fp,
        lines=line_numbers)


def write_edge_list(net: Network, fp, id_map_fp=None) -> None:
    """
    Serialize a network as a directed edge list with dense integer ids and
    explicit ``p`` and ``b`` on every edge. Reloading it with
    ``load_network(fp, directed=True, id_map_fp=...)`` reproduces the
    network exactly.

    :param id_map_fp: (Optional) Where to write the sidecar id-map.
    """
    with open(fp, 'w', newline='\n') as file:
        file.write(f"#nodes {net.node_count}\n")
        for u, v, p, b in net.edges:
            file.write(f"{u} {v} {p!r} {b!r}\n")
    if id_map_fp is not None:
        net.id_map.write(id_map_fp)


def load_id_map(fp) -> IdMap:
    """Read a sidecar id-map written by ``IdMap.write()``."""
    lines, _ = _content_lines(fp)
    labels = []
    for number, content in lines:
        parts = content.split('\t') if '\t' in content else content.split(None, 1)
        if len(parts) != 2 or not INTEGER_LABEL.match(parts[0].strip()):
            raise DataError("expected 'dense_id<TAB>label'", fp, number)
        if int(parts[0]) != len(labels):
            raise DataError("id-map ids must be 0, 1, 2, ... in order", fp, number)
        labels.append(parts[1].strip())
    return IdMap(tuple(labels))


def load_communities(fp, C: int = None, id_map: IdMap = None) -> CommunityStructure:
    """
    Load community memberships.

    Each line either assigns a node one community index (disjoint mode)
    or gives its length-``C`` membership vector after a colon (overlapping
    mode). A file must use a single mode. Nodes absent from the file get an
    all-zero membership vector.

    :param fp: Path to the community file.
    :param C: Number of communities. If ``None``, inferred from the file
     (largest index + 1, or the vector length).
    :param id_map: The network's ``IdMap``, used to resolve node labels.
    :return: A ``CommunityStructure``.
    """
    if id_map is None:
        raise ValueError("an IdMap is needed to resolve community node labels")
    lines, _ = _content_lines(fp)
    overlapping = [':' in content for _, content in lines]
    if any(overlapping) and not all(overlapping):
        raise DataError("community file mixes disjoint and overlapping lines", fp)
    mode = CommunityMode.OVERLAPPING if lines and all(overlapping) else CommunityMode.DISJOINT

    rows = {}
    for number, content in lines:
        if mode is CommunityMode.OVERLAPPING:
            label, _, rest = content.partition(':')
            label = label.strip()
            try:
                weights = [float(w) for w in rest.split()]
            except ValueError:
                raise DataError("membership weights must be numbers", fp, number) from None
            if any(w < 0 for w in weights):
                raise DataError("negative membership weight", fp, number)
            value = weights
        else:
            tokens = content.split()
            if len(tokens) != 2 or not INTEGER_LABEL.match(tokens[1]):
                raise DataError("expected 'node community_index'", fp, number)
            label, value = tokens[0], int(tokens[1])
        if label not in id_map:
            raise DataError(f"unknown node {label!r}", fp, number)
        node = id_map.id_of(label)
        if node in rows:
            raise DataError(f"node {label!r} listed twice", fp, number)
        rows[node] = (number, value)

    if C is None:
        if not rows:
            raise DataError("cannot infer C from an empty community file", fp)
        if mode is CommunityMode.OVERLAPPING:
            C = len(next(iter(rows.values()))[1])
        else:
            C = max(value for _, value in rows.values()) + 1
    if C < 1:
        raise DataError("C must be at least 1", fp)

    memberships = np.zeros((len(id_map), C))
    for node, (number, value) in rows.items():
        if mode is CommunityMode.OVERLAPPING:
            if len(value) != C:
                raise DataError(
                    f"membership vector has length {len(value)}, expected C = {C}", fp, number)
            memberships[node] = value
        else:
            if value >= C:
                raise DataError(
                    f"community index {value} out of range for C = {C}", fp, number)
            memberships[node, value] = 1.0
    return CommunityStructure(memberships, mode)


def load_embeddings(fp, id_map: IdMap) -> EmbeddingTable:
    """
    Load one embedding vector per node. Every node of the network must
    have exactly one line, and all vectors must share a dimension.
    """
    lines, _ = _content_lines(fp)
    line_numbers = [number for number, _ in lines]
    widths = {len(content.split()) for _, content in lines}
    if not lines:
        raise DataError("embedding file is empty", fp)
    if len(widths) != 1 or min(widths) < 2:
        raise DataError("embedding lines must all be 'node v1 ... vd' with the same d", fp)
    text = '\n'.join(content for _, content in lines)
    df = pd.read_csv(StringIO(text), sep=r'\s+', header=None, dtype=str, engine='python')
    vectors = np.zeros((len(id_map), df.shape[1] - 1))
    seen = set()
    for col in df.columns[1:]:
        df[col] = _numeric_column(df, col, line_numbers, fp)
    for row, label in enumerate(df[0]):
        if label not in id_map:
            raise DataError(f"unknown node {label!r}", fp, line_numbers[row])
        node = id_map.id_of(label)
        if node in seen:
            raise DataError(f"node {label!r} listed twice", fp, line_numbers[row])
        seen.add(node)
        vectors[node] = df.iloc[row, 1:].to_numpy(dtype=np.float64)
    if len(seen) != len(id_map):
        raise DataError(f"{len(id_map) - len(seen)} nodes have no embedding", fp)
    return EmbeddingTable(vectors)


def load_attributes(fp, id_map: IdMap) -> AttributeTable:
    """
    Load node attributes. A node may appear on several lines and carry
    several ``attr=value[,value...]`` tokens; values accumulate.
    """
    lines, _ = _content_lines(fp)
    values = {}
    for number, content in lines:
        tokens = content.split()
        label = tokens[0]
        if label not in id_map:
            raise DataError(f"unknown node {label!r}", fp, number)
        if len(tokens) < 2:
            raise DataError("expected 'node attr=value[,value...]'", fp, number)
        row = values.setdefault(id_map.id_of(label), {})
        for token in tokens[1:]:
            name, sep, raw = token.partition('=')
            if not sep or not name:
                raise DataError(f"malformed attribute {token!r}", fp, number)
            row.setdefault(name, set()).update(v for v in raw.split(',') if v)
    return AttributeTable(len(id_map), values)


def load_seeds(fp, id_map: IdMap) -> list:
    """
    Load a seed list, either the ``.json`` written by ``select`` (its
    ``"seeds"`` list of labels) or a text file of labels.

    :return: Dense node ids, in file order.
    """
    fp = Path(fp)
    if fp.suffix.lower() == '.json':
        try:
            with open(fp, 'r') as file:
                labels = [str(s) for s in json.load(file)['seeds']]
        except FileNotFoundError:
            raise DataError("file not found", fp) from None
        except (json.JSONDecodeError, KeyError, TypeError):
            raise DataError("expected a JSON object with a 'seeds' list", fp) from None
        numbered = [(None, label) for label in labels]
    else:
        lines, _ = _content_lines(fp)
        numbered = [(number, token) for number, content in lines for token in content.split()]
    seeds = []
    for number, label in numbered:
        if label not in id_map:
            raise DataError(f"unknown node {label!r}", fp, number)
        node = id_map.id_of(label)
        if node in seeds:
            raise DataError(f"seed {label!r} listed twice", fp, number)
        seeds.append(node)
    return seeds


@dataclass(frozen=True)
class Dataset:
    """A network and the optional data attached to its nodes."""
    network: Network
    communities: CommunityStructure = None
    embeddings: EmbeddingTable = None
    attributes: AttributeTable = None

    @property
    def community_structure(self) -> CommunityStructure:
        """The communities, or a single all-covering community if none."""
        if self.communities is None:
            return CommunityStructure.single(self.network.node_count)
        return self.communities


class DataLoader:
    """
    Load a network plus (optionally) its communities, embeddings and
    attributes, all resolved against the network's node labels.
    """
    def __init__(
            self,
            network: str,
            directed: bool = True,
            id_map: str = None,
            communities: str = None,
            num_communities: int = None,
            embeddings: str = None,
            attributes: str = None,
    ):
        """
        :param network: Path to the edge list.
        :param directed: Whether the edge list is directed.
        :param id_map: (Optional) Sidecar id-map for the edge list.
        :param communities: (Optional) Path to the community file.
        :param num_communities: (Optional) ``C``; inferred if omitted.
        :param embeddings: (Optional) Path to the embedding file.
        :param attributes: (Optional) Path to the attribute file.
        """
        self.network = network
        self.directed = directed
        self.id_map = id_map
        self.communities = communities
        self.num_communities = num_communities
        self.embeddings = embeddings
        self.attributes = attributes

    @classmethod
    def from_config(cls, config: dict):
        """
        Get a new ``DataLoader`` from a config dict (see
        ``RunConfig.to_dict()``).
        """
        relevant_fields = [
            'network',
            'directed',
            'id_map',
            'communities',
            'num_communities',
            'embeddings',
            'attributes',
        ]
        kw = {
            param: val for param, val in config.items()
            if param in relevant_fields
        }
        return cls(**kw)

    def load(self) -> Dataset:
        net = load_network(self.network, directed=self.directed, id_map_fp=self.id_map)
        communities = embeddings = attributes = None
        if self.communities is not None:
            communities = load_communities(
                self.communities, C=self.num_communities, id_map=net.id_map)
        if self.embeddings is not None:
            embeddings = load_embeddings(self.embeddings, net.id_map)
        if self.attributes is not None:
            attributes = load_attributes(self.attributes, net.id_map)
        return Dataset(net, communities, embeddings, attributes)


__all__ = [
    'load_network',
    'write_edge_list',
    'load_id_map',
    'load_communities',
    'load_embeddings',
    'load_attributes',
    'load_seeds',
    'Dataset',
    'DataLoader',
]
