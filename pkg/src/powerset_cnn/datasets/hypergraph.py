"""Hypergraphs, their set-function representations and the real-corpus tasks."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..core import MAX_N
from .base import LabeledDataset, random_split
from .synthetic import GenerationError


class CorruptCorpusError(ValueError):
    pass


class CorpusParseError(ValueError):
    pass


class MissingCorpusError(FileNotFoundError):
    pass


DOM_CORPORA = ("DAWN", "threads-stack-overflow", "coauth-DBLP", "coauth-MAG-History",
               "coauth-MAG-Geology", "congress-bills")
DOM4_CORPORA = ("DAWN", "threads-stack-overflow", "coauth-DBLP", "congress-bills")


@dataclass
class Hypergraph:
    """Vertices (sorted ids), hyperedges as frozensets of ids, one weight per edge."""

    vertices: tuple
    edges: list
    weights: np.ndarray | None = None
    times: np.ndarray | None = None
    _incidence: dict | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.vertices = tuple(sorted(set(self.vertices)))
        self.edges = [frozenset(e) for e in self.edges]
        vset = set(self.vertices)
        for e in self.edges:
            if not e:
                raise ValueError("hyperedges must be nonempty")
            if not e <= vset:
                raise ValueError(f"hyperedge {sorted(e)} uses unknown vertices")
        if self.weights is None:
            self.weights = np.ones(len(self.edges))
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if self.weights.shape != (len(self.edges),):
            raise ValueError("one weight per hyperedge is required")

    @classmethod
    def from_edges(cls, edges, weights=None, vertices=None):
        edges = [frozenset(e) for e in edges]
        if vertices is None:
            vertices = set().union(*edges) if edges else ()
        return cls(tuple(vertices), edges, weights)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def incidence(self) -> dict:
        """vertex id -> array of indices of the edges containing it (cached)."""
        if self._incidence is None:
            inc = defaultdict(list)
            for j, e in enumerate(self.edges):
                for v in e:
                    inc[v].append(j)
            self._incidence = {v: np.asarray(js) for v, js in inc.items()}
        return self._incidence

    def edges_of_size(self, k, unique=True) -> list:
        out = [e for e in self.edges if len(e) == k]
        if unique:
            out = list(dict.fromkeys(out))
        return out

    def edge_masks(self) -> np.ndarray:
        pos = {v: i for i, v in enumerate(self.vertices)}
        return np.array([sum(1 << pos[v] for v in e) for e in self.edges], dtype=np.int64)


def _check_size(H: Hypergraph):
    if H.n_vertices > MAX_N:
        raise ValueError(f"{H.n_vertices} vertices exceed the limit of {MAX_N}")


def indicator_setfn(H: Hypergraph) -> np.ndarray:
    """s_A = 1 if A is a hyperedge, else 0; bit i of A stands for ``H.vertices[i]``."""
    _check_size(H)
    s = np.zeros(1 << H.n_vertices)
    s[H.edge_masks()] = 1.0
    return s


def cut_setfn(H: Hypergraph) -> np.ndarray:
    """Total weight of edges meeting both A and its complement."""
    _check_size(H)
    A = np.arange(1 << H.n_vertices)
    s = np.zeros(len(A))
    for B, w in zip(H.edge_masks(), H.weights):
        s += w * (((A & B) != 0) & ((B & ~A) != 0))
    return s


def assoc_setfn(H: Hypergraph) -> np.ndarray:
    """Total weight of edges contained in A."""
    _check_size(H)
    A = np.arange(1 << H.n_vertices)
    s = np.zeros(len(A))
    for B, w in zip(H.edge_masks(), H.weights):
        s += w * ((A & B) == B)
    return s


# ---------------------------------------------------------------- corpus files

def _read_ints(path: Path) -> np.ndarray:
    tokens = path.read_text().split()
    try:
        return np.array([int(t) for t in tokens], dtype=np.int64)
    except ValueError as exc:
        raise CorpusParseError(f"{path}: {exc}") from None


def corpus_paths(data_dir, name) -> tuple:
    """Locate ``<name>-{nverts,simplices,times}.txt`` in ``data_dir`` or ``data_dir/<name>``."""
    data_dir = Path(data_dir)
    for base in (data_dir / name, data_dir):
        paths = tuple(base / f"{name}-{part}.txt" for part in ("nverts", "simplices", "times"))
        if all(p.exists() for p in paths):
            return paths
    raise MissingCorpusError(f"corpus {name!r} not found under {data_dir}")


def load_corpus(paths) -> Hypergraph:
    """Parse the nverts / simplices / times triple into a timestamped hypergraph."""
    nverts_path, simplices_path, times_path = (Path(p) for p in paths)
    nverts = _read_ints(nverts_path)
    simplices = _read_ints(simplices_path)
    times = _read_ints(times_path)
    if len(times) != len(nverts):
        raise CorruptCorpusError(f"{len(nverts)} simplex sizes but {len(times)} timestamps")
    if nverts.sum() != len(simplices):
        raise CorruptCorpusError(f"simplex sizes sum to {nverts.sum()} but "
                                 f"{len(simplices)} vertex ids were read")
    if np.any(nverts < 1):
        raise CorruptCorpusError("simplex sizes must be positive")
    bounds = np.concatenate([[0], np.cumsum(nverts)])
    edges = [frozenset(simplices[a:b].tolist()) for a, b in zip(bounds[:-1], bounds[1:])]
    H = Hypergraph(tuple(np.unique(simplices).tolist()), edges)
    H.times = times
    return H


def load_named(data_dir, name) -> Hypergraph:
    return load_corpus(corpus_paths(data_dir, name))


# ---------------------------------------------------------------- subhypergraphs

def induced_subhypergraph(H: Hypergraph, subset) -> Hypergraph:
    """Intersect every edge with ``subset``; vertices are relabeled 1..k in id order."""
    subset = sorted(set(subset))
    inc = H.incidence()
    known = set(H.vertices)
    missing = [v for v in subset if v not in known]
    if missing:
        raise ValueError(f"vertices {missing} are not in the hypergraph")
    relabel = {v: i + 1 for i, v in enumerate(subset)}
    sub = frozenset(subset)
    touching = set()
    for v in subset:
        touching.update(inc.get(v, np.zeros(0, dtype=np.int64)).tolist())
    edges = {frozenset(relabel[v] for v in H.edges[j] & sub) for j in touching}
    return Hypergraph(tuple(range(1, len(subset) + 1)), sorted(edges, key=sorted))


def induced_indicator(H: Hypergraph, subset) -> np.ndarray:
    return indicator_setfn(induced_subhypergraph(H, subset))


def two_section(H: Hypergraph) -> dict:
    """Adjacency sets of the graph joining every pair of vertices sharing an edge."""
    adj = defaultdict(set)
    for e in set(H.edges):
        for v in e:
            adj[v].update(e)
    for v in adj:
        adj[v].discard(v)
    return adj


def is_contained(H: Hypergraph, subset) -> bool:
    """Whether some hyperedge contains ``subset``."""
    inc = H.incidence()
    common = None
    for v in subset:
        js = inc.get(v)
        if js is None:
            return False
        common = js if common is None else np.intersect1d(common, js, assume_unique=True)
        if common.size == 0:
            return False
    return True


def is_open(H: Hypergraph, subset, adjacency=None) -> bool:
    """Clique in the two-section and contained in no hyperedge."""
    adjacency = two_section(H) if adjacency is None else adjacency
    vs = list(subset)
    for i, v in enumerate(vs):
        if not set(vs[i + 1:]) <= adjacency.get(v, set()):
            return False
    return not is_contained(H, subset)


# ---------------------------------------------------------------- tasks

def _stack(rows) -> np.ndarray:
    return np.array(rows, dtype=np.float64).reshape(len(rows), -1)


def build_dom(corpora: dict, variant="DOM6", seed=0, unique_edges=True) -> LabeledDataset:
    """Classify which corpus a size-ten induced subhypergraph comes from.

    ``corpora`` maps names to hypergraphs and must hold every corpus the
    variant needs.
    """
    names = {"DOM6": DOM_CORPORA, "DOM4": DOM4_CORPORA}[variant.upper()]
    missing = [c for c in names if c not in corpora]
    if missing:
        raise MissingCorpusError(f"{variant} needs corpora {missing}")
    rows, labels = [], []
    for label, name in enumerate(names):
        H = corpora[name]
        for e in H.edges_of_size(10, unique=unique_edges):
            rows.append(induced_indicator(H, e))
            labels.append(label)
    rng = np.random.default_rng(seed)
    params = {"task": variant.lower(), "corpora": list(names), "seed": seed,
              "unique_edges": unique_edges}
    return LabeledDataset(_stack(rows), labels, len(names), *random_split(len(rows), 0.8, rng),
                          params=params)


def open_extensions(H: Hypergraph, count, rng, adjacency=None) -> list:
    """Up to ``count`` distinct open 10-sets, each a size-nine edge plus one vertex."""
    adjacency = two_section(H) if adjacency is None else adjacency
    nines = H.edges_of_size(9)
    order = rng.permutation(len(nines))
    found, seen = [], set()
    # each pass adds at most one new extension per nine-edge, so the draws
    # spread over as many edges as possible
    pending = {int(i): None for i in order}
    while len(found) < count and pending:
        progressed = False
        for i in list(pending):
            if len(found) >= count:
                break
            e = nines[i]
            cands = pending[i]
            if cands is None:
                common = set.intersection(*(adjacency.get(v, set()) for v in e)) - e
                cands = [int(v) for v in rng.permutation(sorted(common))]
            while cands:
                v = cands.pop()
                ext = e | {v}
                if ext not in seen and not is_contained(H, ext):
                    seen.add(ext)
                    found.append(ext)
                    progressed = True
                    break
            if cands:
                pending[i] = cands
            else:
                del pending[i]
        if not progressed:
            break
    return found


def build_con10(H: Hypergraph, seed=0, n_open=4000) -> LabeledDataset:
    """Closed size-ten edges (label 1) against open extensions of size-nine edges (label 0)."""
    rng = np.random.default_rng(seed)
    closed = H.edges_of_size(10)
    opened = open_extensions(H, n_open, rng)
    if len(opened) < n_open:
        raise GenerationError(f"only {len(opened)} open candidates found, {n_open} requested")
    rows = [induced_indicator(H, e) for e in opened] + [induced_indicator(H, e) for e in closed]
    labels = [0] * len(opened) + [1] * len(closed)
    params = {"task": "con10", "seed": seed, "n_open": n_open}
    return LabeledDataset(_stack(rows), labels, 2, *random_split(len(rows), 0.8, rng),
                          params=params)


def _random_extensions(H: Hypergraph, count, rng) -> list:
    nines = H.edges_of_size(9)
    if not nines:
        raise GenerationError("corpus has no size-nine hyperedges")
    verts = np.asarray(H.vertices)
    out = []
    for i in rng.integers(len(nines), size=count):
        e = nines[i]
        while True:
            v = int(verts[rng.integers(len(verts))])
            if v not in e:
                out.append(e | {v})
                break
    return out


def _closure_samples(H, rng):
    closed = H.edges_of_size(10)
    opened = _random_extensions(H, len(closed), rng)
    rows = [induced_indicator(H, e) for e in opened] + [induced_indicator(H, e) for e in closed]
    return rows, [0] * len(opened) + [1] * len(closed)


def build_coauth10(corpora: dict, seed=0, train=("coauth-DBLP",),
                   test=("coauth-MAG-History", "coauth-MAG-Geology")) -> LabeledDataset:
    """Closed size-ten edges against random extensions of size-nine edges, split by corpus."""
    missing = [c for c in (*train, *test) if c not in corpora]
    if missing:
        raise MissingCorpusError(f"COAUTH10 needs corpora {missing}")
    rng = np.random.default_rng(seed)
    rows, labels, is_test = [], [], []
    for names, flag in ((train, False), (test, True)):
        for name in names:
            r, lab = _closure_samples(corpora[name], rng)
            rows += r
            labels += lab
            is_test += [flag] * len(r)
    is_test = np.asarray(is_test)
    params = {"task": "coauth10", "seed": seed, "train": list(train), "test": list(test)}
    return LabeledDataset(_stack(rows), labels, 2, np.flatnonzero(~is_test),
                          np.flatnonzero(is_test), params=params)
