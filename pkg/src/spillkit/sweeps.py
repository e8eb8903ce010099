"""Isomorphism-reduced enumeration of small source instances.

The acceptance sweeps quantify over ALL sources up to a size bound;
enumerating one representative per isomorphism class keeps that
exhaustive claim tractable. Graphs and set families are canonicalized
by a vectorized minimum over all label permutations; families of
3-element subsets (too many permutations for that) are built by
augmentation with Weisfeiler-Lehman bucketing plus exact VF2 checks on
their bipartite encodings.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations

import networkx as nx
import numpy as np

from .reductions import CoverInstance, GraphInstance, X3CInstance


# ---------------------------------------------------------------------
# Graphs up to isomorphism
# ---------------------------------------------------------------------

@lru_cache(maxsize=None)
def graph_classes(n):
    """Canonical edge-index-pair tuples of all n-vertex graphs."""
    slots = list(combinations(range(n), 2))
    slot_of = {e: i for i, e in enumerate(slots)}
    nbits = len(slots)
    masks = np.arange(1 << nbits, dtype=np.uint32)
    canon = masks.copy()
    for perm in permutations(range(n)):
        mapped = np.zeros_like(masks)
        for i, (a, b) in enumerate(slots):
            j = slot_of[tuple(sorted((perm[a], perm[b])))]
            mapped |= ((masks >> i) & 1).astype(np.uint32) << np.uint32(j)
        np.minimum(canon, mapped, out=canon)
    reps = np.nonzero(canon == masks)[0]
    out = []
    for mask in reps:
        out.append(tuple(slots[i] for i in range(nbits) if mask >> i & 1))
    return out


def graphs_upto(n_max):
    """(n, edges) for one representative of every graph with 1..n_max vertices."""
    for n in range(1, n_max + 1):
        for edges in graph_classes(n):
            yield n, edges


def graph_instance(n, edges, bound):
    names = tuple(f"u{i}" for i in range(n))
    return GraphInstance(names, tuple((names[a], names[b]) for a, b in edges),
                         bound)


# ---------------------------------------------------------------------
# Set families (minimum cover sources) up to isomorphism
# ---------------------------------------------------------------------

@lru_cache(maxsize=None)
def _mask_perm_table(g):
    """For each permutation of g elements, the induced map on subset masks."""
    perms = list(permutations(range(g)))
    table = np.zeros((len(perms), 1 << g), dtype=np.uint8)
    for pi, perm in enumerate(perms):
        for mask in range(1 << g):
            out = 0
            for b in range(g):
                if mask >> b & 1:
                    out |= 1 << perm[b]
            table[pi, mask] = out
    return table


def _canon_families(g, fams):
    """Canonical form (min over permutations) of each family, vectorized.

    `fams` is an (N, width) uint8 array of subset masks padded with 0;
    the zero mask is not a legal member so padding survives sorting in
    place. Returns (N,) uint64 packed canonical keys and the canonical
    row for each family.
    """
    table = _mask_perm_table(g)
    n, width = fams.shape
    shifts = (np.arange(width, dtype=np.uint64)[::-1] * np.uint64(8))

    def pack(rows):
        return (rows.astype(np.uint64) << shifts).sum(axis=1)

    best_key = None
    best_rows = None
    for pi in range(table.shape[0]):
        mapped = table[pi][fams]
        mapped.sort(axis=1)
        key = pack(mapped)
        if best_key is None:
            best_key = key
            best_rows = mapped
        else:
            better = key < best_key
            best_key = np.where(better, key, best_key)
            best_rows[better] = mapped[better]
    return best_key, best_rows


@lru_cache(maxsize=None)
def family_classes(g, family_max):
    """Canonical families of distinct nonempty subsets of a g-element ground
    set, one representative per isomorphism class, sizes 1..family_max."""
    all_masks = list(range(1, 1 << g))
    width = family_max
    levels = []
    # level 1
    fams = np.zeros((len(all_masks), width), dtype=np.uint8)
    fams[:, -1] = all_masks
    key, rows = _canon_families(g, fams)
    _, first = np.unique(key, return_index=True)
    level = [tuple(int(x) for x in rows[i] if x) for i in sorted(first)]
    levels.append(level)
    for size in range(2, family_max + 1):
        cand = []
        for rep in levels[-1]:
            have = set(rep)
            for m in all_masks:
                if m not in have:
                    cand.append(sorted(have | {m}))
        if not cand:
            levels.append([])
            continue
        fams = np.zeros((len(cand), width), dtype=np.uint8)
        for i, fam in enumerate(cand):
            fams[i, width - size:] = fam
        key, rows = _canon_families(g, fams)
        _, first = np.unique(key, return_index=True)
        level = [tuple(int(x) for x in rows[i] if x) for i in sorted(first)]
        levels.append(level)
    return [fam for level in levels for fam in level]


def cover_sources(ground_max, family_max):
    """CoverInstances for every class and every bound K."""
    for g in range(1, ground_max + 1):
        names = tuple(f"b{i}" for i in range(g))
        for fam in family_classes(g, family_max):
            members = tuple(frozenset(names[b] for b in range(g) if m >> b & 1)
                            for m in fam)
            for bound in range(1, len(members) + 1):
                yield CoverInstance(names, members, bound)


# ---------------------------------------------------------------------
# Triple families (X3C sources) up to isomorphism
# ---------------------------------------------------------------------

def _triple_graph(n_elems, fam):
    g = nx.Graph()
    for e in range(n_elems):
        g.add_node(("e", e), kind="elem")
    for i, t in enumerate(fam):
        g.add_node(("t", i), kind="triple")
        for e in t:
            g.add_edge(("t", i), ("e", e))
    return g


def _iso(g1, g2):
    return nx.is_isomorphic(g1, g2,
                            node_match=lambda a, b: a["kind"] == b["kind"])


@lru_cache(maxsize=None)
def triple_family_classes(n_elems, family_max):
    """Canonical families of distinct 3-subsets of n_elems elements."""
    triples = [frozenset(c) for c in combinations(range(n_elems), 3)]
    levels = [[(t,) for t in triples[:1]]]  # all single triples are isomorphic
    out = [(triples[0],)]
    current = [(triples[0],)]
    for size in range(2, family_max + 1):
        buckets = {}
        reps = []
        for fam in current:
            have = set(fam)
            for t in triples:
                if t in have:
                    continue
                cand = tuple(sorted(have | {t}, key=sorted))
                graph = _triple_graph(n_elems, cand)
                key = nx.weisfeiler_lehman_graph_hash(graph, node_attr="kind")
                hit = False
                for other_graph in buckets.get(key, ()):
                    if _iso(graph, other_graph):
                        hit = True
                        break
                if not hit:
                    buckets.setdefault(key, []).append(graph)
                    reps.append(cand)
        out.extend(reps)
        current = reps
    return out


def x3c_sources(elems_max, family_max):
    """X3CInstances, exhaustive over isomorphism classes."""
    for n_elems in range(3, elems_max + 1, 3):
        names = tuple(f"e{i}" for i in range(n_elems))
        for fam in triple_family_classes(n_elems, family_max):
            yield X3CInstance(
                names, tuple(frozenset(names[e] for e in t) for t in fam))
