"""Threshold-driven quadtree partitioning of a population raster.

The engine recursively splits any region whose population exceeds the
threshold into four quadrants (two halves for one-cell-wide strips), then
runs a sibling-merge pass that re-joins same-parent leaves whose combined
population still fits under the threshold, provided their union stays
orthogonally connected. Leaves of the final tree, after merging, are the
constituencies.

The tree doubles as a point-location index: finding the constituency that
contains a cell walks one root-to-leaf path instead of scanning every
constituency.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .popgrid import DotGrid, Rect, Scenario


class ResultFormatError(ValueError):
    """Raised when a serialized result document is malformed."""


@dataclass
class QuadNode:
    """One region of the partition; internal nodes carry 4 (or 2) children."""

    id: int
    rect: Rect
    population: int
    depth: int
    children: list["QuadNode"] | None = None

    @property
    def is_leaf(self) -> bool:
        return self.children is None


@dataclass
class QuadTree:
    root: QuadNode
    node_count: int
    max_depth: int
    # parent node id (None for a root leaf) -> leaf child ids, registration order
    leaf_parents: dict[int | None, list[int]]
    leaf_order: list[int]  # depth-first, NW-first
    nodes: dict[int, QuadNode]


@dataclass(frozen=True)
class TreeStats:
    nodes: int
    leaves: int
    max_depth: int


@dataclass(frozen=True)
class Constituency:
    """Final districting unit: an edge-connected union of disjoint rectangles."""

    id: int
    shape: tuple[Rect, ...]
    population: int
    flags: frozenset[str]
    source_node_ids: tuple[int, ...]
    state: str | None = None

    def contains(self, cx: int, cy: int) -> bool:
        return any(r.contains(cx, cy) for r in self.shape)


@dataclass
class DelimitationResult:
    constituencies: list[Constituency]
    count: int
    threshold: int
    people_per_dot: int
    width: int
    height: int
    stats: TreeStats
    per_state: dict[str, list[int]] | None = None
    # In-memory only; absent after deserialization.
    trees: dict[str | None, QuadTree] | None = None
    state_labels: tuple[tuple[str, ...], ...] | None = None
    leaf_lookup: dict[tuple[str | None, int], int] = field(default_factory=dict)

    @property
    def tree(self) -> QuadTree | None:
        """The single tree of an unlabelled run, if available."""
        if self.trees is not None and len(self.trees) == 1:
            return next(iter(self.trees.values()))
        return None

    def by_id(self, cid: int) -> Constituency:
        return self.constituencies[cid - 1]


OVER_CAPACITY = "overCapacity"
ZERO_POPULATION = "zeroPopulation"


def subdivide(r: Rect) -> list[Rect]:
    """Split a rect into [NW, NE, SW, SE] quadrants, top/left taking the
    ceiling halves; one-cell-wide strips split 2-way along their long axis."""
    if r.w == 1 and r.h == 1:
        raise ValueError(f"cannot subdivide 1x1 rect at ({r.x0}, {r.y0})")
    if r.h == 1:
        left = (r.w + 1) // 2
        return [Rect(r.x0, r.y0, left, 1), Rect(r.x0 + left, r.y0, r.w - left, 1)]
    if r.w == 1:
        top = (r.h + 1) // 2
        return [Rect(r.x0, r.y0, 1, top), Rect(r.x0, r.y0 + top, 1, r.h - top)]
    left = (r.w + 1) // 2
    top = (r.h + 1) // 2
    return [
        Rect(r.x0, r.y0, left, top),
        Rect(r.x0 + left, r.y0, r.w - left, top),
        Rect(r.x0, r.y0 + top, left, r.h - top),
        Rect(r.x0 + left, r.y0 + top, r.w - left, r.h - top),
    ]


def build_tree(grid: DotGrid, people_per_dot: int, threshold: int,
               root_rect: Rect | None = None) -> QuadTree:
    """Grow the subdivision tree over ``root_rect`` (default: the whole grid).

    A node whose population fits the threshold becomes a leaf and is recorded
    under its parent; anything larger is subdivided and recursed into,
    children in NW, NE, SW, SE order. A 1x1 cell over the threshold cannot
    split and stays as an over-capacity leaf.
    """
    rect = root_rect if root_rect is not None else grid.bounds()
    leaf_parents: dict[int | None, list[int]] = {}
    leaf_order: list[int] = []
    nodes: dict[int, QuadNode] = {}
    next_id = 0

    def new_node(r: Rect, depth: int) -> QuadNode:
        nonlocal next_id
        node = QuadNode(id=next_id, rect=r,
                        population=people_per_dot * grid.count_dots(r), depth=depth)
        nodes[node.id] = node
        next_id += 1
        return node

    root = new_node(rect, 0)
    max_depth = 0

    def process(prev: QuadNode | None, node: QuadNode) -> None:
        nonlocal max_depth
        max_depth = max(max_depth, node.depth)
        if node.population <= threshold or node.rect.area == 1:
            key = prev.id if prev is not None else None
            leaf_parents.setdefault(key, []).append(node.id)
            leaf_order.append(node.id)
            return
        node.children = [new_node(q, node.depth + 1) for q in subdivide(node.rect)]
        for child in node.children:
            process(node, child)

    process(None, root)
    return QuadTree(root=root, node_count=next_id, max_depth=max_depth,
                    leaf_parents=leaf_parents, leaf_order=leaf_order, nodes=nodes)


@dataclass
class MergeUnit:
    """A leaf or an agglomeration of merged sibling leaves under one parent."""

    quadrant: int  # smallest contained child index; ordering key for the scan
    leaf_ids: list[int]
    rects: list[Rect]
    population: int
    first_seq: int  # earliest depth-first leaf sequence number contained


def _units_connected(a: MergeUnit, b: MergeUnit) -> bool:
    # Each unit is connected on its own, so edge contact anywhere joins them.
    return any(ra.touches(rb) for ra in a.rects for rb in b.rects)


def merge_siblings(tree: QuadTree, threshold: int) -> dict[int | None, list[MergeUnit]]:
    """Merge same-parent leaves to a fixpoint.

    Per parent, candidate pairs are scanned in lexicographic quadrant order
    (merged units rank by their smallest contained quadrant); the first pair
    whose combined population fits the threshold and whose union is
    edge-connected is merged, and the scan restarts. Merging never crosses
    parents.
    """
    seq = {leaf_id: i for i, leaf_id in enumerate(tree.leaf_order)}
    out: dict[int | None, list[MergeUnit]] = {}
    for parent_key, child_ids in tree.leaf_parents.items():
        if parent_key is None:
            child_index = {child_ids[0]: 0}
        else:
            parent = tree.nodes[parent_key]
            child_index = {c.id: i for i, c in enumerate(parent.children)}
        units = [
            MergeUnit(quadrant=child_index[cid], leaf_ids=[cid],
                      rects=[tree.nodes[cid].rect],
                      population=tree.nodes[cid].population,
                      first_seq=seq[cid])
            for cid in child_ids
        ]
        while True:
            units.sort(key=lambda u: u.quadrant)
            pair = None
            for i in range(len(units)):
                for j in range(i + 1, len(units)):
                    a, b = units[i], units[j]
                    if a.population + b.population <= threshold and _units_connected(a, b):
                        pair = (i, j)
                        break
                if pair:
                    break
            if pair is None:
                break
            i, j = pair
            a, b = units[i], units[j]
            a.leaf_ids.extend(b.leaf_ids)
            a.rects.extend(b.rects)
            a.population += b.population
            a.first_seq = min(a.first_seq, b.first_seq)
            del units[j]
        out[parent_key] = units
    return out


def _constituency_from_unit(cid: int, unit: MergeUnit, threshold: int,
                            state: str | None) -> Constituency:
    flags = set()
    if unit.population > threshold:
        flags.add(OVER_CAPACITY)
    if unit.population == 0:
        flags.add(ZERO_POPULATION)
    return Constituency(
        id=cid,
        shape=tuple(sorted(unit.rects, key=lambda r: (r.y0, r.x0))),
        population=unit.population,
        flags=frozenset(flags),
        source_node_ids=tuple(sorted(unit.leaf_ids)),
        state=state,
    )


def _state_bbox(mask: np.ndarray) -> Rect:
    ys, xs = np.nonzero(mask)
    x0, y0 = int(xs.min()), int(ys.min())
    return Rect(x0, y0, int(xs.max()) - x0 + 1, int(ys.max()) - y0 + 1)


def delimit(scenario: Scenario) -> DelimitationResult:
    """Partition the scenario grid into constituencies.

    With state labels present, each state is delimited independently over its
    bounding region with all other states' dots masked out; constituency ids
    run sequentially across states in sorted label order.
    """
    grid = scenario.grid
    x, th = scenario.people_per_dot, scenario.threshold

    runs: list[tuple[str | None, DotGrid, Rect | None]] = []
    if scenario.state_labels is None:
        runs.append((None, grid, None))
    else:
        labels = scenario.label_array()
        for state in scenario.states:
            mask = labels == state
            runs.append((state, grid.masked(mask), _state_bbox(mask)))

    constituencies: list[Constituency] = []
    trees: dict[str | None, QuadTree] = {}
    leaf_lookup: dict[tuple[str | None, int], int] = {}
    per_state: dict[str, list[int]] | None = None if scenario.state_labels is None else {}

    for state, run_grid, root_rect in runs:
        tree = build_tree(run_grid, x, th, root_rect=root_rect)
        trees[state] = tree
        units = [u for ulist in merge_siblings(tree, th).values() for u in ulist]
        units.sort(key=lambda u: u.first_seq)
        ids_here: list[int] = []
        for unit in units:
            cid = len(constituencies) + 1
            constituencies.append(_constituency_from_unit(cid, unit, th, state))
            ids_here.append(cid)
            for leaf_id in unit.leaf_ids:
                leaf_lookup[(state, leaf_id)] = cid
        if per_state is not None:
            per_state[state] = ids_here

    all_stats = [tree_stats(t) for t in trees.values()]
    stats = TreeStats(
        nodes=sum(s.nodes for s in all_stats),
        leaves=sum(s.leaves for s in all_stats),
        max_depth=max(s.max_depth for s in all_stats),
    )
    return DelimitationResult(
        constituencies=constituencies,
        count=len(constituencies),
        threshold=th,
        people_per_dot=x,
        width=grid.width,
        height=grid.height,
        stats=stats,
        per_state=per_state,
        trees=trees,
        state_labels=scenario.state_labels,
        leaf_lookup=leaf_lookup,
    )


def tree_stats(tree: QuadTree) -> TreeStats:
    """Exact node/leaf/depth counts by traversal."""
    nodes = leaves = 0
    max_depth = 0
    stack = [tree.root]
    while stack:
        node = stack.pop()
        nodes += 1
        max_depth = max(max_depth, node.depth)
        if node.is_leaf:
            leaves += 1
        else:
            stack.extend(node.children)
    return TreeStats(nodes=nodes, leaves=leaves, max_depth=max_depth)


def _check_bounds(result: DelimitationResult, cx: int, cy: int) -> None:
    if not (0 <= cx < result.width and 0 <= cy < result.height):
        raise ValueError(
            f"point ({cx}, {cy}) outside grid {result.width}x{result.height}"
        )


def locate_with_visits(result: DelimitationResult, cx: int, cy: int) -> tuple[Constituency, int]:
    """Find the constituency containing cell (cx, cy); also return the number
    of tree nodes visited on the way (root and leaf included)."""
    _check_bounds(result, cx, cy)
    if result.trees is None:
        # Deserialized results carry no tree; scan shapes in id order.
        for c in result.constituencies:
            if c.contains(cx, cy):
                return c, len(result.constituencies)
        raise ValueError(f"no constituency contains ({cx}, {cy})")
    state = result.state_labels[cy][cx] if result.state_labels is not None else None
    node = result.trees[state].root
    visits = 1
    while not node.is_leaf:
        node = next(c for c in node.children if c.rect.contains(cx, cy))
        visits += 1
    return result.by_id(result.leaf_lookup[(state, node.id)]), visits


def locate(result: DelimitationResult, cx: int, cy: int) -> Constituency:
    return locate_with_visits(result, cx, cy)[0]


def paint_cells(result: DelimitationResult) -> np.ndarray:
    """Cell-to-constituency-id map honouring state masks.

    Cells a shape covers outside its own state belong to that state's
    bounding box, not to the constituency, and are skipped. Unowned cells
    (impossible for a valid result) stay 0.
    """
    owner = np.zeros((result.height, result.width), dtype=np.int64)
    labels = np.array(result.state_labels) if result.state_labels is not None else None
    for c in result.constituencies:
        for r in c.shape:
            block = owner[r.y0:r.y0 + r.h, r.x0:r.x0 + r.w]
            if labels is None or c.state is None:
                block[:] = c.id
            else:
                sel = labels[r.y0:r.y0 + r.h, r.x0:r.x0 + r.w] == c.state
                block[sel] = c.id
    return owner


# --- serialization -----------------------------------------------------------

def result_to_dict(result: DelimitationResult) -> dict:
    cons = []
    for c in result.constituencies:
        entry: dict = {"id": c.id}
        if c.state is not None:
            entry["state"] = c.state
        entry["population"] = c.population
        entry["flags"] = sorted(c.flags)
        entry["rects"] = [[r.x0, r.y0, r.w, r.h] for r in c.shape]
        cons.append(entry)
    return {
        "count": result.count,
        "threshold": result.threshold,
        "peoplePerDot": result.people_per_dot,
        "constituencies": cons,
        "stats": {
            "nodes": result.stats.nodes,
            "leaves": result.stats.leaves,
            "maxDepth": result.stats.max_depth,
        },
    }


def result_to_json(result: DelimitationResult) -> str:
    return json.dumps(result_to_dict(result), indent=2) + "\n"


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ResultFormatError(message)


def result_from_json(text: str) -> DelimitationResult:
    """Rebuild a result from its JSON form (no tree; locate falls back to a
    containment scan)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ResultFormatError(f"invalid JSON: {exc}") from None
    _require(isinstance(doc, dict), "top level must be an object")
    for key in ("count", "threshold", "peoplePerDot", "constituencies", "stats"):
        _require(key in doc, f"missing key '{key}'")
    _require(isinstance(doc["constituencies"], list), "'constituencies' must be a list")

    constituencies: list[Constituency] = []
    for i, entry in enumerate(doc["constituencies"], start=1):
        _require(isinstance(entry, dict), f"constituency #{i} must be an object")
        for key in ("id", "population", "flags", "rects"):
            _require(key in entry, f"constituency #{i} missing key '{key}'")
        _require(entry["id"] == i, f"constituency ids must be sequential, got {entry['id']}")
        rects = []
        for quad in entry["rects"]:
            _require(isinstance(quad, list) and len(quad) == 4
                     and all(isinstance(v, int) for v in quad),
                     f"constituency #{i}: rects must be [x0, y0, w, h] integers")
            try:
                rects.append(Rect(*quad))
            except ValueError as exc:
                raise ResultFormatError(f"constituency #{i}: {exc}") from None
        _require(len(rects) >= 1, f"constituency #{i} has no rects")
        _require(isinstance(entry["population"], int) and entry["population"] >= 0,
                 f"constituency #{i}: population must be a non-negative integer")
        constituencies.append(Constituency(
            id=i,
            shape=tuple(rects),
            population=entry["population"],
            flags=frozenset(entry["flags"]),
            source_node_ids=(),
            state=entry.get("state"),
        ))
    _require(doc["count"] == len(constituencies),
             f"count {doc['count']} does not match {len(constituencies)} constituencies")

    stats = doc["stats"]
    _require(isinstance(stats, dict) and all(k in stats for k in ("nodes", "leaves", "maxDepth")),
             "'stats' must carry nodes, leaves, maxDepth")

    width = max(r.x0 + r.w for c in constituencies for r in c.shape)
    height = max(r.y0 + r.h for c in constituencies for r in c.shape)
    per_state: dict[str, list[int]] | None = None
    if any(c.state is not None for c in constituencies):
        per_state = {}
        for c in constituencies:
            per_state.setdefault(c.state, []).append(c.id)
    return DelimitationResult(
        constituencies=constituencies,
        count=len(constituencies),
        threshold=doc["threshold"],
        people_per_dot=doc["peoplePerDot"],
        width=width,
        height=height,
        stats=TreeStats(stats["nodes"], stats["leaves"], stats["maxDepth"]),
        per_state=per_state,
    )
