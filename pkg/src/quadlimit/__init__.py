"""Quadtree-based constituency delimitation with apportionment baselines."""

from .apportion import (
    ApportionmentError,
    ApportionmentResult,
    StateRecord,
    compare_methods,
    hamilton,
    huntington_hill,
    jefferson,
    webster,
)
from .popgrid import (
    DotGrid,
    Rect,
    Scenario,
    ScenarioError,
    build_sat,
    count_dots,
    load_scenario,
    load_scenario_file,
)
from .quadtree import (
    Constituency,
    DelimitationResult,
    QuadNode,
    QuadTree,
    ResultFormatError,
    TreeStats,
    build_tree,
    delimit,
    locate,
    locate_with_visits,
    merge_siblings,
    paint_cells,
    result_from_json,
    result_to_json,
    subdivide,
    tree_stats,
)
from .render import RenderStyle, boundary_loops, render_ascii_grid, render_svg

__version__ = "0.1.0"

__all__ = [
    "ApportionmentError",
    "ApportionmentResult",
    "Constituency",
    "DelimitationResult",
    "DotGrid",
    "QuadNode",
    "QuadTree",
    "Rect",
    "RenderStyle",
    "ResultFormatError",
    "Scenario",
    "ScenarioError",
    "StateRecord",
    "TreeStats",
    "boundary_loops",
    "build_sat",
    "build_tree",
    "compare_methods",
    "count_dots",
    "delimit",
    "hamilton",
    "huntington_hill",
    "jefferson",
    "load_scenario",
    "load_scenario_file",
    "locate",
    "locate_with_visits",
    "merge_siblings",
    "paint_cells",
    "render_ascii_grid",
    "render_svg",
    "result_from_json",
    "result_to_json",
    "subdivide",
    "tree_stats",
    "webster",
]
