"""Shared fixtures: deterministic random scenario/instance generators."""

from __future__ import annotations

import random

from quadlimit import DotGrid, Scenario, StateRecord


def random_counts(rng: random.Random, width: int, height: int,
                  max_count: int = 9, zero_bias: float = 0.35):
    return [
        [0 if rng.random() < zero_bias else rng.randint(0, max_count)
         for _ in range(width)]
        for _ in range(height)
    ]


def random_state_labels(rng: random.Random, width: int, height: int):
    """Band-partition the grid into 2-4 states; bands are always connected."""
    n = rng.randint(2, 4)
    labels = [f"S{i}" for i in range(n)]
    vertical = rng.random() < 0.5
    span = width if vertical else height
    if span < n:
        n, labels = 1, ["S0"]
    cuts = sorted(rng.sample(range(1, span), n - 1)) if n > 1 else []
    bounds = [0, *cuts, span]

    def band(i):
        for b in range(len(bounds) - 1):
            if bounds[b] <= i < bounds[b + 1]:
                return labels[b]
        raise AssertionError

    return tuple(
        tuple(band(x if vertical else y) for x in range(width))
        for y in range(height)
    )


def random_scenario(rng: random.Random, max_dim: int = 64,
                    with_states: bool | None = None) -> Scenario:
    width = rng.randint(1, max_dim)
    height = rng.randint(1, max_dim)
    counts = random_counts(rng, width, height)
    grid = DotGrid(counts)
    x = rng.choice([1, 1, 5, 100, 500, rng.randint(1, 1000)])
    total = x * grid.total_dots
    # Thresholds spread from forcing deep subdivision to a single region.
    threshold = rng.choice([
        max(1, x),
        max(1, total // 20 if total else 1),
        max(1, total // 4 if total else 1),
        max(1, total + rng.randint(0, 10)),
        rng.randint(1, max(1, total + 1)),
    ])
    labeled = with_states if with_states is not None else rng.random() < 0.25
    labels = random_state_labels(rng, width, height) if labeled else None
    return Scenario(grid=grid, people_per_dot=x, threshold=threshold,
                    state_labels=labels)


def random_apportionment_instance(rng: random.Random, max_states: int = 10,
                                  max_seats: int = 100):
    n = rng.randint(1, max_states)
    states = [StateRecord(f"S{i:02d}", rng.randint(1, 1_000_000))
              for i in range(n)]
    seats = rng.randint(n, max_seats)
    return states, seats


def scenario_text(counts, x, th, labels=None) -> str:
    height = len(counts)
    width = len(counts[0])
    lines = [f"{width} {height} {x} {th}"]
    lines += [" ".join(str(v) for v in row) for row in counts]
    if labels is not None:
        lines.append("STATES")
        lines += [" ".join(row) for row in labels]
    return "\n".join(lines) + "\n"
