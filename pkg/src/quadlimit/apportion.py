"""Classical seat-apportionment methods over state populations.

Four methods are provided: Hamilton/Vinton (largest remainders), Jefferson
(greatest divisors), Webster (major fractions) and Huntington-Hill (equal
proportions). All arithmetic is exact: quotas and priority values are
rationals, and Huntington-Hill priorities are ranked by cross-multiplied
integer comparison of their squares, so no result ever depends on float
rounding.

Ties are broken in favour of the larger population, then by label order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

METHOD_ORDER = ("hamilton", "jefferson", "webster", "huntington-hill")


class ApportionmentError(ValueError):
    """Raised for infeasible or malformed apportionment inputs."""


@dataclass(frozen=True)
class StateRecord:
    label: str
    population: int


@dataclass(frozen=True)
class ApportionmentResult:
    method: str
    house_size: int
    seats: dict[str, int]
    # Exact quotas, Hamilton only.
    quotas: dict[str, Fraction] | None = None
    # (award round, label) log, divisor methods only.
    priority_trace: tuple[tuple[int, str], ...] | None = None


def _check_input(states: list[StateRecord], house_size: int) -> None:
    if not states:
        raise ApportionmentError("at least one state is required")
    if house_size < 1:
        raise ApportionmentError(f"house size must be >= 1, got {house_size}")
    labels = [s.label for s in states]
    if len(set(labels)) != len(labels):
        raise ApportionmentError("state labels must be unique")
    for s in states:
        if s.population < 1:
            raise ApportionmentError(f"state '{s.label}' population must be >= 1")


def hamilton(states: list[StateRecord], house_size: int) -> ApportionmentResult:
    """Largest-remainder apportionment.

    Each state first receives the floor of its exact quota
    (population * house_size / total); leftover seats go to the largest
    fractional remainders. The result always satisfies the quota rule.
    """
    _check_input(states, house_size)
    total = sum(s.population for s in states)
    quotas = {s.label: Fraction(s.population * house_size, total) for s in states}
    seats = {s.label: int(quotas[s.label]) for s in states}
    leftover = house_size - sum(seats.values())
    by_remainder = sorted(
        states,
        key=lambda s: (-(quotas[s.label] - seats[s.label]), -s.population, s.label),
    )
    for s in by_remainder[:leftover]:
        seats[s.label] += 1
    return ApportionmentResult(method="hamilton", house_size=house_size,
                               seats=seats, quotas=quotas)


def _highest_averages(method: str, states: list[StateRecord], house_size: int,
                      seed: int, key: Callable[[int, int], Fraction]) -> ApportionmentResult:
    """Award seats one at a time to the state with the highest priority.

    ``key(population, seats_so_far)`` must be a rational that orders states
    the same way as the method's priority value.
    """
    _check_input(states, house_size)
    seats = {s.label: seed for s in states}
    rounds = house_size - seed * len(states)
    if rounds < 0:
        raise ApportionmentError(
            f"{method} needs at least {seed * len(states)} seats "
            f"for {len(states)} states, got {house_size}"
        )
    trace = []
    for rnd in range(1, rounds + 1):
        best = min(states, key=lambda s: (-key(s.population, seats[s.label]),
                                          -s.population, s.label))
        seats[best.label] += 1
        trace.append((rnd, best.label))
    return ApportionmentResult(method=method, house_size=house_size,
                               seats=seats, priority_trace=tuple(trace))


def jefferson(states: list[StateRecord], house_size: int) -> ApportionmentResult:
    """Greatest-divisors apportionment: priority population/(s+1).

    Equivalent to picking a divisor d such that the rounded-down quotients
    sum to the house size.
    """
    return _highest_averages("jefferson", states, house_size, seed=0,
                             key=lambda pop, s: Fraction(pop, s + 1))


def webster(states: list[StateRecord], house_size: int) -> ApportionmentResult:
    """Major-fractions apportionment: priority population/(2s+1).

    Equivalent to picking a divisor d such that the half-up-rounded
    quotients sum to the house size.
    """
    return _highest_averages("webster", states, house_size, seed=0,
                             key=lambda pop, s: Fraction(pop, 2 * s + 1))


def huntington_hill(states: list[StateRecord], house_size: int) -> ApportionmentResult:
    """Equal-proportions apportionment: every state is seeded one seat, then
    priority population/sqrt(s*(s+1)) awards the rest.

    Priorities are compared via their squares, population^2/(s*(s+1)), which
    keeps the ranking exact in integer arithmetic.
    """
    return _highest_averages("huntington-hill", states, house_size, seed=1,
                             key=lambda pop, s: Fraction(pop * pop, s * (s + 1)))


METHODS: dict[str, Callable[[list[StateRecord], int], ApportionmentResult]] = {
    "hamilton": hamilton,
    "jefferson": jefferson,
    "webster": webster,
    "huntington-hill": huntington_hill,
}


def compare_methods(states: list[StateRecord], house_size: int) -> dict[str, ApportionmentResult]:
    """All four methods on the same input, keyed by method name."""
    return {name: METHODS[name](states, house_size) for name in METHOD_ORDER}


def parse_populations(spec: str) -> list[StateRecord]:
    """Parse an inline ``A=2560,B=3315`` population spec."""
    states = []
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        label, eq, value = item.partition("=")
        if not eq or not label.strip():
            raise ApportionmentError(f"expected LABEL=POPULATION, got {item!r}")
        try:
            population = int(value)
        except ValueError:
            raise ApportionmentError(f"non-integer population in {item!r}") from None
        states.append(StateRecord(label=label.strip(), population=population))
    if not states:
        raise ApportionmentError("no states given")
    _check_input(states, house_size=1)
    return states


def parse_populations_file(text: str) -> list[StateRecord]:
    """Parse a two-column ``label population`` file; ``#`` lines are comments."""
    states = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ApportionmentError(
                f"line {lineno}: expected 'label population', got {line!r}"
            )
        try:
            population = int(parts[1])
        except ValueError:
            raise ApportionmentError(f"line {lineno}: non-integer population {parts[1]!r}") from None
        states.append(StateRecord(label=parts[0], population=population))
    if not states:
        raise ApportionmentError("no states given")
    _check_input(states, house_size=1)
    return states
