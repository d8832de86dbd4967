"""Mixer schedules for deferred-constraint circuits.

A schedule lists one partial-mixer slot per vertex: first the slots of every
partition (each partition ordered by degree), then the separator slots. Each
slot only checks the neighbors that come earlier in the schedule, which is
exact when the circuit starts from the empty set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from dcqdca.graph import Graph


class ScheduleError(ValueError):
    pass


@dataclass(frozen=True)
class MixerSlot:
    vertex: int
    controls: tuple[int, ...]
    active: bool = True
    # every active neighbor; used from layer 2 on, where earlier mixers may have fired
    full_controls: tuple[int, ...] = ()


@dataclass(frozen=True)
class MixerSchedule:
    qubits: tuple[int, ...]
    slots: tuple[MixerSlot, ...]
    layers: int = 1
    segments: tuple[tuple[int, int], ...] = ()
    deferred: bool = True

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    @property
    def active_slots(self) -> list[MixerSlot]:
        return [s for s in self.slots if s.active]

    @property
    def inactive_count(self) -> int:
        return sum(1 for s in self.slots if not s.active)

    @property
    def num_params(self) -> int:
        return self.layers * (len(self.active_slots) + 1)

    def wire(self, vertex: int) -> int:
        return self.qubits.index(vertex)

    def separator_slots(self) -> list[MixerSlot]:
        if not self.segments:
            return []
        lo, hi = self.segments[-1]
        return list(self.slots[lo:hi])

    def controls_for_layer(self, slot: MixerSlot, layer: int) -> tuple[int, ...]:
        return slot.controls if layer == 0 else slot.full_controls

    def to_dict(self) -> dict:
        return {
            "qubits": list(self.qubits),
            "layers": self.layers,
            "deferred": self.deferred,
            "segments": [list(s) for s in self.segments],
            "num_params": self.num_params,
            "inactive": self.inactive_count,
            "slots": [
                {"vertex": s.vertex, "controls": list(s.controls), "active": s.active}
                for s in self.slots
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def order_vertices(g: Graph, subset: Iterable[int]) -> list[int]:
    """Sort by degree ascending, ties by vertex id."""
    return sorted(set(subset), key=lambda v: (g.degree(v), v))


def restricted_controls(ordering: Sequence[int], g: Graph) -> list[set[int]]:
    if len(set(ordering)) != len(ordering):
        raise ScheduleError("ordering repeats a vertex")
    pos = {v: i for i, v in enumerate(ordering)}
    return [{u for u in g.neighbors(v) if u in pos and pos[u] < i} for i, v in enumerate(ordering)]


def _assemble(
    g: Graph,
    segments_v: list[list[int]],
    inactive: set[int],
    layers: int,
    restricted: bool,
    deferred: bool,
) -> MixerSchedule:
    if layers < 1:
        raise ScheduleError("need at least one layer")
    ordering = [v for seg in segments_v for v in seg]
    active_order = [v for v in ordering if v not in inactive]
    active_set = set(active_order)
    # inactive vertices stay |0>, so checking them is a no-op
    ctrl = restricted_controls(active_order, g)
    ctrl_of = dict(zip(active_order, ctrl))
    slots = []
    for v in ordering:
        full = tuple(sorted(u for u in g.neighbors(v) if u in active_set))
        if v in inactive:
            slots.append(MixerSlot(v, (), False, ()))
        else:
            c = tuple(sorted(ctrl_of[v])) if restricted else full
            slots.append(MixerSlot(v, c, True, full))
    bounds = []
    start = 0
    for seg in segments_v:
        bounds.append((start, start + len(seg)))
        start += len(seg)
    return MixerSchedule(
        qubits=tuple(active_order),
        slots=tuple(slots),
        layers=layers,
        segments=tuple(bounds),
        deferred=deferred,
    )


def build_schedule(
    g: Graph,
    parts: Sequence[Iterable[int]],
    separator_active: Iterable[int],
    layers: int = 1,
    separator_inactive: Iterable[int] = (),
    inactive: Iterable[int] = (),
    restricted: bool = True,
) -> MixerSchedule:
    """Deferred schedule: each part in degree order, then the separator.

    ``separator_inactive`` gets slots without gates at the very end;
    ``inactive`` switches off mixers of chosen part vertices. With
    ``restricted=False`` every mixer checks all of its active neighbors.
    """
    parts = [set(p) for p in parts]
    sep_on = set(separator_active)
    sep_off = set(separator_inactive)
    off = set(inactive)
    seen: set[int] = set()
    for p in parts:
        if seen & p:
            raise ScheduleError(f"parts overlap at {sorted(seen & p)}")
        seen |= p
    if seen & (sep_on | sep_off):
        raise ScheduleError(f"parts overlap separator at {sorted(seen & (sep_on | sep_off))}")
    if sep_on & sep_off:
        raise ScheduleError("a separator vertex cannot be both active and inactive")
    segs = [order_vertices(g, p) for p in parts]
    segs.append(order_vertices(g, sep_on) + order_vertices(g, sep_off))
    return _assemble(g, segs, off | sep_off, layers, restricted, deferred=True)


def build_interleaved_schedule(
    g: Graph,
    parts: Sequence[Iterable[int]],
    separator_active: Iterable[int],
    layers: int = 1,
    separator_inactive: Iterable[int] = (),
) -> MixerSchedule:
    """Non-deferred baseline: one global degree ordering, separator mixed in."""
    sep_on = set(separator_active)
    sep_off = set(separator_inactive)
    every = set().union(*map(set, parts)) | sep_on | sep_off
    order = order_vertices(g, every)
    return _assemble(g, [order], sep_off, layers, restricted=True, deferred=False)


def cut_count(g: Graph, separator_active: Iterable[int], full_separator: Iterable[int]) -> int:
    """Number of partition wires the separator subcircuit has to read."""
    sep = set(full_separator)
    on = set(separator_active)
    if not on <= sep:
        raise ScheduleError("active separator must be a subset of the separator")
    return len(set().union(*(set(g.neighbors(s)) for s in on)) - sep) if on else 0


def schedule_wire_cuts(schedule: MixerSchedule, home: dict[int, int]) -> int:
    """Count wire cuts by walking layer-1 gates.

    ``home`` maps each vertex to its subcircuit. Every time a wire is touched
    by a gate that belongs to a different subcircuit than the previous one on
    that wire, one cut is needed.
    """
    where = {q: home[q] for q in schedule.qubits}
    cuts = 0
    for slot in schedule.active_slots:
        sub = home[slot.vertex]
        for w in (slot.vertex, *slot.controls):
            if where[w] != sub:
                cuts += 1
                where[w] = sub
    return cuts


def sparsify_separator(g: Graph, S: Iterable[int], budget: int) -> tuple[set[int], set[int]]:
    """Greedily keep separator vertices while their outside neighborhood fits the budget.

    Returns ``(kept, neighborhood)`` with ``len(neighborhood) <= budget``.
    """
    if budget < 0:
        raise ScheduleError("cut budget must be non-negative")
    sep = set(S)
    kept: set[int] = set()
    nbhd: set[int] = set()
    for s in order_vertices(g, sep):
        trial = nbhd | (set(g.neighbors(s)) - sep)
        if len(trial) <= budget:
            nbhd = trial
            kept.add(s)
    return kept, nbhd


def sparsify_interleaved(
    g: Graph, parts: Sequence[Iterable[int]], S: Iterable[int], budget: int
) -> set[int]:
    """Greedy separator selection for the non-deferred baseline, costed by wire cuts."""
    sep = set(S)
    home = {v: i for i, p in enumerate(parts) for v in p}
    home.update({s: len(parts) for s in sep})
    kept: set[int] = set()
    for s in order_vertices(g, sep):
        trial = kept | {s}
        sched = build_interleaved_schedule(g, parts, trial, separator_inactive=sep - trial)
        if schedule_wire_cuts(sched, home) <= budget:
            kept = trial
    return kept
