"""Graph abstraction of a trajectory: deduplicated actions with temporal edges.

Node identity is the normalized action signature (action kind, normalized
target path, lowercased first command token). Edge count is over distinct
ordered pairs; the loop count tallies walk positions that re-enter a node
already visited earlier.
"""

from __future__ import annotations

from dataclasses import dataclass

from .records import EmptyTrajectoryError, StepRecord, TrajectoryRecord


@dataclass(frozen=True)
class ActionNode:
    action_kind: str
    target_path: str
    command_head: str

    def label(self) -> str:
        parts = [self.action_kind]
        if self.target_path:
            parts.append(self.target_path)
        if self.command_head:
            parts.append(self.command_head)
        return ":".join(parts)


@dataclass(frozen=True)
class GraphectoryGraph:
    nodes: frozenset[ActionNode]
    edges: frozenset[tuple[ActionNode, ActionNode]]
    step_walk: tuple[ActionNode, ...]


@dataclass(frozen=True)
class GraphectoryStats:
    nc: int
    tec: int
    lc: int


def _signature(step: StepRecord) -> ActionNode:
    path = (step.target_path or "").lstrip("./")
    tokens = step.command_text.split()
    head = tokens[0].lower() if tokens else ""
    return ActionNode(action_kind=step.action_kind.value,
                      target_path=path, command_head=head)


def build_graphectory(traj: TrajectoryRecord) -> GraphectoryGraph:
    if not traj.steps:
        raise EmptyTrajectoryError(f"trajectory {traj.trajectory_id!r} is empty")
    walk = tuple(_signature(step) for step in traj.steps)
    edges = {(walk[i], walk[i + 1]) for i in range(len(walk) - 1)}
    return GraphectoryGraph(nodes=frozenset(walk),
                            edges=frozenset(edges),
                            step_walk=walk)


def graphectory_stats(g: GraphectoryGraph) -> GraphectoryStats:
    visited: set[ActionNode] = set()
    loops = 0
    for node in g.step_walk:
        if node in visited:
            loops += 1
        visited.add(node)
    return GraphectoryStats(nc=len(g.nodes), tec=len(g.edges), lc=loops)


def export_graph(g: GraphectoryGraph) -> str:
    """Plain-text export: node list then ordered edge list."""
    labels = {node: node.label() for node in g.nodes}
    lines = ["# nodes"]
    lines.extend(sorted(labels.values()))
    lines.append("# edges")
    lines.extend(sorted(f"{labels[a]} -> {labels[b]}" for a, b in g.edges))
    return "\n".join(lines) + "\n"
