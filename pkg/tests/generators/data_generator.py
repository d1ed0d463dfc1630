#!/usr/bin/env python3
"""
SignedFlow Instance Generator
Seeded random signed graphs with known witnesses, for property tests and fixture files
"""
import json
import os
import random
import sys
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

# Add project root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "../.."))

from signedflow.core.sgraph import SignedGraph, build_graph, switch_at  # noqa: E402

# =============================================================================
# Data Models
# =============================================================================


class InstanceKind(Enum):
    CONNECTED = "connected"
    HAMILTONIAN_CUBIC = "hamiltonian_cubic"
    SUPEREULERIAN = "supereulerian"


@dataclass
class GeneratedInstance:
    kind: InstanceKind
    graph: SignedGraph
    seed: int
    witness: List[int] = field(default_factory=list)
    switching: List[int] = field(default_factory=list)

    def to_dict(self) -> Dict[str, object]:
        return {
            "kind": self.kind.value,
            "seed": self.seed,
            "graph": self.graph.to_dict(),
            "witness": {"edges": sorted(self.witness)},
            "switching": sorted(self.switching),
        }


# =============================================================================
# Generator
# =============================================================================


class SignedGraphGenerator:
    """Random signed multigraphs; every instance is reproducible from its seed"""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.rng = random.Random(seed)

    def _sign(self, negative_ratio: float) -> int:
        return -1 if self.rng.random() < negative_ratio else 1

    def _hide(self, g: SignedGraph, switch: bool) -> Tuple[SignedGraph, List[int]]:
        """Apply a random switching so witnesses are not simply the positive edges"""
        if not switch:
            return g, []
        U = [v for v in g.vertices if self.rng.random() < 0.5]
        return switch_at(g, U), U

    def connected(
        self, vertices: int = 6, extra_edges: int = 4, negative_ratio: float = 0.3
    ) -> GeneratedInstance:
        """Random spanning tree plus extra (possibly parallel) edges"""
        order = list(range(vertices))
        self.rng.shuffle(order)
        entries = []
        for i in range(1, vertices):
            u, v = order[self.rng.randrange(i)], order[i]
            entries.append((u, v, self._sign(negative_ratio)))
        for _ in range(extra_edges):
            u, v = self.rng.sample(range(vertices), 2)
            entries.append((u, v, self._sign(negative_ratio)))
        return GeneratedInstance(InstanceKind.CONNECTED, build_graph(vertices, entries), self.seed)

    def hamiltonian_cubic(
        self, vertices: int = 8, negative_chords: Optional[int] = None, switch: bool = True
    ) -> GeneratedInstance:
        """
        Positive Hamiltonian circuit 0..n-1 plus a random perfect matching of chords.

        The circuit stays balanced under the hiding switching; chords may be
        parallel to circuit edges.
        """
        if vertices < 4 or vertices % 2:
            raise ValueError("cubic instances need an even number of vertices >= 4")
        entries = [(i, (i + 1) % vertices, 1) for i in range(vertices)]
        order = list(range(vertices))
        self.rng.shuffle(order)
        chords = [(order[i], order[i + 1]) for i in range(0, vertices, 2)]
        count = len(chords)
        negatives = self.rng.randrange(count + 1) if negative_chords is None else negative_chords
        flipped = set(self.rng.sample(range(count), min(negatives, count)))
        entries += [(u, v, -1 if i in flipped else 1) for i, (u, v) in enumerate(chords)]
        g, U = self._hide(build_graph(vertices, entries), switch)
        return GeneratedInstance(
            InstanceKind.HAMILTONIAN_CUBIC, g, self.seed, list(range(vertices)), U
        )

    def supereulerian(
        self, vertices: int = 6, chords: int = 4, negative_ratio: float = 0.4, switch: bool = True
    ) -> GeneratedInstance:
        """Hamiltonian circuit 0..n-1 (the witness H1) plus random signed chords"""
        entries = [(i, (i + 1) % vertices, self._sign(negative_ratio)) for i in range(vertices)]
        for _ in range(chords):
            u, v = self.rng.sample(range(vertices), 2)
            entries.append((u, v, self._sign(negative_ratio)))
        g, U = self._hide(build_graph(vertices, entries), switch)
        return GeneratedInstance(
            InstanceKind.SUPEREULERIAN, g, self.seed, list(range(vertices)), U
        )


def generate_batch(
    kind: InstanceKind, count: int, seed: int = 0, **kwargs
) -> List[GeneratedInstance]:
    """One instance per seed in seed..seed+count-1"""
    batch = []
    for offset in range(count):
        generator = SignedGraphGenerator(seed + offset)
        batch.append(getattr(generator, kind.value)(**kwargs))
    return batch


# =============================================================================
# CLI Entry Point
# =============================================================================

if __name__ == "__main__":
    import argparse

    parser = argparse.ArgumentParser(description="SignedFlow Instance Generator")
    parser.add_argument(
        "--kind", choices=[k.value for k in InstanceKind], default="hamiltonian_cubic"
    )
    parser.add_argument("--count", type=int, default=10, help="Number of instances to generate")
    parser.add_argument("--seed", type=int, default=0, help="First seed")
    parser.add_argument("--vertices", type=int, default=8, help="Vertices per instance")

    args = parser.parse_args()

    kind = InstanceKind(args.kind)
    for instance in generate_batch(kind, args.count, args.seed, vertices=args.vertices):
        print(json.dumps(instance.to_dict(), sort_keys=True))
