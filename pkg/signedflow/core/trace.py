"""
Construction Trace
Record of the cases taken and intermediate objects built by a construction
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List

logger = logging.getLogger("signedflow.trace")


def jsonable(value: Any) -> Any:
    """Convert sets, tuples, flows and nested traces into JSON-ready values"""
    from .certificates import flow_payload
    from .flows import FlowAssignment

    if isinstance(value, ConstructionTrace):
        return value.to_dict()
    if isinstance(value, FlowAssignment):
        return flow_payload(value)
    if isinstance(value, (set, frozenset)):
        return sorted(jsonable(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    return value


@dataclass
class ConstructionTrace:
    """Case labels in order, plus named intermediate objects"""

    cases: List[str] = field(default_factory=list)
    objects: Dict[str, Any] = field(default_factory=dict)

    def case(self, label: str) -> None:
        self.cases.append(label)
        logger.info(f"Construction case: {label}")

    def record(self, key: str, value: Any) -> None:
        self.objects[key] = jsonable(value)

    def to_dict(self) -> Dict[str, Any]:
        return {"cases": list(self.cases), "objects": dict(sorted(self.objects.items()))}
