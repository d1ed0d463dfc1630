"""
Signed Flow - File Formats
Pydantic schemas for graph, witness, certificate, spec and template files
"""

from enum import Enum
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# ============================================================================
# GRAPHS AND WITNESSES
# ============================================================================


class EdgeRecord(BaseModel):
    """One edge of a graph file"""

    model_config = ConfigDict(extra="forbid")

    id: int = Field(..., ge=0)
    u: int = Field(..., ge=0)
    v: int = Field(..., ge=0)
    sign: int

    @field_validator("sign")
    @classmethod
    def validate_sign(cls, v: int) -> int:
        if v not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        return v


class GraphFile(BaseModel):
    """Canonical graph file: vertices 0..N-1, edge ids 0..|E|-1"""

    model_config = ConfigDict(extra="forbid")

    vertices: Union[int, List[int]]
    edges: List[EdgeRecord] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_ids(self) -> "GraphFile":
        ids = sorted(e.id for e in self.edges)
        if ids != list(range(len(ids))):
            raise ValueError("edge ids must be 0..|E|-1")
        if isinstance(self.vertices, list) and self.vertices != list(range(len(self.vertices))):
            raise ValueError("vertex ids must be 0..N-1")
        return self

    @property
    def vertex_count(self) -> int:
        return self.vertices if isinstance(self.vertices, int) else len(self.vertices)


class WitnessFile(BaseModel):
    """Edge set of a witness subgraph, or of a three-part decomposition"""

    model_config = ConfigDict(extra="forbid")

    edges: List[int] = Field(default_factory=list)
    parts: Optional[List[List[int]]] = None


# ============================================================================
# CERTIFICATES
# ============================================================================


class FlowCertificateFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    graph_sha: str
    mode: str = Field(..., pattern="^(int|mod)$")
    k: int = Field(..., ge=2)
    tau: Dict[str, Tuple[int, int]]
    f: Dict[str, int]


class CertificateFile(BaseModel):
    """Generic certificate envelope"""

    model_config = ConfigDict(extra="forbid")

    kind: str
    producer: str = "unknown"
    graph_sha: str
    payload: Dict[str, Any]
    extra: Dict[str, Any] = Field(default_factory=dict)


# ============================================================================
# SPECS
# ============================================================================


class LadderKindName(str, Enum):
    CIRCULAR = "circular"
    MOEBIUS = "moebius"


class LadderSpecFile(BaseModel):
    """Ladder spec; signs listed per part in canonical index order"""

    model_config = ConfigDict(extra="forbid")

    kind: LadderKindName
    n: int = Field(..., ge=1, le=512)
    rung: Optional[List[int]] = None
    x: Optional[List[int]] = None
    y: Optional[List[int]] = None


class CayleySpecFile(BaseModel):
    """Abelian group as cyclic orders, connection set, and negative edges by endpoint pair"""

    model_config = ConfigDict(extra="forbid")

    group: List[int] = Field(..., min_length=1)
    connection: List[List[int]]
    negative: List[Tuple[List[int], List[int]]] = Field(default_factory=list)

    @field_validator("group")
    @classmethod
    def validate_orders(cls, v: List[int]) -> List[int]:
        if any(n < 1 for n in v):
            raise ValueError("cyclic orders must be positive")
        return v


# ============================================================================
# TEMPLATE TABLES
# ============================================================================


class ArcRow(BaseModel):
    """Value along the Hamiltonian arc from tail to the next labelled vertex head"""

    model_config = ConfigDict(extra="forbid")

    tail: str
    head: str
    value: int


class ChordRow(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    ends: Tuple[str, str]
    tau: Tuple[int, int]
    value: int


class HamiltonianTemplate(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    k: int = Field(..., ge=2)
    cyclic_order: List[str] = Field(..., min_length=4, max_length=4)
    arcs: List[ArcRow]
    chords: List[ChordRow]


class LadderParts(BaseModel):
    model_config = ConfigDict(extra="forbid")

    rung: List[int]
    x: List[int]
    y: List[int]


class ExtenderRow(BaseModel):
    model_config = ConfigDict(extra="forbid")

    position: int = Field(..., ge=0)
    variant: int = Field(..., ge=1, le=2)


class LadderTemplate(BaseModel):
    """Known flow on a circular ladder; positive edges point from the canonical u end"""

    model_config = ConfigDict(extra="forbid")

    name: str
    kind: LadderKindName = LadderKindName.CIRCULAR
    n: int = Field(..., ge=1)
    k: int = Field(..., ge=2)
    signs: LadderParts
    values: LadderParts
    extender: Optional[ExtenderRow] = None

    @model_validator(mode="after")
    def check_lengths(self) -> "LadderTemplate":
        for table in (self.signs, self.values):
            if not len(table.rung) == len(table.x) == len(table.y) == self.n:
                raise ValueError(f"template {self.name}: every part needs {self.n} entries")
        return self


class TemplateFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    version: int = Field(..., ge=1)
    ladder: List[LadderTemplate] = Field(default_factory=list)
    hamiltonian: List[HamiltonianTemplate] = Field(default_factory=list)


# ============================================================================
# SWEEP REPORTS
# ============================================================================


class SweepRow(BaseModel):
    """One instance of a sweep report"""

    instance_id: str
    family: str
    negatives: int
    negative_parity: str
    admissible: bool
    constructed_k: Optional[int] = None
    oracle_phi: Optional[str] = None
    agreement: Optional[bool] = None
    status: str = "ok"
    detail: str = ""
