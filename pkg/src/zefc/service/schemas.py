"""Request/response models for the HTTP service and the CLI client.

The instance and scheme documents mirror the on-disk JSON formats; exact
validation (rational arithmetic, totality, prefix-freedom) happens in the
core package, so these models only shape the transport.
"""
from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class InstanceDoc(StrictModel):
    alphabet_x: list[str]
    alphabet_y: list[str]
    pmf: list[list[Union[str, int, float]]]
    f: list[list[Union[str, int, float, bool, None]]]


class EncoderEntry(StrictModel):
    block: list[str]
    color: int


class ThetaEntry(StrictModel):
    pair: list[int]
    color: int


class CodewordEntry(StrictModel):
    color: int
    word: str


class SchemeDoc(StrictModel):
    n: int
    enc_a: list[EncoderEntry]
    enc_b: list[EncoderEntry]
    theta: list[ThetaEntry]
    codes: Optional[dict[str, list[CodewordEntry]]] = None


class GraphDoc(StrictModel):
    name: str
    vertices: list[str]
    edges: list[list[str]]
    edge_list: str
    dot: str


class GraphsRequest(StrictModel):
    instance: InstanceDoc


class GraphsResponse(StrictModel):
    f_rook: GraphDoc
    confusability_x: GraphDoc
    confusability_y: GraphDoc
    support_size: int


class SolverOptions(StrictModel):
    tol: float = 1e-10
    max_iter: int = 10_000


class EntropyRequest(StrictModel):
    instance: InstanceDoc
    kind: Literal["chromatic", "graph"]
    target: Literal["joint", "x", "y"] = "joint"
    n: int = 1
    cap_vertices: int = 16
    solver: SolverOptions = Field(default_factory=SolverOptions)
    record_trace: bool = False


class WitnessDoc(StrictModel):
    vertices: list[str]
    colors: list[int]


class EntropyResponse(StrictModel):
    kind: str
    target: str
    n: int
    bits_per_symbol: float
    witness: Optional[WitnessDoc] = None
    converged: Optional[bool] = None
    iterations: Optional[int] = None
    trace: Optional[list[float]] = None


class RateTripleDoc(StrictModel):
    r_a: float
    r_b: float
    r_c: float


class BoundsRequest(StrictModel):
    instance: InstanceDoc
    solver: SolverOptions = Field(default_factory=SolverOptions)


class BoundsResponse(StrictModel):
    corner_i1: RateTripleDoc
    corner_i2: RateTripleDoc
    corner_o: RateTripleDoc
    tight: bool


class RegionRequest(StrictModel):
    instance: InstanceDoc
    ns: list[int] = Field(default_factory=lambda: [1])
    solver: SolverOptions = Field(default_factory=SolverOptions)


class RegionResponse(StrictModel):
    corner_i1: RateTripleDoc
    corner_i2: RateTripleDoc
    corner_o: RateTripleDoc
    tight: bool
    frontiers: dict[str, list[RateTripleDoc]]


class VerifyRequest(StrictModel):
    instance: InstanceDoc
    scheme: SchemeDoc


class VerifyResponse(StrictModel):
    zero_error: bool
    violation: Optional[list[list[int]]] = None
    detail: str = ""


class SimulateRequest(StrictModel):
    instance: InstanceDoc
    scheme: SchemeDoc
    blocks: int = 100_000
    seed: int = 0


class SimulateResponse(StrictModel):
    zero_error: bool
    exact: RateTripleDoc
    exact_fractions: list[str]
    simulated: Optional[RateTripleDoc] = None
    stderr: Optional[RateTripleDoc] = None
    blocks: Optional[int] = None
    seed: Optional[int] = None
    relay_computable: bool
    relay_residual_bits: float


class RelayRequest(StrictModel):
    instance: InstanceDoc
    scheme: SchemeDoc


class RelayResponse(StrictModel):
    computable: bool
    residual_bits: float
    ambiguous_pairs: list[list[int]]


class ErrorResponse(StrictModel):
    error: Literal["validation", "verification", "cap_exceeded", "internal"]
    detail: str
