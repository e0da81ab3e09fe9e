"""Request and response models for the decision service."""

from typing import List, Literal, Optional

from pydantic import BaseModel, Field


class TreeAutomatonIn(BaseModel):
    automaton: str
    max_subset_states: int = Field(default=2**16, ge=1)


class ProfileIn(BaseModel):
    automaton: str
    upto: int = Field(ge=0)
    max_profile: int = Field(default=200, ge=0)


class EstimateIn(BaseModel):
    automaton: str
    size: int = Field(ge=0)
    trials: int = Field(ge=0)
    seed: int = Field(default=0, ge=0)
    dist: Literal["uniform", "bst"] = "uniform"
    jobs: int = Field(default=1, ge=1)
    max_size: int = Field(default=10**6, ge=0)


class SampleIn(BaseModel):
    alphabet: List[str]
    size: int = Field(ge=0)
    count: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0)
    dist: Literal["uniform", "bst"] = "uniform"
    max_size: int = Field(default=10**6, ge=0)


class DfaIn(BaseModel):
    dfa: str


class OmegaPairIn(BaseModel):
    u: str
    v: str


class OmegaIn(BaseModel):
    pairs: List[OmegaPairIn]
    max_subset_states: int = Field(default=2**16, ge=1)


class ValidateSpec(BaseModel):
    trials: int = Field(ge=1)
    horizon: int = Field(ge=0)
    seed: int = Field(default=0, ge=0)


class OmegaWitnessIn(OmegaIn):
    validate_spec: Optional[ValidateSpec] = None
    jobs: int = Field(default=1, ge=1)


class VerdictOut(BaseModel):
    kind: Literal["zero", "one", "intermediate"]
    witness: Optional[str] = None
    sink: Optional[List[str]] = None


class EstimateOut(BaseModel):
    trials: int
    successes: int
    point: float
    stderr: float


class SampleOut(BaseModel):
    trees: List[str]


class InfixCompleteOut(BaseModel):
    infix_complete: bool
    x: Optional[str] = None
    k: Optional[int] = None


class UniversalPrefixOut(BaseModel):
    x: str
    k: int
    target_class: List[str]


class TrapOut(BaseModel):
    v: str


class MeasureOut(BaseModel):
    kind: Literal["zero", "positive"]
    pair: Optional[int] = None
    x: Optional[str] = None


class WitnessValidationOut(BaseModel):
    trials: int
    successes: int
    point: float
    stderr: float
    horizon: int
    seed: int


class OmegaWitnessOut(BaseModel):
    kind: Literal["zero", "positive"]
    pair: Optional[int] = None
    x: Optional[str] = None
    u: Optional[str] = None
    w: Optional[str] = None
    marked: Optional[str] = None
    guarantee: Optional[str] = None
    validation: Optional[WitnessValidationOut] = None
