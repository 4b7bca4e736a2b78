"""Request and response models for the HTTP surface.

Numeric inputs that may exceed word size travel as decimal strings
(coefficients, rationals like "3/4"); primes, genera and counters are
plain ints.  Polynomial and series coefficient lists are ascending in
the variable unless a field says otherwise.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from .serialize import SCHEMA


class ModelRequest(BaseModel):
    prime: int
    genus: int
    f: list[str] = Field(description="coefficients of monic f, highest degree first")
    depth_guard: Optional[int] = None


class ModelResponse(BaseModel):
    schema_id: str = Field(default=SCHEMA, serialization_alias="schema")
    command: str = "model"
    result: dict


class ExpectMcRequest(BaseModel):
    prime: int
    genus: int
    trials: int
    seed: int = 0
    depth_guard: int = 12
    digit_budget: Optional[int] = None
    threads: int = 1
    keep_trials: bool = False


class ExpectExactRequest(BaseModel):
    prime: int
    genus: int = 1
    k: int


class ExpectCasesRequest(BaseModel):
    prime: int
    genus: int = 1
    trials: int
    seed: int = 0


class ExpectX0Request(BaseModel):
    prime: int
    genus: int = 1
    trials: int
    seed: int = 0
    depth_guard: int = 12


class ExpectResponse(BaseModel):
    schema_id: str = Field(default=SCHEMA, serialization_alias="schema")
    command: str
    result: dict


class CurveSpec(BaseModel):
    """A curve either as shorthand text or as explicit coefficient lists.

    The shorthand covers forms like "y2+y=x7+x+1"; q and r are ascending
    coefficient lists of the y^2 + q(x) y = r(x) form; f is the ascending
    list for y^2 = f(x) at odd primes.
    """

    curve: Optional[str] = None
    q: Optional[list[str]] = None
    r: Optional[list[str]] = None
    f: Optional[list[str]] = None


class RhologRequest(CurveSpec):
    genus: Optional[int] = None
    prime: int = 2
    truncation: Optional[int] = None
    precision: Optional[int] = None
    include_certificates: bool = False


class DisksRequest(CurveSpec):
    genus: Optional[int] = None
    prime: int = 2
    truncation: Optional[int] = None


class P1ImageRequest(BaseModel):
    prime: int
    components: list[list[str]] = Field(
        description="one ascending rational-coefficient list per coordinate"
    )
    domain: Literal["P1", "Zp", "pZp"] = "P1"
    max_depth: Optional[int] = None


class SeriesImageRequest(BaseModel):
    prime: int
    components: list[list[str]] = Field(
        description="ascending coefficients of the series vector l"
    )
    precision: int = 12
    truncation: Optional[int] = None


class NewtonRequest(BaseModel):
    prime: int
    components: list[list[str]]
    truncation: Optional[int] = None


class WprepRequest(BaseModel):
    prime: int
    coefficients: list[str]
    precision: int = 8
    truncation: Optional[int] = None


class BoundsRequest(BaseModel):
    genus: int
    prime: Optional[int] = None
    disks: Optional[int] = None
    zero_budget: Optional[int] = None  # the N of the partition maximum
    image_size: Optional[int] = None
    refined: bool = False


class HeightRequest(BaseModel):
    coeffs: list[str] = Field(description="a_1 ... a_{2g+1}")


class GenericResponse(BaseModel):
    schema_id: str = Field(default=SCHEMA, serialization_alias="schema")
    command: str
    result: dict
