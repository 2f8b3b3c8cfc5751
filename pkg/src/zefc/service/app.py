"""FastAPI application exposing the analysis operations.

Run with `uvicorn zefc.service.app:app`.  All endpoints are POST with a JSON
body carrying the instance (and, where relevant, the scheme) inline, so the
service holds no state between requests.
"""
from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import CapExceededError, InstanceFormatError, VerificationError
from . import handlers, schemas

app = FastAPI(
    title="zefc",
    description=(
        "Zero-error function computation over a relay: support graphs, "
        "chromatic and graph entropies, rate-region bounds, and scheme "
        "verification/simulation."
    ),
    version="0.1.0",
)


@app.exception_handler(InstanceFormatError)
async def _validation_error(_: Request, exc: InstanceFormatError) -> JSONResponse:
    return JSONResponse(
        status_code=400,
        content=schemas.ErrorResponse(error="validation", detail=str(exc)).model_dump(),
    )


@app.exception_handler(VerificationError)
async def _verification_error(_: Request, exc: VerificationError) -> JSONResponse:
    return JSONResponse(
        status_code=409,
        content=schemas.ErrorResponse(error="verification", detail=str(exc)).model_dump(),
    )


@app.exception_handler(CapExceededError)
async def _cap_error(_: Request, exc: CapExceededError) -> JSONResponse:
    return JSONResponse(
        status_code=422,
        content=schemas.ErrorResponse(error="cap_exceeded", detail=str(exc)).model_dump(),
    )


@app.get("/health")
def health() -> dict[str, str]:
    return {"status": "ok"}


@app.post("/graphs", response_model=schemas.GraphsResponse)
def graphs_endpoint(req: schemas.GraphsRequest) -> schemas.GraphsResponse:
    return handlers.graphs_report(req)


@app.post("/entropy", response_model=schemas.EntropyResponse, response_model_exclude_none=True)
def entropy_endpoint(req: schemas.EntropyRequest) -> schemas.EntropyResponse:
    return handlers.entropy_report(req)


@app.post("/bounds", response_model=schemas.BoundsResponse)
def bounds_endpoint(req: schemas.BoundsRequest) -> schemas.BoundsResponse:
    return handlers.bounds_report(req)


@app.post("/region", response_model=schemas.RegionResponse)
def region_endpoint(req: schemas.RegionRequest) -> schemas.RegionResponse:
    return handlers.region_report(req)


@app.post("/verify", response_model=schemas.VerifyResponse, response_model_exclude_none=True)
def verify_endpoint(req: schemas.VerifyRequest) -> schemas.VerifyResponse:
    return handlers.verify_report(req)


@app.post("/simulate", response_model=schemas.SimulateResponse, response_model_exclude_none=True)
def simulate_endpoint(req: schemas.SimulateRequest) -> schemas.SimulateResponse:
    return handlers.simulate_report(req)


@app.post("/check-relay", response_model=schemas.RelayResponse)
def relay_endpoint(req: schemas.RelayRequest) -> schemas.RelayResponse:
    return handlers.relay_report(req)
