"""HTTP service exposing scenario evaluation, nonclassical volume, negativity
reports, and the figure registry.

The CLI talks to this app in-process by default, so every run goes through
the same request/response models whether local or remote.
"""

from __future__ import annotations

import io

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .fixtures import ScenarioConfig, ScenarioError
from .figures import build_figure, figure_ids, figure_info
from .measures import QuadratureSpec
from .qd_eval import QDKind
from .runner import (
    NumericalError,
    RunManifest,
    header_lines,
    run_eval,
    run_negativity,
    run_volume,
    scenario_hash,
    write_csv,
)

__all__ = ["create_app"]


class ScenarioModel(BaseModel):
    """Mirror of the scenario file schema, inline over HTTP."""

    state: dict
    channel: dict = Field(default_factory=lambda: {"kind": "none"})
    angles: dict = Field(default_factory=dict)
    times: dict | list = Field(default_factory=dict)
    quadrature: dict = Field(default_factory=dict)

    def to_config(self) -> ScenarioConfig:
        return ScenarioConfig.from_mapping(self.model_dump())


class RunRequest(BaseModel):
    scenario: ScenarioModel
    strict: bool = False
    threads: int = 1
    trajectory_csv: str | None = None
    gamma_table_csv: str | None = None


class NegativityRequest(RunRequest):
    kind: str = "W"
    t: float | None = None


class CsvResponse(BaseModel):
    scenario: str
    provenance: str
    columns: list[str]
    csv: str


class FigureRequest(BaseModel):
    strict: bool = False
    threads: int = 1
    trajectory_csv: str | None = None
    gamma_table_csv: str | None = None


class FigureResponse(BaseModel):
    figure_id: str
    provenance: str
    files: dict[str, str]
    manifest: dict


def _manifest(req: RunRequest) -> RunManifest:
    try:
        return RunManifest(
            scenario=req.scenario.to_config(),
            quad=QuadratureSpec(),
            threads=req.threads,
            strict=req.strict,
            trajectory_csv=req.trajectory_csv,
            gamma_table_csv=req.gamma_table_csv,
        )
    except ScenarioError as exc:
        raise HTTPException(status_code=422, detail=f"config: {exc}") from exc


def _provenance(m: RunManifest) -> str:
    kind = m.scenario.channel_kind
    if kind == "injected" or m.trajectory_csv or m.gamma_table_csv:
        return "injected"
    if kind == "qnd-2qubit":
        return "approximation"
    return "exact"


def _csv_payload(m: RunManifest, columns, rows) -> CsvResponse:
    buf = io.StringIO()
    provenance = _provenance(m)
    write_csv(buf, header_lines(m, provenance), columns, rows)
    return CsvResponse(
        scenario=scenario_hash(m), provenance=provenance,
        columns=columns, csv=buf.getvalue(),
    )


def create_app() -> FastAPI:
    app = FastAPI(title="spinqd", version=__version__)

    @app.exception_handler(ScenarioError)
    async def _scenario_error(request, exc):  # noqa: ANN001
        raise HTTPException(status_code=422, detail=f"config: {exc}")

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/figures")
    def figures() -> list[dict]:
        return [figure_info(fid) for fid in figure_ids()]

    @app.post("/eval", response_model=CsvResponse)
    def eval_endpoint(req: RunRequest) -> CsvResponse:
        m = _manifest(req)
        try:
            columns, rows = run_eval(m)
        except ScenarioError as exc:
            raise HTTPException(status_code=422, detail=f"config: {exc}") from exc
        except NumericalError as exc:
            raise HTTPException(status_code=500, detail=f"numerical: {exc}") from exc
        return _csv_payload(m, columns, rows)

    @app.post("/volume", response_model=CsvResponse)
    def volume_endpoint(req: RunRequest) -> CsvResponse:
        m = _manifest(req)
        try:
            columns, rows = run_volume(m)
        except ScenarioError as exc:
            raise HTTPException(status_code=422, detail=f"config: {exc}") from exc
        except NumericalError as exc:
            raise HTTPException(status_code=500, detail=f"numerical: {exc}") from exc
        return _csv_payload(m, columns, rows)

    @app.post("/negativity")
    def negativity_endpoint(req: NegativityRequest) -> dict:
        m = _manifest(req)
        try:
            kind = QDKind(req.kind)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=f"config: {exc}") from exc
        try:
            return run_negativity(m, kind, req.t)
        except ScenarioError as exc:
            raise HTTPException(status_code=422, detail=f"config: {exc}") from exc
        except NumericalError as exc:
            raise HTTPException(status_code=500, detail=f"numerical: {exc}") from exc

    @app.post("/figure/{figure_id}", response_model=FigureResponse)
    def figure_endpoint(figure_id: str, req: FigureRequest) -> FigureResponse:
        try:
            result = build_figure(
                figure_id,
                strict=req.strict,
                threads=req.threads,
                trajectory_csv=req.trajectory_csv,
                gamma_table_csv=req.gamma_table_csv,
            )
        except ScenarioError as exc:
            raise HTTPException(status_code=422, detail=f"config: {exc}") from exc
        except (NumericalError, ArithmeticError) as exc:
            raise HTTPException(status_code=500, detail=f"numerical: {exc}") from exc
        return FigureResponse(
            figure_id=result.figure_id,
            provenance=result.provenance,
            files=result.files,
            manifest=result.manifest,
        )

    return app
