"""FastAPI application exposing the certification operations over HTTP."""

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import __version__
from . import handlers, schemas
from .handlers import ServiceError


def create_app():
    app = FastAPI(title="specloc",
                  description="Matrix spectrum localization certificates via "
                              "Lyapunov-type equations",
                  version=__version__)

    @app.exception_handler(ServiceError)
    async def service_error_handler(_request, exc: ServiceError):
        return JSONResponse(status_code=exc.http_status, content=exc.payload())

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/spectrum", response_model=schemas.SpectrumResponse)
    def spectrum(req: schemas.SpectrumRequest):
        return handlers.handle_spectrum(req)

    @app.post("/certify", response_model=schemas.CertifyResponse)
    def certify(req: schemas.CertifyRequest):
        return handlers.handle_certify(req)

    @app.post("/perturb", response_model=schemas.PerturbResponse)
    def perturb(req: schemas.PerturbRequest):
        return handlers.handle_perturb(req)

    @app.post("/solve", response_model=schemas.SolveResponse)
    def solve(req: schemas.SolveRequest):
        return handlers.handle_solve(req)

    return app


app = create_app()
