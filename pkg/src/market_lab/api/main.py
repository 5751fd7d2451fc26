from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from ..config.settings import get_lab_settings
from ..exceptions import (
    HistoryLimitInfeasibleError,
    InfeasibleHistoryError,
    ProbabilityZeroError,
    VanishingConeError,
)
from ..models.dsmc import DsmcParams
from ..models.market import MarketModel, PriceSeries
from ..models.prediction import LimitPrediction, Prediction
from ..services.circuit_compiler import compile_market
from ..services.dsmc import simulate_dsmc, summary_stats
from ..services.linear_bridge import market_to_system
from ..services.netlist import parse_netlist
from ..services.predictors import predict_exact, predict_limit_distribution
from ..services.verifier import verify_compilation
from ..utils.logging import get_market_lab_logger, setup_market_lab_logger
from .models.requests import (
    CircuitVerifyRequest,
    DsmcResponse,
    LimitPredictionRequest,
    MarketHistoryRequest,
    PricePoint,
    SystemResponse,
    VerificationResponse,
)

# Configure logging
setup_market_lab_logger(level=get_lab_settings().log_level)
logger = get_market_lab_logger("api")

app = FastAPI(title="market-lab")

INFEASIBLE_VERDICTS = (
    InfeasibleHistoryError,
    ProbabilityZeroError,
    HistoryLimitInfeasibleError,
    VanishingConeError,
)

# -- Exception Handlers --


@app.exception_handler(RequestValidationError)
async def request_validation_exception_handler(request: Request, exc: RequestValidationError) -> JSONResponse:
    logger.warning(f"Invalid request body: {exc}")
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.exception_handler(ValueError)
async def value_error_exception_handler(request: Request, exc: ValueError) -> JSONResponse:
    if isinstance(exc, INFEASIBLE_VERDICTS):
        logger.warning(f"Infeasible verdict: {exc}")
        return JSONResponse(status_code=422, content={"detail": str(exc), "verdict": type(exc).__name__})
    logger.warning(f"Validation error: {exc}")
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.exception_handler(Exception)
async def generic_exception_handler(request: Request, exc: Exception) -> JSONResponse:
    logger.error(f"Unhandled exception: {exc}", exc_info=True)
    return JSONResponse(status_code=500, content={"detail": str(exc)})


def _market_and_history(request: MarketHistoryRequest) -> tuple[MarketModel, PriceSeries]:
    market = request.market.to_market()
    history = PriceSeries(prices=tuple(request.prices), first_day=request.first_day)
    return market, history


# -- API Endpoints --


@app.get("/")
def health() -> dict:
    """Health check."""
    return {"status": "ok"}


@app.post("/dsmc/simulate", response_model=DsmcResponse)
def simulate(params: DsmcParams) -> DsmcResponse:
    """Run one DSMC market."""
    series = simulate_dsmc(params).series
    points = [
        PricePoint(day=series.first_day + offset, price=price) for offset, price in enumerate(series.prices)
    ]
    return DsmcResponse(series=points, stats=summary_stats(series))


@app.post("/systems/extract", response_model=SystemResponse)
def extract(request: MarketHistoryRequest) -> SystemResponse:
    """Extract the linear system of a market history."""
    system, provenance = market_to_system(*_market_and_history(request))
    return SystemResponse.from_system(system, provenance)


@app.post("/predictions/exact", response_model=Prediction)
def predict_exact_endpoint(request: MarketHistoryRequest) -> Prediction:
    """Exact next-day distribution."""
    return predict_exact(*_market_and_history(request))


@app.post("/predictions/limit", response_model=LimitPrediction)
def predict_limit_endpoint(request: LimitPredictionRequest) -> LimitPrediction:
    """Many-traders limit of the next-day distribution."""
    market, history = _market_and_history(request)
    return predict_limit_distribution(market, history, request.epsilon, request.eta, request.seed)


@app.post("/circuits/verify", response_model=VerificationResponse)
def verify_circuit(request: CircuitVerifyRequest) -> VerificationResponse:
    """Compile the circuits under the requested rule and verify the result."""
    c_out = parse_netlist(request.out)
    c_cond = parse_netlist(request.cond) if request.cond is not None else None
    cm = compile_market(c_out, c_cond, request.rule)
    report = verify_compilation(cm, c_out, c_cond)
    if report.probability_zero:
        raise ProbabilityZeroError("the condition circuit is unsatisfiable")
    return VerificationResponse(passed=report.passed, report=report.as_text(), p_up=report.predicted_p_up)
