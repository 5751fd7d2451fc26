"""
Brute-force verification of compiled markets.

For every input assignment r the verifier checks that the compiled history admits exactly
one column assignment extending r when the condition holds and none otherwise, that the
target day under that assignment moves up iff the output circuit is 1 on r, and finally
that the exact predictor's p_up equals the circuit statistics.
"""

from fractions import Fraction
from itertools import product

from market_lab.config.settings import LabSettings, get_lab_settings
from market_lab.exceptions import (
    EnumerationCapError,
    InfeasibleHistoryError,
    ProbabilityZeroError,
    VerificationError,
)
from market_lab.models.circuit import (
    AuditMode,
    CompiledMarket,
    NorCircuit,
    VerificationFailure,
    VerificationReport,
)
from market_lab.models.system import DayProvenance, LinearSystem
from market_lab.services.circuit_compiler import expected_extension
from market_lab.services.linear_bridge import market_to_system
from market_lab.services.netlist import eval_circuit
from market_lab.services.predictors import predict_exact
from market_lab.services.solutions import find_solutions, use_dense
from market_lab.utils.logging import get_market_lab_logger
from market_lab.utils.rational import sign

logger = get_market_lab_logger("services.verifier")

MAX_VERIFIED_INPUTS = 20


def first_violated_day(
    system: LinearSystem, provenance: DayProvenance, assignment: tuple[int, ...]
) -> int | None:
    """The earliest history day whose constraint row the assignment breaks."""
    violated: list[int] = []
    for index, row in enumerate(system.A):
        if sum(a * y for a, y in zip(row, assignment, strict=True)) <= 0:
            violated.append(provenance.day_of("A", index))
    for index, (row, rhs) in enumerate(zip(system.B, system.b, strict=True)):
        if sum(a * y for a, y in zip(row, assignment, strict=True)) != rhs:
            violated.append(provenance.day_of("B", index))
    return min(violated) if violated else None


def verify_compilation(
    cm: CompiledMarket,
    c_out: NorCircuit,
    c_cond: NorCircuit | None = None,
    settings: LabSettings | None = None,
) -> VerificationReport:
    """
    Check a compiled market against its circuits over all 2^n input assignments.

    The uniqueness audit enumerates all free columns densely when they are few enough
    (``exhaustive``) and otherwise runs the exact search (``search``); if the search budget
    runs out it only checks that the intended extension satisfies the history (``skipped``).

    Args:
        cm: Compiled market to check
        c_out: Output circuit it was compiled from
        c_cond: Condition circuit, if any
        settings: Enumeration caps (defaults to the cached lab settings)

    Returns:
        A report; an unsatisfiable condition is reported as probability zero

    Raises:
        ValueError: If the circuits do not match the market's input count or n is too large
    """
    settings = settings or get_lab_settings()
    n = cm.n_inputs
    if c_out.n != n or (c_cond is not None and c_cond.n != n):
        raise ValueError(f"compiled market has {n} inputs but the circuits disagree")
    if n > MAX_VERIFIED_INPUTS:
        raise ValueError(f"verification enumerates 2^n inputs; n={n} exceeds {MAX_VERIFIED_INPUTS}")

    try:
        system, provenance = market_to_system(cm.market, cm.history)
    except InfeasibleHistoryError as e:
        failure = VerificationFailure(check="history", message=e.reason, day=e.day)
        logger.error(f"Compiled history is infeasible on day {e.day}")
        return VerificationReport(n_inputs=n, failures=(failure,))

    input_columns = [cm.column_of(f"x{i}") for i in range(1, n + 1)]
    failures: list[VerificationFailure] = []
    audit: AuditMode = "exhaustive"
    conditioned = up = 0

    for bits in product((0, 1), repeat=n):
        fixed = dict(zip(input_columns, bits, strict=True))
        holds = c_cond is None or eval_circuit(c_cond, bits) == 1
        output = eval_circuit(c_out, bits)
        intended = expected_extension(cm, c_out, c_cond, bits)
        if holds:
            conditioned += 1
            up += output

        # Collect up to two consistent extensions of this input
        solutions: list[tuple[int, ...]] | None = None
        if audit != "skipped":
            if not use_dense(system, fixed, settings):
                audit = "search"
            try:
                solutions = find_solutions(system, fixed=fixed, limit=2, settings=settings)
            except EnumerationCapError:
                logger.warning("Search budget exhausted; checking intended extensions only")
                audit = "skipped"
        if solutions is None:
            if not holds:
                continue
            solutions = [intended] if system.is_satisfied_by(intended) else []

        # Inputs outside the condition must be ruled out by the history
        if not holds:
            if solutions:
                failures.append(
                    VerificationFailure(
                        check="uniqueness",
                        message="history is consistent with an input outside the condition",
                        inputs=bits,
                    )
                )
            continue

        if len(solutions) != 1:
            message = "more than one consistent assignment" if solutions else "no consistent assignment"
            failures.append(
                VerificationFailure(
                    check="uniqueness",
                    message=message,
                    inputs=bits,
                    day=first_violated_day(system, provenance, intended),
                )
            )
            continue

        # The target day must rise exactly when the circuit outputs 1
        moves_up = sign(sum(a * y for a, y in zip(system.c, solutions[0], strict=True))) > 0
        if moves_up != (output == 1):
            failures.append(
                VerificationFailure(
                    check="movement",
                    message=f"target day moves {'up' if moves_up else 'not up'} but the output is {output}",
                    inputs=bits,
                )
            )

    if conditioned == 0:
        logger.warning("Condition circuit is unsatisfiable: the compiled history has probability zero")
        return VerificationReport(n_inputs=n, audit=audit, probability_zero=True, failures=tuple(failures))

    expected = Fraction(up, conditioned)
    predicted: Fraction | None = None
    try:
        predicted = predict_exact(cm.market, cm.history, settings=settings).p_up
    except ProbabilityZeroError:
        failures.append(
            VerificationFailure(check="probability", message="predictor found no consistent population")
        )
    if predicted is not None and predicted != expected:
        failures.append(
            VerificationFailure(
                check="probability", message=f"predicted p_up {predicted}, circuits give {expected}"
            )
        )

    report = VerificationReport(
        n_inputs=n,
        conditioned_inputs=conditioned,
        up_inputs=up,
        audit=audit,
        expected_p_up=expected,
        predicted_p_up=predicted,
        failures=tuple(failures),
    )
    outcome = "passed" if report.passed else "failed"
    logger.info(f"Verification {outcome}: p_up {predicted} (expected {expected})")
    return report


def require_passing(report: VerificationReport) -> VerificationReport:
    """
    Return the report if every check passed.

    Raises:
        ProbabilityZeroError: If the condition circuit is unsatisfiable
        VerificationError: Naming the first failed check and its witness
    """
    if report.probability_zero:
        raise ProbabilityZeroError("the condition circuit is unsatisfiable")
    if report.failures:
        first = report.failures[0]
        witness = f" on inputs {''.join(map(str, first.inputs))}" if first.inputs is not None else ""
        raise VerificationError(
            f"{len(report.failures)} failed checks, first {first.check}{witness}: {first.message}"
        )
    return report
