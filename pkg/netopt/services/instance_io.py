"""JSON file formats for instances, routing tables, reports, solve results and generator specs.

Every document is an object with a ``kind`` discriminator, a ``schema_version`` and one
payload field. Output is indented, key order follows the model definitions and files end
with a newline, so serializing the same object twice yields identical bytes.
"""
import json
import logging
from typing import Any, Dict, Literal, Type, TypeVar

from pydantic import ValidationError

from netopt.config import SCHEMA_VERSION
from netopt.exceptions import InstanceValidationError, ParseError
from netopt.models import (
    DomainModel,
    EvaluationReport,
    GeneratorSpec,
    Instance,
    RoutingTable,
    SolveResult,
)
from netopt.services.validation import validate_instance

logger = logging.getLogger(__name__)

Envelope = TypeVar("Envelope", bound=DomainModel)


class FileEnvelope(DomainModel):
    schema_version: str = SCHEMA_VERSION

    class Config:
        json_encoders = {RoutingTable: RoutingTable.to_entries}


class InstanceFile(FileEnvelope):
    kind: Literal["instance"] = "instance"
    instance: Instance


class SolutionFile(FileEnvelope):
    kind: Literal["solution"] = "solution"
    routing: RoutingTable


class ReportFile(FileEnvelope):
    kind: Literal["report"] = "report"
    report: EvaluationReport


class ResultFile(FileEnvelope):
    kind: Literal["solve-result"] = "solve-result"
    result: SolveResult


class GeneratorSpecFile(FileEnvelope):
    kind: Literal["generator-spec"] = "generator-spec"
    spec: GeneratorSpec


def _dump(envelope: FileEnvelope, **kwargs) -> str:
    return envelope.json(indent=2, **kwargs) + "\n"


def _load(text: str) -> Dict[str, Any]:
    if not text.strip():
        raise ParseError("document is empty", line=1)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno) from e
    if not isinstance(data, dict):
        raise ParseError("document must be a JSON object", line=1)
    return data


def _parse(envelope_type: Type[Envelope], data: Dict[str, Any]) -> Envelope:
    try:
        envelope = envelope_type.parse_obj(data)
    except ValidationError as e:
        error = e.errors()[0]
        location = ".".join(str(part) for part in error["loc"])
        raise ParseError(error["msg"], field=location) from e
    if envelope.schema_version != SCHEMA_VERSION:
        raise ParseError(
            f"unsupported schema version {envelope.schema_version!r}, expected {SCHEMA_VERSION!r}",
            field="schema_version",
        )
    return envelope


def serialize_instance(instance: Instance) -> str:
    return _dump(InstanceFile(instance=instance))


def parse_instance(text: str) -> Instance:
    """Parse and validate an instance document.

    Raises ParseError for malformed or non-conforming documents and
    InstanceValidationError when the instance breaks a structural invariant.
    """
    instance = _parse(InstanceFile, _load(text)).instance
    violations = validate_instance(instance)
    if violations:
        raise InstanceValidationError(violations)
    logger.debug(
        "Parsed instance with %s nodes, %s arcs and %s demands",
        len(instance.nodes), len(instance.arcs), len(instance.demands),
    )
    return instance


def serialize_routing(routing: RoutingTable) -> str:
    return _dump(SolutionFile(routing=routing))


def parse_routing(text: str) -> RoutingTable:
    """Routing table from a solution document or from the routing inside a solve result"""
    data = _load(text)
    if data.get("kind") == "solve-result":
        return _parse(ResultFile, data).result.routing
    return _parse(SolutionFile, data).routing


def serialize_report(report: EvaluationReport) -> str:
    return _dump(ReportFile(report=report))


def parse_report(text: str) -> EvaluationReport:
    return _parse(ReportFile, _load(text)).report


def serialize_result(result: SolveResult) -> str:
    # Wall-clock time is left out so that repeated runs write identical files.
    return _dump(ResultFile(result=result), exclude={"result": {"trace": {"wall_time"}}})


def parse_result(text: str) -> SolveResult:
    return _parse(ResultFile, _load(text)).result


def serialize_generator_spec(spec: GeneratorSpec) -> str:
    return _dump(GeneratorSpecFile(spec=spec))


def parse_generator_spec(text: str) -> GeneratorSpec:
    return _parse(GeneratorSpecFile, _load(text)).spec
