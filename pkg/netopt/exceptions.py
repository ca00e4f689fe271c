from typing import List, Optional, Sequence, Tuple


class NetoptError(Exception):
    """Base class for every error raised by the library"""


class RoutingError(NetoptError):
    """A routing table cannot be propagated into flows"""


class CycleError(RoutingError):
    def __init__(self, destination: int, cycle: Sequence[int]):
        self.destination = destination
        self.cycle: Tuple[int, ...] = tuple(cycle)
        path = " -> ".join(str(node) for node in self.cycle + self.cycle[:1])
        super().__init__(f"routing toward {destination} never arrives: cycle {path}")


class DanglingRouteError(RoutingError):
    def __init__(self, node: int, destination: int):
        self.node = node
        self.destination = destination
        super().__init__(f"flow reaches node {node} with no decision toward {destination}")


class InvalidRoutingError(RoutingError):
    def __init__(self, violations: List["object"]):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations[:5])
        super().__init__(f"routing table has {len(self.violations)} violation(s): {lines}")


class UnservedArcError(NetoptError):
    def __init__(self, source: int, target: int):
        self.source = source
        self.target = target
        super().__init__(f"arc ({source},{target}) carries no service flow")


class InfeasibleError(NetoptError):
    """No routing table satisfies the constraints"""


class SearchSpaceTooLarge(NetoptError):
    def __init__(self, estimate: int, cap: int):
        self.estimate = estimate
        self.cap = cap
        super().__init__(f"exact search space estimate {estimate} exceeds cap {cap}")


class RepairFailure(NetoptError):
    def __init__(self, origin: int, dest: int):
        self.origin = origin
        self.dest = dest
        super().__init__(f"no candidate with an existing arc can serve ({origin},{dest})")


class ParseError(NetoptError):
    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        self.line = line
        self.field = field
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field {field}")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")


class InstanceValidationError(NetoptError):
    def __init__(self, violations: List["object"]):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"instance is invalid: {lines}")


class GenerationFailure(NetoptError):
    """The random generator could not produce a routable instance"""
