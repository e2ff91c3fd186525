"""
Dixmier-Moeglin verdicts for T = S[t, t^-1; sigma] and U = S[t; sigma].

Every verdict is the conclusion of a registered rule applied to facts read off
stored certificates; the rule trace of a report can be replayed against the
rule registry.
"""
import json
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from oredyn.automorphisms import Automorphism, MonomialAutomorphism
from oredyn.dynamics import (
    COUNTABLY_INFINITE,
    DENSE_ORBIT,
    FINITE,
    NO_DENSE_ORBIT,
    UNCOUNTABLE,
    OrbitClassification,
    classify_orbits,
)
from oredyn.exceptions import UnsupportedFamily
from oredyn.growth import FINITE as FINITE_GROWTH
from oredyn.growth import GrowthData, growth_data
from oredyn.ore import RINGS, T_RING, U_RING
from oredyn.registry import Registry

logger = logging.getLogger(__name__)

YES = "yes"
NO = "no"
UNKNOWN = "unknown"
HOLDS = "holds"
FAILS = "fails"

FIELD_HYPOTHESIS = (
    "Verdicts are asserted for the base change to an uncountable algebraically closed field of "
    "characteristic 0; good dense orbits and the DM-equivalence are insensitive to this extension, "
    "while every computation is carried out exactly over Q."
)

PRIMITIVE = "zero_primitive"
LOCALLY_CLOSED = "zero_locally_closed"
RATIONAL = "zero_rational"
DM = "dm_verdict"
VERDICT_FIELDS = (PRIMITIVE, LOCALLY_CLOSED, RATIONAL, DM)

rules = Registry("rule")

# Stable keys for the results rules are drawn from
REFERENCES = {
    "skew-laurent-primitivity": "T = S[t, t^-1; sigma] is primitive if and only if sigma has a dense orbit",
    "skew-polynomial-primitivity": "U = S[t; sigma] is primitive if and only if sigma is special",
    "height-one-primes": "(0) is locally closed if and only if there are finitely many height one primes; "
    "uncountably many height one primes exclude rationality",
    "invariant-functions-dense-orbit": "sigma has a dense orbit if and only if no power of sigma has a nonconstant "
    "invariant rational function",
    "finite-growth-dm": "finite growth type on a variety of dimension at most 2 in characteristic 0 gives the "
    "DM-equivalence",
    "dm-equivalence": "the DM-equivalence: locally closed, primitive and rational primes coincide",
    "known-result": "a registered result about a specific automorphism",
}


@dataclass(frozen=True)
class Rule:
    id: str
    reference: str
    citation: str
    field: str
    value: str
    requires: Tuple[Tuple[str, Tuple[str, ...]], ...]
    rings: Tuple[str, ...] = RINGS
    breaks: Optional[str] = None
    cited: bool = False

    @property
    def inputs(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.requires)

    def applies(self, ring: str, facts: Dict[str, str]) -> bool:
        if ring not in self.rings:
            return False
        return all(facts.get(name) in allowed for name, allowed in self.requires)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "reference": self.reference,
            "citation": self.citation,
            "field": self.field,
            "value": self.value,
            "requires": {name: list(allowed) for name, allowed in self.requires},
            "rings": list(self.rings),
        }


def rule(rule_id, reference, citation, field_name, value, rings=RINGS, breaks=None, cited=False, **requires) -> Rule:
    if reference not in REFERENCES:
        raise ValueError("Rule %s cites unknown reference %r" % (rule_id, reference))
    requires = tuple(
        (name, allowed if isinstance(allowed, tuple) else (allowed,)) for name, allowed in requires.items()
    )
    entry = Rule(rule_id, reference, citation, field_name, value, requires, tuple(rings), breaks, cited)
    rules.register(rule_id, entry)
    return entry


def rules_for(field_name: str) -> List[Rule]:
    return rules.filter(lambda entry: entry.field == field_name)


# Primitivity of (0)

rule(
    "T_DENSE_ORBIT_PRIMITIVE",
    "skew-laurent-primitivity",
    "Skew-Laurent primitivity: T is primitive if and only if (X, sigma) has a dense orbit",
    PRIMITIVE,
    YES,
    rings=(T_RING,),
    orbit_status=DENSE_ORBIT,
)
rule(
    "T_NO_DENSE_ORBIT",
    "skew-laurent-primitivity",
    "Skew-Laurent primitivity: T is primitive if and only if (X, sigma) has a dense orbit",
    PRIMITIVE,
    NO,
    rings=(T_RING,),
    orbit_status=NO_DENSE_ORBIT,
)
rule(
    "U_GOOD_DENSE_ORBITS_PRIMITIVE",
    "skew-polynomial-primitivity",
    "With good dense orbits, U is primitive if and only if sigma has a dense orbit (sigma is special)",
    PRIMITIVE,
    YES,
    rings=(U_RING,),
    good_dense_orbits=YES,
    orbit_status=DENSE_ORBIT,
)
rule(
    "U_GOOD_DENSE_ORBITS_NOT_PRIMITIVE",
    "skew-polynomial-primitivity",
    "With good dense orbits and no dense orbit, sigma is not special and U is not primitive",
    PRIMITIVE,
    NO,
    rings=(U_RING,),
    good_dense_orbits=YES,
    orbit_status=NO_DENSE_ORBIT,
)
rule(
    "CITED_NOT_PRIMITIVE",
    "known-result",
    "Known result: sigma is not special, so the ring is not primitive",
    PRIMITIVE,
    NO,
    cited=True,
    cited_primitive=NO,
)

# Local closedness of (0)

rule(
    "HEIGHT_ONE_FINITE",
    "height-one-primes",
    "Finitely many height one primes: (0) is locally closed, primitive and rational",
    LOCALLY_CLOSED,
    YES,
    max_irreducibles=FINITE,
)
rule(
    "HEIGHT_ONE_COUNTABLE",
    "height-one-primes",
    "Countably many maximal sigma-irreducible subsets give countably many height one primes: (0) is not locally closed",
    LOCALLY_CLOSED,
    NO,
    max_irreducibles=COUNTABLY_INFINITE,
)
rule(
    "HEIGHT_ONE_UNCOUNTABLE",
    "height-one-primes",
    "Uncountably many height one primes: (0) is not locally closed, not primitive and not rational",
    LOCALLY_CLOSED,
    NO,
    max_irreducibles=UNCOUNTABLE,
)

# Rationality of (0)

rule(
    "HEIGHT_ONE_UNCOUNTABLE_NOT_RATIONAL",
    "height-one-primes",
    "Uncountably many height one primes: a nonconstant invariant is central, (0) is not rational",
    RATIONAL,
    NO,
    max_irreducibles=UNCOUNTABLE,
)
rule(
    "HEIGHT_ONE_FINITE_RATIONAL",
    "height-one-primes",
    "Finitely many height one primes: (0) is locally closed, primitive and rational",
    RATIONAL,
    YES,
    max_irreducibles=FINITE,
)
rule(
    "DENSE_ORBIT_RATIONAL",
    "invariant-functions-dense-orbit",
    "A dense orbit leaves no nonconstant invariant rational function; T and U share their Goldie quotient ring",
    RATIONAL,
    YES,
    orbit_status=DENSE_ORBIT,
)

# The DM-equivalence

rule(
    "FINITE_GROWTH_DM",
    "finite-growth-dm",
    "In characteristic 0 with dim X <= 2, finite GK-dimension (finite growth type) gives the DM-equivalence",
    DM,
    HOLDS,
    growth_type=FINITE_GROWTH,
    dim_at_most_two=YES,
)
rule(
    "BREAK_PRIMITIVE_NOT_LOCALLY_CLOSED",
    "dm-equivalence",
    "The DM-equivalence requires locally closed, primitive and rational primes to coincide",
    DM,
    FAILS,
    breaks="primitive but not locally closed",
    zero_primitive=YES,
    zero_locally_closed=NO,
)
rule(
    "BREAK_RATIONAL_NOT_PRIMITIVE",
    "dm-equivalence",
    "The DM-equivalence requires locally closed, primitive and rational primes to coincide",
    DM,
    FAILS,
    breaks="rational but not primitive",
    zero_rational=YES,
    zero_primitive=NO,
)
rule(
    "BREAK_RATIONAL_NOT_LOCALLY_CLOSED",
    "dm-equivalence",
    "The DM-equivalence requires locally closed, primitive and rational primes to coincide",
    DM,
    FAILS,
    breaks="rational but not locally closed",
    zero_rational=YES,
    zero_locally_closed=NO,
)


# Known results


@dataclass(frozen=True)
class KnownResult:
    name: str
    citation: str
    verdicts: Dict[str, Dict[str, str]]
    dynamics: Dict[str, str] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "tag": "cited",
            "citation": self.citation,
            "verdicts": self.verdicts,
            "dynamics": self.dynamics,
        }


known_results = Registry("known result")


def describe(sigma: Automorphism) -> str:
    """
    The normalized description used as registry key.
    """
    return json.dumps(sigma.to_json(), sort_keys=True)


def register_known_result(sigma: Automorphism, result: KnownResult):
    known_results.register(describe(sigma), result)


register_known_result(
    MonomialAutomorphism.from_matrix([[2, 1], [1, 1]]),
    KnownResult(
        "lorenz",
        "Lorenz's counterexample: in T the prime (0) is primitive but not locally closed",
        {
            T_RING: {
                PRIMITIVE: YES,
                LOCALLY_CLOSED: NO,
                DM: FAILS,
                "dm_break": "primitive but not locally closed",
            },
        },
    ),
)
register_known_result(
    MonomialAutomorphism.from_matrix([[0, 1], [1, -1]]),
    KnownResult(
        "jordan",
        "Jordan's example sigma(u) = v, sigma(v) = uv^-1: sigma is not special, "
        "U is not primitive whereas T is primitive",
        {
            T_RING: {PRIMITIVE: YES, LOCALLY_CLOSED: NO, RATIONAL: YES, DM: FAILS},
            U_RING: {
                PRIMITIVE: NO,
                LOCALLY_CLOSED: NO,
                RATIONAL: YES,
                DM: FAILS,
                "dm_break": "rational but not primitive",
            },
        },
        {"periodic_curves": "none", "periodic_points": COUNTABLY_INFINITE},
    ),
)


def known_results_registry(sigma: Automorphism) -> dict:
    result = known_results.lookup(describe(sigma))
    return result.to_json() if result is not None else {}


# Reports


@dataclass(frozen=True)
class TraceEntry:
    rule: str
    citation: str
    inputs: Dict[str, str]
    conclusion: str
    reference: str = ""

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "reference": self.reference,
            "citation": self.citation,
            "inputs": self.inputs,
            "conclusion": self.conclusion,
        }


@dataclass
class DMReport:
    ring: str
    sigma: Automorphism
    growth: GrowthData
    orbit_class: OrbitClassification
    facts: Dict[str, str]
    zero_primitive: str = UNKNOWN
    zero_locally_closed: str = UNKNOWN
    zero_rational: str = UNKNOWN
    dm_verdict: str = UNKNOWN
    dm_break: Optional[str] = None
    reasons: Dict[str, str] = field(default_factory=dict)
    rule_trace: List[TraceEntry] = field(default_factory=list)
    cited: dict = field(default_factory=dict)
    alarms: List[str] = field(default_factory=list)
    header: str = FIELD_HYPOTHESIS

    @property
    def family(self) -> str:
        return self.sigma.family

    @property
    def growth_type(self) -> str:
        return self.growth.growth_type

    def verdict(self, field_name: str) -> str:
        return getattr(self, field_name)

    def to_json(self) -> dict:
        return {
            "header": self.header,
            "ring": self.ring,
            "family": self.family,
            "sigma": self.sigma.to_json(),
            "description": str(self.sigma),
            "growth_type": self.growth_type,
            "growth": self.growth.to_json(),
            "orbit_class": self.orbit_class.to_json(),
            "zero_primitive": self.zero_primitive,
            "zero_locally_closed": self.zero_locally_closed,
            "zero_rational": self.zero_rational,
            "dm_verdict": self.dm_verdict,
            "dm_break": self.dm_break,
            "reasons": self.reasons,
            "rule_trace": [entry.to_json() for entry in self.rule_trace],
            "cited": self.cited,
            "alarms": self.alarms,
        }


def _good_dense_orbits(growth: GrowthData, orbit_class: OrbitClassification, dimension: int) -> str:
    if orbit_class.max_irreducibles in (FINITE, UNCOUNTABLE):
        return YES
    if orbit_class.max_irreducibles == COUNTABLY_INFINITE:
        return NO
    if growth.growth_type == FINITE_GROWTH and dimension <= 2:
        return YES
    return UNKNOWN


def collect_facts(sigma: Automorphism, growth: GrowthData, orbit_class: OrbitClassification) -> Dict[str, str]:
    return {
        "growth_type": growth.growth_type,
        "orbit_status": orbit_class.status,
        "max_irreducibles": orbit_class.max_irreducibles,
        "dim_at_most_two": YES if sigma.arity <= 2 else NO,
        "good_dense_orbits": _good_dense_orbits(growth, orbit_class, sigma.arity),
    }


UNKNOWN_REASONS = {
    (PRIMITIVE, T_RING): "dense-orbit status is undecided",
    (PRIMITIVE, U_RING): "speciality is not decided by the available criteria",
    (LOCALLY_CLOSED, T_RING): "the cardinality of maximal sigma-irreducible subsets is undecided",
    (RATIONAL, T_RING): "no certificate for or against a nonconstant invariant rational function",
    (DM, T_RING): "no rule applies to the computed certificates",
}


def _apply(report: DMReport, field_name: str):
    for entry in rules_for(field_name):
        if entry.applies(report.ring, report.facts):
            setattr(report, field_name, entry.value)
            if entry.breaks:
                report.dm_break = entry.breaks
            conclusion = "%s=%s" % (field_name, entry.value)
            if entry.breaks:
                conclusion = "%s (%s)" % (conclusion, entry.breaks)
            report.rule_trace.append(
                TraceEntry(
                    entry.id,
                    entry.citation,
                    {name: report.facts[name] for name in entry.inputs},
                    conclusion,
                    entry.reference,
                )
            )
            logger.debug("Rule %s: %s", entry.id, conclusion)
            break
    else:
        reason = UNKNOWN_REASONS.get((field_name, report.ring)) or UNKNOWN_REASONS[(field_name, T_RING)]
        report.reasons[field_name] = reason
    if field_name in (PRIMITIVE, LOCALLY_CLOSED, RATIONAL):
        report.facts[field_name] = getattr(report, field_name)


def _check_against_cited(report: DMReport):
    overlay = report.cited.get("verdicts", {}).get(report.ring, {})
    for field_name, cited_value in overlay.items():
        computed = getattr(report, field_name)
        if computed in (UNKNOWN, None):
            continue
        if computed != cited_value:
            name = report.cited["name"]
            message = "%s: computed %s=%s contradicts cited %s" % (name, field_name, computed, cited_value)
            logger.warning("Consistency alarm for %s", message)
            report.alarms.append(message)


def analyze(sigma: Automorphism, ring: str) -> DMReport:
    if ring not in RINGS:
        raise UnsupportedFamily("Unknown ring %r" % (ring,))
    growth = growth_data(sigma)
    orbit_class = classify_orbits(sigma)
    facts = collect_facts(sigma, growth, orbit_class)
    cited = known_results_registry(sigma)
    cited_primitive = cited.get("verdicts", {}).get(ring, {}).get(PRIMITIVE)
    if cited_primitive:
        facts["cited_primitive"] = cited_primitive

    report = DMReport(ring, sigma, growth, orbit_class, facts, cited=cited)
    for field_name in VERDICT_FIELDS:
        _apply(report, field_name)
    _check_against_cited(report)
    return report


def analyze_T(sigma: Automorphism) -> DMReport:
    return analyze(sigma, T_RING)


def analyze_U(sigma: Automorphism) -> DMReport:
    return analyze(sigma, U_RING)


def replay_trace(report: DMReport) -> List[str]:
    """
    Re-check every trace entry against the rule registry and the report's facts.
    Returns the list of failures, empty when the trace replays.
    """
    failures = []
    traced = set()
    for entry in report.rule_trace:
        registered = rules.lookup(entry.rule)
        if registered is None:
            failures.append("%s is not a registered rule" % entry.rule)
            continue
        traced.add(registered.field)
        if entry.reference != registered.reference:
            cited = entry.reference or "nothing"
            failures.append("%s cites %s instead of %s" % (entry.rule, cited, registered.reference))
        if any(report.facts.get(name) != value for name, value in entry.inputs.items()):
            failures.append("%s used inputs that differ from the stored facts" % entry.rule)
        if not registered.applies(report.ring, entry.inputs):
            failures.append("%s preconditions are not met by its inputs" % entry.rule)
        if getattr(report, registered.field) != registered.value:
            failures.append("%s conclusion does not match %s" % (entry.rule, registered.field))
    for field_name in VERDICT_FIELDS:
        if getattr(report, field_name) != UNKNOWN and field_name not in traced:
            failures.append("%s has no rule trace entry" % field_name)
    return failures
