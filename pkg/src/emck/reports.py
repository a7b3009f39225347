"""Report value types returned by checkers and verifiers.

Reports are immutable, JSON-serializable, and deterministic: witnesses are
always the lexicographically first violation found (threshold, then event in
canonical enumeration order, then state order), so identical inputs produce
byte-identical serialized reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


def format_rational(q: Fraction) -> str:
    """Render a rational as 'p/q', or a bare integer when the denominator is 1."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Inverse of :func:`format_rational`. Rejects floats and decimals."""
    text = text.strip()
    if "." in text or "e" in text or "E" in text:
        raise ValueError(f"decimal notation is not accepted: {text!r}")
    return Fraction(text)


@dataclass(frozen=True)
class Witness:
    """One point of the quantified domain at which a claim fails.

    Fields that do not apply to a given check are None. ``other_state`` holds
    the second state of pairwise witnesses such as dominance failures.
    """

    state: str | None = None
    event: tuple[str, ...] | None = None
    threshold: Fraction | None = None
    other_state: str | None = None
    note: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "state": self.state,
            "event": list(self.event) if self.event is not None else None,
            "threshold": format_rational(self.threshold) if self.threshold is not None else None,
            "other_state": self.other_state,
            "note": self.note,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Witness":
        return cls(
            state=d.get("state"),
            event=tuple(d["event"]) if d.get("event") is not None else None,
            threshold=parse_rational(d["threshold"]) if d.get("threshold") is not None else None,
            other_state=d.get("other_state"),
            note=d.get("note", ""),
        )


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a single axiom or property check.

    ``scope`` describes the quantified domain that was exhausted, ``children``
    carry the sub-checks of compound checks (e.g. regularity).
    """

    name: str
    passed: bool
    witnesses: tuple[Witness, ...] = ()
    scope: str = ""
    children: tuple["CheckReport", ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "scope": self.scope,
            "children": [c.to_dict() for c in self.children],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "CheckReport":
        return cls(
            name=d["name"],
            passed=d["passed"],
            witnesses=tuple(Witness.from_dict(w) for w in d.get("witnesses", [])),
            scope=d.get("scope", ""),
            children=tuple(CheckReport.from_dict(c) for c in d.get("children", [])),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "CheckReport":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class HypothesisResult:
    """Named hypothesis of a theorem together with its re-verified verdict."""

    name: str
    holds: bool

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "holds": self.holds}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "HypothesisResult":
        return cls(name=d["name"], holds=d["holds"])


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of verifying a theorem statement on one model.

    For an iff-claim, ``lhs`` and ``rhs`` are the two sides evaluated
    independently and ``equivalent`` records whether they agree.  Claims that
    only assert conclusions under hypotheses leave ``lhs``/``equivalent`` as
    None and put the conclusion verdict in ``rhs`` (or in ``checks``).
    Multi-part statements carry one nested report per part.
    """

    claim: str
    lhs: bool | None = None
    rhs: bool | None = None
    equivalent: bool | None = None
    hypotheses: tuple[HypothesisResult, ...] = ()
    witnesses: tuple[Witness, ...] = ()
    parts: tuple["VerificationReport", ...] = ()
    checks: tuple[CheckReport, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def hypotheses_met(self) -> bool:
        return all(h.holds for h in self.hypotheses)

    @property
    def falsified(self) -> bool:
        """True when some asserted part of the claim fails on this model."""
        if self.equivalent is not None and not self.equivalent:
            return True
        if self.equivalent is None and self.lhs is not None and self.rhs is not None:
            # only the forward implication is asserted in this configuration
            if self.lhs and not self.rhs:
                return True
        if self.lhs is None and self.rhs is False:
            return True
        if any(p.hypotheses_met and p.falsified for p in self.parts):
            return True
        if any(not c.passed for c in self.checks):
            return True
        return False

    @property
    def status(self) -> str:
        if not self.hypotheses_met:
            return "hypothesis-not-met"
        return "falsified" if self.falsified else "verified"

    def to_dict(self) -> dict[str, Any]:
        return {
            "claim": self.claim,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "equivalent": self.equivalent,
            "hypotheses": [h.to_dict() for h in self.hypotheses],
            "witnesses": [w.to_dict() for w in self.witnesses],
            "parts": [p.to_dict() for p in self.parts],
            "checks": [c.to_dict() for c in self.checks],
            "notes": list(self.notes),
            "status": self.status,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "VerificationReport":
        return cls(
            claim=d["claim"],
            lhs=d.get("lhs"),
            rhs=d.get("rhs"),
            equivalent=d.get("equivalent"),
            hypotheses=tuple(HypothesisResult.from_dict(h) for h in d.get("hypotheses", [])),
            witnesses=tuple(Witness.from_dict(w) for w in d.get("witnesses", [])),
            parts=tuple(VerificationReport.from_dict(p) for p in d.get("parts", [])),
            checks=tuple(CheckReport.from_dict(c) for c in d.get("checks", [])),
            notes=tuple(d.get("notes", [])),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls.from_dict(json.loads(text))
