"""Three-valued decision results with evidence payloads.

Every decision procedure in the workbench returns a Verdict: Holds with a
certificate, Fails with a witness, or Unknown with the exhausted budget.
Exactly one payload is populated; this is the uniform honesty contract for
semi-decidable questions.
"""
from __future__ import annotations

from dataclasses import dataclass, field

HOLDS = "holds"
FAILS = "fails"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    status: str
    certificate: dict | None = None
    witness: dict | None = None
    budget_used: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status == HOLDS and (self.certificate is None or self.witness):
            raise ValueError("Holds carries a certificate and nothing else")
        if self.status == FAILS and (self.witness is None or self.certificate):
            raise ValueError("Fails carries a witness and nothing else")
        if self.status == UNKNOWN and (self.certificate or self.witness):
            raise ValueError("Unknown carries only the exhausted budget")

    @property
    def decisive(self) -> bool:
        return self.status in (HOLDS, FAILS)

    def holds(self) -> bool:
        return self.status == HOLDS

    def fails(self) -> bool:
        return self.status == FAILS

    def to_data(self) -> dict:
        return {
            "status": self.status,
            "certificate": self.certificate,
            "witness": self.witness,
            "budget_used": dict(self.budget_used),
        }

    def __repr__(self):
        if self.status == HOLDS:
            kind = (self.certificate or {}).get("kind", "?")
            return f"Holds({kind})"
        if self.status == FAILS:
            kind = (self.witness or {}).get("kind", "?")
            return f"Fails({kind})"
        return "Unknown"


def holds(certificate: dict, budget: dict | None = None) -> Verdict:
    return Verdict(HOLDS, certificate=certificate, budget_used=budget or {})


def fails(witness: dict, budget: dict | None = None) -> Verdict:
    return Verdict(FAILS, witness=witness, budget_used=budget or {})


def unknown(budget: dict) -> Verdict:
    return Verdict(UNKNOWN, budget_used=budget)


def conjunction(named: dict) -> Verdict:
    """All must hold; any failure fails; otherwise unknown.

    `named` maps labels to Verdicts; labels land in the evidence payload."""
    budget: dict = {}
    for v in named.values():
        budget.update(v.budget_used)
    for name, v in named.items():
        if v.fails():
            return fails({"kind": "component_failed", "component": name,
                          "component_witness": v.witness}, budget)
    if all(v.holds() for v in named.values()):
        return holds({"kind": "all_components_hold",
                      "components": sorted(named)}, budget)
    open_names = sorted(n for n, v in named.items() if not v.decisive)
    budget["undecided_components"] = open_names
    return unknown(budget)
