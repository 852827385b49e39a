"""Structural report on a scenario: algebra, cone, antinorm and distribution."""

import logging

from app.antinorms.analysis import boundary_linearity, check_axioms
from app.groups.reconstruction import contact_test
from app.lie.algebra import validate
from app.lie.schemas import ViolationReport
from app.scenarios.registry import Scenario
from app.scenarios.schemas import CheckReport

logger = logging.getLogger(__name__)


def check_scenario(scenario: Scenario, samples: int = 500, seed: int | None = None) -> CheckReport:
    """Run validate, check_axioms, salience, boundary_linearity and the contact test.

    Never raises for findings; the caller decides what a failed check means.
    """
    violations = [
        ViolationReport(kind=v.kind, indices=list(v.indices), residual=v.residual)
        for v in validate(scenario.algebra)
    ]
    salient = scenario.cone.is_salient()
    axioms = check_axioms(scenario.antinorm, samples=samples, seed=seed)

    messages = []
    witness = None
    if axioms.dual_is_antinorm:
        messages.append("dual is an antinorm")
    else:
        found = boundary_linearity(scenario.antinorm)
        if found is not None:
            witness = [float(x) for x in found]
            messages.append(f"dual is NOT an antinorm; boundary-linearity witness ({_fmt_vector(witness)})")
        else:
            messages.append("dual is NOT an antinorm; no boundary-linearity witness found")

    contact = None
    if scenario.dim == 3 and scenario.cone.span_dim == 2:
        contact = contact_test(scenario.algebra, scenario.cone.span_basis())
        messages.append("distribution contact" if contact else "distribution not contact")
    if violations:
        messages.append(f"algebra has {len(violations)} structure-constant violations")
    if not salient:
        messages.append("cone is not salient")
    if not axioms.axioms_hold:
        messages.append("antinorm axioms fail: " + "; ".join(axioms.violations))

    report = CheckReport(
        scenario=scenario.name,
        algebra_violations=violations,
        salient=salient,
        axioms=axioms,
        dual_is_antinorm=axioms.dual_is_antinorm,
        boundary_linearity_witness=witness,
        contact=contact,
        messages=messages,
    )
    logger.info("Checked %s: %s", scenario.name, "; ".join(messages))
    return report


def _fmt_vector(v: list[float]) -> str:
    return ",".join(format(x, "g") for x in v)
