"""Protocol definitions for service layer interfaces.

These protocols define the contracts the HTTP routes depend on, enabling
dependency injection and easier testing through substitute implementations.
"""

from typing import TYPE_CHECKING, Protocol

if TYPE_CHECKING:
    from app.scenarios.registry import Scenario


class ScenarioSourceProtocol(Protocol):
    """Protocol for resolving scenario names.

    Defines the contract for scenario lookup, abstracting whether scenarios
    come from the built-in registry or elsewhere.
    """

    def names(self) -> list[str]:
        """List the resolvable scenario names.

        Returns:
            Scenario names in registry order
        """
        ...

    def get(self, name: str, n: int | None = None) -> "Scenario":
        """Resolve a scenario by name.

        Args:
            name: Scenario name
            n: Dimension parameter for minkowski_1n

        Returns:
            The scenario

        Raises:
            UnknownScenarioError: If the name is not known
        """
        ...
