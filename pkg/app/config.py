"""Application configuration using Pydantic Settings."""

from functools import lru_cache

from pydantic import Field, model_validator
from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
    TomlConfigSettingsSource,
)


class Settings(BaseSettings):
    """Numeric defaults and service settings.

    Values come from constructor keywords or from ``conelie.toml`` in the
    working directory. Environment variables are deliberately not consulted.
    """

    model_config = SettingsConfigDict(
        toml_file="conelie.toml",
        case_sensitive=False,
        extra="ignore",
    )

    # Application
    app_name: str = "ConeLie Extremals"
    log_level: str = "INFO"
    debug: bool = False

    # Server
    host: str = "127.0.0.1"
    port: int = 8000

    # Tolerances
    membership_tol: float = Field(1e-9, gt=0)
    causal_tol: float = Field(1e-7, gt=0)
    hamiltonian_tol: float = Field(1e-6, gt=0)
    hamiltonian_reject_tol: float = Field(1e-4, gt=0)
    annihilator_tol: float = Field(1e-10, gt=0)

    # Dual-function oracle
    dual_grid_resolution: int = Field(10_000, ge=16)
    dual_refine_tol: float = Field(1e-10, gt=0)
    dual_oracle_attempts: int = Field(3, ge=1)
    maximizer_tol: float = Field(1e-8, gt=0)

    # Integrator
    switch_bisections: int = Field(4, ge=0)
    step_rejection_attempts: int = Field(4, ge=1)
    max_relative_substep: float = Field(0.05, gt=0, le=1)
    max_substeps: int = Field(20_000, ge=1)

    # Runs
    sweep_workers: int = Field(4, ge=1)
    output_dir: str = "out"
    random_seed: int = 20240531

    @property
    def min_substep_fraction(self) -> float:
        """Smallest sub-step, as a fraction of dt, before a branch is declared stalled."""
        return 2.0 ** -40

    @model_validator(mode="after")
    def _check_tolerances(self) -> "Settings":
        if self.hamiltonian_tol > self.hamiltonian_reject_tol:
            raise ValueError("hamiltonian_tol must not exceed hamiltonian_reject_tol")
        return self

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        return (init_settings, TomlConfigSettingsSource(settings_cls))


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
