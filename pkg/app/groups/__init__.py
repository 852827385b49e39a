"""Group model package initialization."""
