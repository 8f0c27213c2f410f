from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Basic settings
    PROJECT_NAME: str = "respoles"
    LOG: str = "warn"

    # Special functions
    LAMBERT_MAX_ITER: int = 60
    LAMBERT_TOL: float = 1e-13
    JUMP_EXPONENT_LIMIT: float = 700.0

    # Dispersion / quadrature
    AXIS_EPSILON: float = 1e-12
    QUAD_TOL: float = 1e-10
    QUAD_WINDOW: float = 40.0
    QUAD_LIMIT: int = 400
    PAIRING_TOL: float = 1e-9

    # Root finding
    NEWTON_TOL: float = 1e-11
    NEWTON_MAX_ITER: int = 50
    POLE_RESIDUAL_MAX: float = 1e-9
    BOUNDARY_FLOOR: float = 1e-8
    REGION_EXPONENT_BUDGET: float = 600.0
    BOUNDARY_RETRIES: int = 5
    BOUNDARY_INFLATION: float = 0.01
    MAX_SUBDIVISION_DEPTH: int = 12
    DEDUP_RADIUS: float = 1e-8
    EDGE_INITIAL_POINTS: int = 64
    EDGE_MAX_POINTS: int = 1048576
    EDGE_SAMPLES_PER_WIDTH: float = 4.0
    SEED_INFLATION: float = 0.5
    LEADING_RE_MIN: float = -0.5

    # Stability
    BRANCH_EXHAUSTION: int = 30

    # Time domain defaults
    INSTABILITY_LIMIT: float = 1e12
    DEFAULT_NODES: int = 400
    DEFAULT_H: float = 50.0
    DEFAULT_DT_DIVISOR: int = 64
    DEFAULT_T: float = 40.0
    RECURRENCE_FRACTION: float = 0.8

    model_config = {
        "case_sensitive": True,
        "env_prefix": "RESPOLES_",
        "env_file": ".env",
        "extra": "ignore",
    }


settings = Settings()
