from pydantic_settings import BaseSettings
from pydantic import ConfigDict


class Settings(BaseSettings):
    # Exhaustive search: maximum nodes visited per search
    budget: int = 1_000_000

    # Maximum simplices per level of nerve and product constructions
    product_capacity: int = 10_000

    # Default truncation bound for nerves
    truncation: int = 3

    # Learning
    epsilon: float = 0.1
    delta: float = 1e-3

    # Numeric comparisons and fixed-point iteration
    tolerance: float = 1e-9

    # Stochastic commands refuse to run without an explicit seed
    seed: int | None = None

    log_level: str = "WARNING"

    model_config = ConfigDict(env_prefix="GAIA_KIT_", env_file=".env")


settings = Settings()
