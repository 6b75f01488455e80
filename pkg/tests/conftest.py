import os

from dotenv import load_dotenv
from hypothesis import HealthCheck, settings

load_dotenv()

settings.register_profile(
    "dev",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
# Acceptance runs: many trials, reproducible across machines.
settings.register_profile(
    "acceptance",
    max_examples=1000,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.getenv("GENRED_HYPOTHESIS_PROFILE", "dev"))
