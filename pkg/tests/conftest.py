import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

ROOT = Path(__file__).resolve().parent.parent

settings.register_profile(
    "ci",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def fixture_csv() -> Path:
    return ROOT / "data" / "churn_fixture.csv"


def kaggle_csv() -> Path | None:
    """Path to the real 10000-row dataset when available, else None."""
    env = os.environ.get("EDA_CHURN_CSV")
    if env and Path(env).exists():
        return Path(env)
    candidate = ROOT / "data" / "Churn_Modelling.csv"
    return candidate if candidate.exists() else None
