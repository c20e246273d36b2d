from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cpc import samples
from cpc.ingest import from_flat_csv
from cpc.layout import Canvas, ExpansionState


@pytest.fixture(scope="session")
def demo():
    return samples.demo_dataset()


@pytest.fixture(scope="session")
def chatbot():
    return samples.chatbot_dataset()


@pytest.fixture(scope="session")
def cars():
    return from_flat_csv(samples.cars_csv(), samples.CARS_KINDS)


@pytest.fixture(scope="session")
def demo_expansion(demo):
    return ExpansionState.of(
        demo.schema, ["Axis_2/Option_A", "Axis_2/Option_B", "Axis_3/Enabled"]
    )


@pytest.fixture
def canvas():
    return Canvas(1200.0, 640.0, 40.0)
