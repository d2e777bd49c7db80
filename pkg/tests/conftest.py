"""Shared fixtures: the groups and train tracks in data/."""

from pathlib import Path

import pytest

from laminadesk.presentation import load_fibered, load_presentation
from laminadesk.traintrack import load_track

DATA = Path(__file__).parent.parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def genus2():
    return load_presentation(DATA / "genus2.txt")


@pytest.fixture(scope="session")
def free2():
    return load_presentation(DATA / "free2.txt")


@pytest.fixture(scope="session")
def flat():
    return load_presentation(DATA / "flat.txt")


@pytest.fixture(scope="session")
def trivial():
    return load_presentation(DATA / "trivial.txt")


@pytest.fixture(scope="session")
def fibered_pa():
    return load_fibered(DATA / "fibered_pa.txt")


@pytest.fixture(scope="session")
def fibered_handles():
    return load_fibered(DATA / "fibered_handles.txt")


@pytest.fixture(scope="session")
def fibered_id():
    return load_fibered(DATA / "fibered_id.txt")


@pytest.fixture(scope="session")
def flat_fibered():
    return load_fibered(DATA / "flat_fibered.txt")


@pytest.fixture(scope="session")
def handle_track():
    return load_track(DATA / "handle.track")


@pytest.fixture(scope="session")
def strip_track():
    return load_track(DATA / "strip.track")


@pytest.fixture(scope="session")
def annulus_track():
    return load_track(DATA / "annulus.track")


@pytest.fixture(scope="session")
def bigon_track():
    return load_track(DATA / "bigon.track")


@pytest.fixture(scope="session")
def heptagon():
    return load_presentation(DATA / "heptagon.txt")


@pytest.fixture(scope="session")
def detour_track():
    return load_track(DATA / "detour.track")


@pytest.fixture(scope="session")
def golden_track():
    return load_track(DATA / "golden.track")
