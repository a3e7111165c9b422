from __future__ import annotations

import pytest

from narrative_frames.annotator import PhraseIndex
from narrative_frames.taxonomy import load_default_taxonomy


@pytest.fixture(scope="session")
def taxonomy():
    return load_default_taxonomy()


@pytest.fixture(scope="session")
def index(taxonomy):
    return PhraseIndex(taxonomy)
