import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from monocert.catalog import CaseSpec, load_catalog
from monocert.cones import Cone
from monocert.matrices import Matrix5


@pytest.fixture(scope="session")
def catalog() -> list[CaseSpec]:
    return load_catalog()


@pytest.fixture(scope="session")
def catalog_by_id(catalog) -> dict[str, CaseSpec]:
    return {case.id: case for case in catalog}


@lru_cache(maxsize=None)
def _case_setup_cached(case_id: str):
    cases = load_catalog()
    case = next(c for c in cases if c.id == case_id)
    a, b, t = case.generators()
    f = case.certificate_cone() if case.has_certificate else None
    return case, a, b, t, f


@pytest.fixture(scope="session")
def case_setup():
    """(case, A, B, T, F) for a case id, cached across the whole session."""
    return _case_setup_cached
