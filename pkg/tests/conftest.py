from __future__ import annotations

import pytest

from transformometer import IURecord, Store
from transformometer.golden import CASES


@pytest.fixture
def store_path(tmp_path):
    return tmp_path / "tom.store"


@pytest.fixture
def golden_store_path(store_path):
    """A store holding the three worked-example IUs, each scored once."""
    with Store.create(store_path) as store:
        for case in CASES:
            store.upsert_iu(
                IURecord(id=case.iu_id, name=case.name, description=case.description)
            )
            store.append_revision(case.iu_id, case.card, note="initial assessment")
    return store_path


@pytest.fixture
def fixture_dir(tmp_path):
    """Description fixtures for the golden IUs, keyed by title slug."""
    directory = tmp_path / "fixtures"
    directory.mkdir()
    for case in CASES:
        (directory / f"{case.iu_id}.txt").write_text(
            case.description + "\n", encoding="utf-8"
        )
    return directory
