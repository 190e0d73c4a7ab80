from __future__ import annotations

import json
import random
import re

import pytest

from transformometer import (
    CRITERIA,
    InvalidScoreCardError,
    IURecord,
    ScoreCard,
    Store,
    slugify,
)
from transformometer.golden import WHEEL
from transformometer.registry import (
    CorruptStoreError,
    InvalidRecordError,
    StoreLockHeldError,
    UnknownIUError,
    utc_now,
)


def card_from(levels):
    return ScoreCard.from_levels(dict(zip(CRITERIA, levels)))


def query_snapshot(store: Store) -> str:
    """Every query surface serialized to one canonical JSON string."""
    return json.dumps(
        {
            "ius": [iu.to_wire() for iu in store.ius()],
            "histories": {
                iu.id: [rev.to_wire() for rev in store.history(iu.id)]
                for iu in store.ius()
            },
            "rank": store.rank(),
        },
        sort_keys=True,
    )


# -- helpers reused by the acceptance suite --------------------------------


def run_randomized_ops(store: Store, rng: random.Random, n_ops: int) -> None:
    """Random upserts and appends; checks the append-only prefix after each."""
    histories: dict[str, list[int]] = {}
    for op_no in range(n_ops):
        choice = rng.random()
        known = sorted(histories)
        if choice < 0.3 or not known:
            iu_id = f"iu-{rng.randrange(40)}"
            store.upsert_iu(
                IURecord(
                    id=iu_id,
                    name=f"IU {iu_id}",
                    description=rng.choice(["", f"description {op_no}"]),
                    tags=frozenset(rng.sample(["ai-related", "retired", "tool"], k=rng.randrange(3))),
                )
            )
            histories.setdefault(iu_id, [])
        else:
            iu_id = rng.choice(known)
            levels = [rng.randint(1, 5) for _ in range(6)]
            store.append_revision(iu_id, card_from(levels), note=f"op {op_no}")
            histories[iu_id].append(sum(levels))
        # append-only: earlier history is always a prefix of current history
        for known_id, raw_sums in histories.items():
            current = [rev.composite.raw_sum for rev in store.history(known_id)]
            assert current == raw_sums
            revision_nos = [rev.revision_no for rev in store.history(known_id)]
            assert revision_nos == list(range(1, len(raw_sums) + 1))


# -- identifiers and timestamps --------------------------------------------


@pytest.mark.parametrize(
    "text,expected",
    [
        ("World Wide Web", "world-wide-web"),
        ("The Wheel!", "the-wheel"),
        ("  Café -- au  lait ", "cafe-au-lait"),
        ("already-a-slug", "already-a-slug"),
    ],
)
def test_slugify(text, expected):
    assert slugify(text) == expected


def test_utc_now_format():
    assert re.fullmatch(r"\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}Z", utc_now())


def test_iu_record_validation():
    assert IURecord(id="wheel", name="The Wheel").validate() == []
    violations = IURecord(id="The Wheel!", name="").validate()
    assert any("slug" in v for v in violations)
    assert any("name" in v for v in violations)
    assert IURecord(id="x", name="X", description_source="scraped").validate() != []


# -- upsert -----------------------------------------------------------------


def test_upsert_insert_and_update(store_path):
    with Store.create(store_path) as store:
        first = store.upsert_iu(IURecord(id="wheel", name="The Wheel"))
        assert first.created_at
        assert store.history("wheel") == []

        store.append_revision("wheel", WHEEL.card, note="initial")
        updated = store.upsert_iu(
            IURecord(id="wheel", name="The Wheel", description="round thing")
        )
        assert updated.description == "round thing"
        assert updated.created_at == first.created_at
        assert len(store.history("wheel")) == 1  # history untouched


def test_upsert_rejects_invalid_record(store_path):
    with Store.create(store_path) as store:
        with pytest.raises(InvalidRecordError) as exc_info:
            store.upsert_iu(IURecord(id="The Wheel!", name="The Wheel"))
        assert any("slug" in v for v in exc_info.value.violations)


# -- revisions ----------------------------------------------------------------


def test_append_revision_numbers_and_composites(store_path):
    with Store.create(store_path) as store:
        store.upsert_iu(IURecord(id="wheel", name="The Wheel"))
        first = store.append_revision("wheel", WHEEL.card, note="initial")
        assert (first.revision_no, first.composite.value) == (1, 60)
        second = store.append_revision("wheel", card_from([2, 4, 5, 2, 3, 3]))
        assert (second.revision_no, second.composite.value) == (2, 63)
        assert store.latest_score("wheel").revision_no == 2


def test_append_revision_unknown_iu(store_path):
    with Store.create(store_path) as store:
        with pytest.raises(UnknownIUError):
            store.append_revision("zeppelin", WHEEL.card)


def test_append_revision_invalid_card(store_path):
    with Store.create(store_path) as store:
        store.upsert_iu(IURecord(id="wheel", name="The Wheel"))
        with pytest.raises(InvalidScoreCardError):
            store.append_revision("wheel", ScoreCard(entries=WHEEL.card.entries[:3]))
        assert store.history("wheel") == []  # failed append wrote nothing


def test_latest_and_history(store_path):
    with Store.create(store_path) as store:
        store.upsert_iu(IURecord(id="wheel", name="The Wheel"))
        assert store.latest_score("wheel") is None
        assert store.history("wheel") == []
        with pytest.raises(UnknownIUError):
            store.latest_score("missing")
        with pytest.raises(UnknownIUError):
            store.history("missing")

        for levels in ([1] * 6, [2] * 6, [3] * 6):
            store.append_revision("wheel", card_from(levels))
        assert store.latest_score("wheel").revision_no == 3
        assert [r.composite.value for r in store.history("wheel")] == [20, 40, 60]


# -- rank ---------------------------------------------------------------------


def test_rank_golden_order(golden_store_path):
    with Store(golden_store_path, writable=False) as store:
        assert store.rank() == [
            ("world-wide-web", 70),
            ("communism", 63),
            ("wheel", 60),
        ]


def test_rank_tie_break_ascending_id(store_path):
    with Store.create(store_path) as store:
        for iu_id in ("wheel", "abacus"):
            store.upsert_iu(IURecord(id=iu_id, name=iu_id.title()))
            store.append_revision(iu_id, WHEEL.card)
        assert store.rank() == [("abacus", 60), ("wheel", 60)]


def test_rank_empty_store_and_unscored(store_path):
    with Store.create(store_path) as store:
        assert store.rank() == []
        store.upsert_iu(IURecord(id="wheel", name="The Wheel"))
        assert store.rank() == []  # unscored IUs are excluded


# -- durability and the file format --------------------------------------------


def test_round_trip_snapshot_identical(golden_store_path):
    with Store(golden_store_path, writable=False) as store:
        before = query_snapshot(store)
    with Store(golden_store_path, writable=True) as store:
        assert query_snapshot(store) == before


def test_store_file_schema(golden_store_path):
    lines = [
        json.loads(line)
        for line in golden_store_path.read_text(encoding="utf-8").splitlines()
    ]
    ius = [r for r in lines if r["kind"] == "iu"]
    revisions = [r for r in lines if r["kind"] == "revision"]
    assert {r["id"] for r in ius} == {"wheel", "world-wide-web", "communism"}
    assert set(ius[0]) == {
        "kind", "id", "name", "description", "description_source", "created_at", "tags",
    }
    assert set(revisions[0]) == {
        "kind", "iu_id", "revision_no", "scores", "composite", "raw_sum",
        "recorded_at", "note",
    }
    assert set(revisions[0]["scores"]) == {c.value for c in CRITERIA}


def test_randomized_ops_and_reopen(store_path):
    rng = random.Random(2218)
    with Store.create(store_path) as store:
        run_randomized_ops(store, rng, n_ops=120)
        before = query_snapshot(store)
    with Store(store_path, writable=False) as store:
        assert query_snapshot(store) == before


# -- corruption handling --------------------------------------------------------


def tamper_last_revision(path, mutate):
    lines = path.read_text(encoding="utf-8").splitlines()
    record = json.loads(lines[-1])
    assert record["kind"] == "revision"
    mutate(record)
    lines[-1] = json.dumps(record, ensure_ascii=False)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def test_load_rejects_tampered_composite(golden_store_path):
    tamper_last_revision(golden_store_path, lambda r: r.update(composite=99))
    with pytest.raises(CorruptStoreError, match="does not match recomputed"):
        Store(golden_store_path, writable=False)


def test_load_rejects_gap_in_revision_numbers(golden_store_path):
    tamper_last_revision(golden_store_path, lambda r: r.update(revision_no=7))
    with pytest.raises(CorruptStoreError, match="contiguous"):
        Store(golden_store_path, writable=False)


def test_load_rejects_revision_for_unknown_iu(golden_store_path):
    tamper_last_revision(golden_store_path, lambda r: r.update(iu_id="ghost"))
    with pytest.raises(CorruptStoreError, match="unknown IU"):
        Store(golden_store_path, writable=False)


def test_load_rejects_garbage_line(golden_store_path):
    with open(golden_store_path, "a", encoding="utf-8") as fh:
        fh.write("not json at all\n")
    with pytest.raises(CorruptStoreError, match="unparseable"):
        Store(golden_store_path, writable=False)


def test_load_rejects_unknown_kind(golden_store_path):
    with open(golden_store_path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps({"kind": "mystery"}) + "\n")
    with pytest.raises(CorruptStoreError, match="unknown record kind"):
        Store(golden_store_path, writable=False)


def test_torn_trailing_write_is_dropped(golden_store_path):
    with Store(golden_store_path, writable=False) as store:
        before = query_snapshot(store)
    with open(golden_store_path, "a", encoding="utf-8") as fh:
        fh.write('{"kind": "revision", "iu_id": "wheel", "revi')  # no newline
    # readers ignore the torn tail; a writer truncates it and can append
    with Store(golden_store_path, writable=False) as store:
        assert query_snapshot(store) == before
    with Store(golden_store_path, writable=True) as store:
        assert query_snapshot(store) == before
        store.append_revision("wheel", WHEEL.card, note="after recovery")
    with Store(golden_store_path, writable=False) as store:
        assert store.latest_score("wheel").note == "after recovery"


# -- locking ----------------------------------------------------------------------


def test_second_writer_is_locked_out(golden_store_path):
    with Store(golden_store_path, writable=True):
        with pytest.raises(StoreLockHeldError):
            Store(golden_store_path, writable=True)
        # readers are always allowed
        with Store(golden_store_path, writable=False) as reader:
            assert len(reader.ius()) == 3
    # lock released on close
    Store(golden_store_path, writable=True).close()


def test_reader_requires_existing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        Store(tmp_path / "missing.store", writable=False)
