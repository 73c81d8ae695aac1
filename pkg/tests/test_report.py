"""Report records, the shipped JSON schema and CSV round trips."""
import json
from pathlib import Path

import jsonschema
import pytest
from hypothesis import given
from hypothesis import strategies as st

from steinhaus import __version__
from steinhaus.report import (
    SCHEMA,
    computation_record,
    document,
    dumps,
    from_csv,
    schema_text,
    to_csv,
    validate,
    verification_record,
)
from steinhaus.verifier import LemmaId, verify_extended_concavity, verify_holder_chain, verify_L_bound

SCHEMA_FILE = Path(__file__).resolve().parents[1] / "docs" / "report_schema.json"


def test_shipped_schema_is_current():
    assert SCHEMA_FILE.read_text(encoding="utf-8") == schema_text()
    jsonschema.Draft202012Validator.check_schema(SCHEMA)


def test_verification_records_validate():
    records = [
        verification_record(verify_L_bound()),
        verification_record(verify_extended_concavity(0.5, trials=1000)),
        verification_record(verify_holder_chain(0.5, [2.0, 2.5, 3.0])),
    ]
    doc = json.loads(dumps(records))
    validate(doc)
    assert [r["provenance"] for r in doc["records"]] == ["paper", "paper", "derived"]
    assert all(r["version"] == __version__ for r in doc["records"])


def test_computation_record_validates_and_rejects_bad_provenance():
    rec = computation_record("constant.Cp", {"p": [0.5]}, {"Cp": [1.4]})
    validate(document([rec]))
    assert rec["verdict"] == "computed" and rec["margins"] == []
    with pytest.raises(ValueError):
        computation_record("x", {}, {}, provenance="folklore")


def test_invalid_documents_are_rejected():
    rec = computation_record("c", {}, {})
    del rec["verdict"]
    with pytest.raises(jsonschema.ValidationError):
        validate(document([rec]))
    with pytest.raises(jsonschema.ValidationError):
        validate({"schema": "steinhaus-report", "version": "1.0.0"})


def test_dumps_is_deterministic_and_strict():
    rec = verification_record(verify_L_bound())
    assert dumps([rec]) == dumps([rec])
    assert dumps([rec]).endswith("\n")
    with pytest.raises(ValueError):
        dumps([computation_record("x", {}, {"v": float("nan")})])
    assert LemmaId.L_BOUND.value in dumps([rec])


cells = st.one_of(
    st.integers(-(10**9), 10**9),
    st.floats(allow_nan=False, allow_infinity=False),
    st.booleans(),
    st.text(alphabet="abcxyz_-", min_size=1, max_size=6),
)


@given(st.lists(st.lists(cells, min_size=3, max_size=3), max_size=10))
def test_csv_round_trip(rows):
    header = ["a", "b", "c"]
    text = to_csv(header, rows)
    assert "\r" not in text and text.endswith("\n")
    h, back = from_csv(text)
    assert h == header and back == rows


def test_csv_row_length_checked():
    with pytest.raises(ValueError):
        to_csv(["a", "b"], [[1]])
