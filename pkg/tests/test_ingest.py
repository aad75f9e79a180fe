import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlikit.ingest import DatasetFormat, IngestError, read_dataset, write_dataset
from nlikit.records import Label, NliExample


def _write_lines(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


class TestGeneric:
    def test_round_trip_identity(self, tmp_path):
        examples = [
            NliExample(id="a", premise="P one", hypothesis="H one", gold=Label.ENTAILMENT, source="x"),
            NliExample(id="b", premise="P two", hypothesis="H two"),
            NliExample(id="c", premise="Ünïcode • premise", hypothesis='quotes " and \\ slashes', gold=Label.NEUTRALITY),
        ]
        path = tmp_path / "data.jsonl"
        assert write_dataset(examples, path) == 3
        loaded, report = read_dataset(path, DatasetFormat.GENERIC)
        assert loaded == examples
        assert report.read == 3 and report.emitted == 3
        assert report.reconciles()

    def test_empty_write(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        assert write_dataset([], path) == 0
        assert path.read_text() == ""
        loaded, report = read_dataset(path)
        assert loaded == [] and report.read == 0

    def test_missing_id_synthesized_from_position(self, tmp_path):
        path = tmp_path / "noid.jsonl"
        _write_lines(path, [json.dumps({"premise": "A", "hypothesis": "B"})])
        loaded, _ = read_dataset(path)
        assert loaded[0].id == "noid.jsonl:1"

    def test_unlabeled_rows_are_emitted(self, tmp_path):
        path = tmp_path / "u.jsonl"
        _write_lines(path, [json.dumps({"id": "1", "premise": "A", "hypothesis": "B"})])
        loaded, report = read_dataset(path)
        assert loaded[0].gold is None
        assert report.skipped_unlabeled == 0

    def test_malformed_counted_not_fatal(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        _write_lines(
            path,
            [
                json.dumps({"id": "1", "premise": "A", "hypothesis": "B", "label": 0}),
                "{not json",
                json.dumps({"id": "2", "premise": "", "hypothesis": "B"}),
                json.dumps({"id": "3", "premise": "A", "hypothesis": "B", "label": 9}),
                json.dumps({"id": "4", "premise": "A", "hypothesis": "B", "label": 2}),
            ],
        )
        loaded, report = read_dataset(path)
        assert [e.id for e in loaded] == ["1", "4"]
        assert report.skipped_malformed == 3
        assert report.reconciles()

    def test_order_preserved_no_duplicates(self, tmp_path):
        examples = [NliExample(id=f"e{i}", premise=f"P{i}", hypothesis=f"H{i}") for i in range(50)]
        path = tmp_path / "order.jsonl"
        write_dataset(examples, path)
        loaded, _ = read_dataset(path)
        assert [e.id for e in loaded] == [f"e{i}" for i in range(50)]


class TestSnliStyle:
    def test_field_map(self, tmp_path):
        path = tmp_path / "snli.jsonl"
        _write_lines(
            path,
            [json.dumps({"sentence1": "A", "sentence2": "B", "gold_label": "entailment"})],
        )
        loaded, _ = read_dataset(path, "snli_style")
        assert loaded[0].premise == "A"
        assert loaded[0].hypothesis == "B"
        assert loaded[0].gold == Label.ENTAILMENT

    def test_pair_id_used_when_present(self, tmp_path):
        path = tmp_path / "snli.jsonl"
        _write_lines(
            path,
            [json.dumps({"pairID": "p77", "sentence1": "A", "sentence2": "B", "gold_label": "neutral"})],
        )
        loaded, _ = read_dataset(path, "snli_style")
        assert loaded[0].id == "p77"

    def test_dash_rows_skipped_unlabeled(self, tmp_path):
        path = tmp_path / "snli.jsonl"
        _write_lines(
            path,
            [
                json.dumps({"sentence1": "A", "sentence2": "B", "gold_label": "-"}),
                json.dumps({"sentence1": "C", "sentence2": "D", "gold_label": "contradiction"}),
            ],
        )
        loaded, report = read_dataset(path, "snli_style")
        assert len(loaded) == 1 and loaded[0].gold == Label.CONTRADICTION
        assert report.skipped_unlabeled == 1
        assert report.reconciles()


class TestAnliStyle:
    def test_field_map_and_short_codes(self, tmp_path):
        path = tmp_path / "anli.jsonl"
        _write_lines(
            path,
            [
                json.dumps({"uid": "u1", "context": "A", "hypothesis": "B", "label": "n"}),
                json.dumps({"context": "C", "hypothesis": "D", "label": "e"}),
                json.dumps({"context": "E", "hypothesis": "F", "label": "c"}),
            ],
        )
        loaded, _ = read_dataset(path, "anli_style")
        assert [e.gold for e in loaded] == [Label.NEUTRALITY, Label.ENTAILMENT, Label.CONTRADICTION]
        assert loaded[0].id == "u1"
        assert loaded[0].premise == "A"


class TestTsvPair:
    def test_three_columns(self, tmp_path):
        path = tmp_path / "pairs.tsv"
        _write_lines(path, ["A\tB\tentailment", "C\tD\tcontradiction"])
        loaded, report = read_dataset(path, "tsv_pair")
        assert [e.gold for e in loaded] == [Label.ENTAILMENT, Label.CONTRADICTION]
        assert not report.binary_labels

    def test_header_flag(self, tmp_path):
        path = tmp_path / "pairs.tsv"
        _write_lines(path, ["premise\thypothesis\tlabel", "A\tB\te"])
        loaded, report = read_dataset(path, "tsv_pair", tsv_header=True)
        assert len(loaded) == 1 and report.read == 1

    def test_hans_non_entailment_stored_as_neutrality(self, tmp_path):
        path = tmp_path / "hans.tsv"
        _write_lines(path, ["A\tB\tnon-entailment", "C\tD\tentailment"])
        loaded, report = read_dataset(path, "tsv_pair")
        assert loaded[0].gold == Label.NEUTRALITY
        assert report.binary_labels

    def test_wrong_column_count_is_malformed(self, tmp_path):
        path = tmp_path / "bad.tsv"
        _write_lines(path, ["A\tB", "A\tB\te\textra", "C\tD\tn"])
        loaded, report = read_dataset(path, "tsv_pair")
        assert len(loaded) == 1
        assert report.skipped_malformed == 2


class TestErrors:
    def test_missing_file(self, tmp_path):
        with pytest.raises(IngestError, match="cannot read"):
            read_dataset(tmp_path / "nope.jsonl")

    def test_unknown_format(self, tmp_path):
        path = tmp_path / "x.jsonl"
        path.write_text("")
        with pytest.raises(IngestError, match="unknown dataset format"):
            read_dataset(path, "parquet")


# Text without control characters; JSON escaping covers the rest.
_text = st.text(
    alphabet=st.characters(blacklist_categories=("Cs", "Cc")), min_size=1, max_size=40
).filter(lambda s: s.strip())


@settings(max_examples=50, deadline=None)
@given(
    st.lists(
        st.tuples(_text, _text, st.sampled_from([None, *list(Label)])),
        min_size=0,
        max_size=20,
    )
)
def test_round_trip_property(tmp_path_factory, rows):
    examples = [
        NliExample(id=f"id{i}", premise=p, hypothesis=h, gold=g)
        for i, (p, h, g) in enumerate(rows)
    ]
    path = tmp_path_factory.mktemp("rt") / "data.jsonl"
    write_dataset(examples, path)
    loaded, report = read_dataset(path)
    assert loaded == examples
    assert report.reconciles()
