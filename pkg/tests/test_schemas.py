import io
import json

import pandas as pd
import pytest

from actions import LieAlgebraData
from errors import InvariantError, IoError, ParseError
from ratfun import VarTable, gq, parse_scalar
from reports import Report
from schemas import (
    CHECK_COLUMNS,
    BracketEntry,
    LieModel,
    LinearPayload,
    OutputFormat,
    StructureKind,
    StructureModel,
    TermModel,
    emit,
    form_from_terms,
    parse_constant,
    parse_input,
    parse_matrix,
    parse_vectors,
    report_document,
    resolve_input,
)
from split_linalg import EXACT, gcs_check


class TestScalars:
    def test_constants(self):
        assert parse_constant("1/2i") == gq(0, (1, 2))
        assert parse_constant(-3) == gq(-3)

    @pytest.mark.parametrize("text", ["z0", "w", "1/0"])
    def test_non_constants(self, text):
        with pytest.raises(ParseError):
            parse_constant(text)

    def test_shapes(self):
        with pytest.raises(ParseError):
            parse_matrix([[1, 0], [0]], EXACT)
        with pytest.raises(ParseError):
            parse_vectors([[1, 0, 0]], 4, EXACT)


class TestForms:
    table = VarTable(2, aux=())

    def test_terms(self):
        form = form_from_terms(self.table, [TermModel(coeff="z0", mono=["dz0", "dzb1"])])
        assert form.coeff((0, 3)) == parse_scalar(self.table, "z0")
        flipped = form_from_terms(self.table, [TermModel(coeff="z0", mono=["dzb1", "dz0"])])
        assert flipped == -form

    def test_repeated_generator(self):
        with pytest.raises(InvariantError):
            form_from_terms(self.table, [TermModel(mono=["dz0", "dz0"])])

    @pytest.mark.parametrize("name", ["z0", "dq", "du"])
    def test_unknown_generator(self, name):
        with pytest.raises(ParseError):
            form_from_terms(self.table, [TermModel(mono=[name])])


class TestStructures:
    def test_symplectic_and_complex(self):
        matrix = [[0, 1], [-1, 0]]
        assert gcs_check(StructureModel(kind=StructureKind.SYMPLECTIC, matrix=matrix).build(EXACT)).type == 0
        assert gcs_check(StructureModel(kind=StructureKind.COMPLEX, matrix=matrix).build(EXACT)).type == 1

    def test_b_transform_keeps_the_type(self):
        model = StructureModel(kind=StructureKind.COMPLEX, matrix=[[0, -1], [1, 0]], b=[[0, "1/2"], ["-1/2", 0]])
        info = gcs_check(model.build(EXACT))
        assert info.type == 1 and info.transverse

    def test_lie_brackets_are_antisymmetric(self):
        g = LieModel(dim=2, brackets=[BracketEntry(i=1, j=0, value={1: -1})]).build()
        assert g.c == LieAlgebraData.from_pairs(2, {(0, 1): {1: 1}}).c

    def test_bracket_with_itself(self):
        with pytest.raises(ParseError):
            LieModel(dim=1, brackets=[BracketEntry(i=0, j=0, value={0: 1})]).build()


class TestInput:
    def test_fixture_names(self):
        assert resolve_input("nonexact").name == "nonexact.json"
        assert resolve_input("-") is None

    def test_missing_input(self):
        with pytest.raises(IoError):
            resolve_input("no-such-fixture")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"n": 1,\n "K": [', encoding="utf-8")
        with pytest.raises(ParseError, match="line 2"):
            parse_input(str(path), LinearPayload)

    def test_schema_violation(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"n": 0, "K": []}), encoding="utf-8")
        with pytest.raises(ParseError, match="n:"):
            parse_input(str(path), LinearPayload)

    def test_stdin(self, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps({"n": 1, "K": [[1, 0]]})))
        assert parse_input("-", LinearPayload).n == 1


class TestOutput:
    def report(self):
        report = Report(title="demo")
        report.record("zero", None)
        report.record("nonzero", False, detail="expected failure")
        return report

    def test_document(self):
        doc = report_document(self.report(), "bracket")
        assert doc["passed"] is False
        assert doc["failures"] == ["nonzero"]
        assert "timing" not in doc

    def test_checks_table(self, tmp_path):
        out = tmp_path / "checks.csv"
        emit(self.report(), "bracket", OutputFormat.CSV, str(out))
        assert out.read_text(encoding="utf-8").splitlines()[0] == ",".join(CHECK_COLUMNS)

    def test_frame_next_to_json(self, tmp_path):
        out = tmp_path / "run.json"
        frame = pd.DataFrame({"type": [0, 2]})
        emit(self.report(), "cp2", OutputFormat.JSON, str(out), frame, timing=0.5)
        assert json.loads(out.read_text(encoding="utf-8"))["timing"] == {"seconds": 0.5}
        assert (tmp_path / "run.csv").read_text(encoding="utf-8").splitlines() == ["type", "0", "2"]
